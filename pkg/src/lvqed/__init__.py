"""Numerical cross-checks for a CPT-odd extension of QED.

Core layers: Minkowski/Clifford algebra, the modified Dirac sector, Landau
levels and Penning-trap observables, the Foldy-Wouthuysen reduction with the
anomalous Zeeman shift, regularized one-loop integral tables with the induced
Chern-Simons coefficients, and Maxwell-Chern-Simons photon physics.  A FastAPI
service (``lvqed.service``) wraps the computations; the ``lvqed`` CLI is a thin
client of the same runners.
"""

__version__ = "0.1.0"
