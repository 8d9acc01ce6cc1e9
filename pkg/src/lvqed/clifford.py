"""Concrete Dirac-matrix bases in 3+1 and 2+1 dimensions.

The 4D basis is the standard (Dirac) representation.  Two axial matrices are
exposed: ``gamma5 = i g0 g1 g2 g3`` (block off-diagonal identity) and its
index-lowered partner ``gamma5_lower = -gamma5``.  The fermion-sector modules
couple the axial background through ``gamma5_lower``; that choice is what makes
the closed-form spectra, the shift formulas and the gamma5 trace identity hold
simultaneously with eps^{0123} = +1.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .minkowski import FourVector, ThreeVector, levi_civita

PAULI = (
    np.array([[0, 1], [1, 0]], dtype=complex),
    np.array([[0, -1j], [1j, 0]], dtype=complex),
    np.array([[1, 0], [0, -1]], dtype=complex),
)

_METRIC_DIAG = {3: (1.0, -1.0, -1.0), 4: (1.0, -1.0, -1.0, -1.0)}


def _freeze(a: np.ndarray) -> np.ndarray:
    a.setflags(write=False)
    return a


@dataclass(frozen=True)
class GammaBasis:
    """Dense complex gamma matrices for one spacetime dimension."""

    dimension: int
    gamma: tuple
    gamma5: np.ndarray | None
    gamma5_lower: np.ndarray | None
    alpha: tuple
    beta: np.ndarray
    Sigma: tuple | None
    C: np.ndarray | None

    @property
    def order(self) -> int:
        return 4 if self.dimension == 4 else 2

    @property
    def metric_diag(self) -> tuple:
        return _METRIC_DIAG[self.dimension]

    def identity(self) -> np.ndarray:
        return np.eye(self.order, dtype=complex)

    def gamma_lower(self, mu: int) -> np.ndarray:
        return self.metric_diag[mu] * self.gamma[mu]

    def sigma_munu(self, mu: int, nu: int) -> np.ndarray:
        g = self.gamma
        return 0.5j * (g[mu] @ g[nu] - g[nu] @ g[mu])

    def require_gamma5(self) -> np.ndarray:
        if self.gamma5 is None:
            raise ValueError("no gamma5-like object exists in 2+1 dimensions")
        return self.gamma5


@lru_cache(maxsize=None)
def build_basis(dimension: int) -> GammaBasis:
    """Gamma matrices in the standard representation for dimension 3 or 4."""
    if dimension == 4:
        i2 = np.eye(2, dtype=complex)
        z2 = np.zeros((2, 2), dtype=complex)
        g0 = np.block([[i2, z2], [z2, -i2]])
        gk = tuple(np.block([[z2, s], [-s, z2]]) for s in PAULI)
        gamma = (g0,) + gk
        gamma5 = 1j * g0 @ gk[0] @ gk[1] @ gk[2]
        alpha = tuple(g0 @ gi for gi in gk)
        Sigma = tuple(a @ gamma5 for a in alpha)
        C = 1j * gk[1] @ g0
        return GammaBasis(
            dimension=4,
            gamma=tuple(_freeze(g.copy()) for g in gamma),
            gamma5=_freeze(gamma5.copy()),
            gamma5_lower=_freeze((-gamma5).copy()),
            alpha=tuple(_freeze(a.copy()) for a in alpha),
            beta=_freeze(g0.copy()),
            Sigma=tuple(_freeze(s.copy()) for s in Sigma),
            C=_freeze(C.copy()),
        )
    if dimension == 3:
        g0 = np.array([[0, -1j], [1j, 0]], dtype=complex)
        g1 = np.array([[0, 1j], [1j, 0]], dtype=complex)
        g2 = np.array([[1j, 0], [0, -1j]], dtype=complex)
        gamma = (g0, g1, g2)
        alpha = (g0 @ g1, g0 @ g2)
        return GammaBasis(
            dimension=3,
            gamma=tuple(_freeze(g.copy()) for g in gamma),
            gamma5=None,
            gamma5_lower=None,
            alpha=tuple(_freeze(a.copy()) for a in alpha),
            beta=_freeze(g0.copy()),
            Sigma=None,
            C=None,
        )
    raise ValueError("dimension must be 3 or 4")


def slash(basis: GammaBasis, v) -> np.ndarray:
    """Contraction gamma^mu v_mu; its square equals (v.v) * identity."""
    if isinstance(v, FourVector):
        if basis.dimension != 4:
            raise ValueError("four-vector contracted with a 3D basis")
        comps = v.lowered()
    elif isinstance(v, ThreeVector):
        if basis.dimension != 3:
            raise ValueError("three-vector contracted with a 4D basis")
        comps = v.lowered()
    else:
        comps = np.asarray(v, dtype=float)
        if comps.shape != (basis.dimension,):
            raise ValueError("vector dimension does not match basis")
        comps = comps * np.array(basis.metric_diag)
    out = np.zeros((basis.order, basis.order), dtype=complex)
    for mu in range(basis.dimension):
        out += basis.gamma[mu] * comps[mu]
    return out


def trace_product(basis: GammaBasis, factors) -> complex:
    """Trace of an ordered matrix product; empty input gives the matrix order."""
    factors = list(factors)
    if not factors:
        return complex(basis.order)
    acc = np.asarray(factors[0], dtype=complex)
    for f in factors[1:]:
        acc = acc @ np.asarray(f, dtype=complex)
    return complex(np.trace(acc))


# Discrete-transformation matrices: parity conjugates with g0, time reversal
# with g1 g3 plus complex conjugation of the sandwiched matrix, charge
# conjugation with C = i g2 g0 acting on the transpose.  The expected signs
# below are the bilinear table entries; the C column already absorbs the -1
# from reordering anticommuting fields.

_BILINEARS = ("scalar", "vector", "pseudoscalar", "axial_vector", "tensor")


def _bilinear_reps(basis: GammaBasis):
    """Representative matrices for each bilinear, with index bookkeeping."""
    g = basis.gamma
    g5 = basis.require_gamma5()
    reps = {
        "scalar": [(np.eye(4, dtype=complex), 1.0)],
        "vector": [(g[mu], basis.metric_diag[mu]) for mu in range(4)],
        "pseudoscalar": [(1j * g5, 1.0)],
        "axial_vector": [(g5 @ g[mu], basis.metric_diag[mu]) for mu in range(4)],
        "tensor": [
            (basis.sigma_munu(mu, nu),
             basis.metric_diag[mu] * basis.metric_diag[nu])
            for mu in range(4) for nu in range(4) if mu != nu
        ],
    }
    return reps


def discrete_symmetry_check(basis: GammaBasis, tol: float = 1e-13):
    """Verify the C/P/T sign table for all five bilinears as matrix identities.

    For parity the check is  g0 G g0 = sign * G_lowered, for time reversal
    (g1 g3) conj(G) (g1 g3)^{-1} = sign * G_lowered, and for charge
    conjugation  C G^T C^{-1} = sign * G.  Returns nested booleans per
    bilinear per transformation.
    """
    if basis.dimension != 4:
        raise ValueError("discrete symmetries are implemented for the 4D basis")
    g = basis.gamma
    P = g[0]
    T = g[1] @ g[3]
    T_inv = np.linalg.inv(T)
    C = basis.C
    C_inv = np.linalg.inv(C)

    expected = {
        # bilinear: (C sign, P sign on lowered, T sign on lowered)
        "scalar": (+1, +1, +1),
        "vector": (-1, +1, +1),
        "pseudoscalar": (+1, -1, -1),
        "axial_vector": (+1, -1, +1),
        "tensor": (-1, +1, -1),
    }

    reps = _bilinear_reps(basis)
    report: dict[str, dict[str, bool]] = {}
    for name in _BILINEARS:
        c_sign, p_sign, t_sign = expected[name]
        ok_c = ok_p = ok_t = True
        for mat, lower_factor in reps[name]:
            lowered = lower_factor * mat
            ok_p &= np.max(np.abs(P @ mat @ P - p_sign * lowered)) < tol
            ok_t &= np.max(np.abs(T @ mat.conj() @ T_inv - t_sign * lowered)) < tol
            ok_c &= np.max(np.abs(C @ mat.T @ C_inv - c_sign * mat)) < tol
        report[name] = {"C": bool(ok_c), "P": bool(ok_p), "T": bool(ok_t),
                        "CPT": bool(ok_c and ok_p and ok_t)}
    return report


def gamma5_trace_orientation(basis: GammaBasis) -> int:
    """Sign s such that tr[g^m g^n g^s g^r gamma5_lower] = s * 4i * eps^{mnsr}."""
    g = basis.gamma
    val = np.trace(g[0] @ g[1] @ g[2] @ g[3] @ basis.gamma5_lower)
    return int(round((val / 4j).real)) * levi_civita((0, 1, 2, 3))
