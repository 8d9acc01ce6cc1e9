"""Minkowski vectors, Levi-Civita symbols, and small dense Hermitian solves.

Conventions used throughout the package:

* metric signature mostly-minus, diag(1, -1, -1, -1) in 3+1 dimensions and
  diag(1, -1, -1) in 2+1;
* orientation eps^{0123} = +1 and eps^{012} = +1.  Lowering all four indices
  flips the 4D sign (eps_{0123} = -1) while the 3D symbol is unchanged.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

METRIC_4 = np.diag([1.0, -1.0, -1.0, -1.0])
METRIC_3 = np.diag([1.0, -1.0, -1.0])


@dataclass(frozen=True)
class FourVector:
    """Real Lorentz vector (t, x, y, z) in natural units."""

    t: float
    x: float
    y: float
    z: float

    @classmethod
    def from_sequence(cls, seq) -> "FourVector":
        t, x, y, z = (float(c) for c in seq)
        return cls(t, x, y, z)

    def as_array(self) -> np.ndarray:
        return np.array([self.t, self.x, self.y, self.z], dtype=float)

    def lowered(self) -> np.ndarray:
        """Covariant components v_mu (spatial parts negated)."""
        return np.array([self.t, -self.x, -self.y, -self.z], dtype=float)

    def spatial(self) -> np.ndarray:
        return np.array([self.x, self.y, self.z], dtype=float)

    def spatial_norm(self) -> float:
        return math.sqrt(self.x * self.x + self.y * self.y + self.z * self.z)

    def minkowski_sq(self) -> float:
        return minkowski_dot(self, self)

    def __add__(self, other: "FourVector") -> "FourVector":
        return FourVector(self.t + other.t, self.x + other.x,
                          self.y + other.y, self.z + other.z)

    def __sub__(self, other: "FourVector") -> "FourVector":
        return FourVector(self.t - other.t, self.x - other.x,
                          self.y - other.y, self.z - other.z)

    def __neg__(self) -> "FourVector":
        return FourVector(-self.t, -self.x, -self.y, -self.z)

    def scaled(self, c: float) -> "FourVector":
        return FourVector(c * self.t, c * self.x, c * self.y, c * self.z)


@dataclass(frozen=True)
class ThreeVector:
    """Real 2+1 dimensional Lorentz vector (t, x, y)."""

    t: float
    x: float
    y: float

    @classmethod
    def from_sequence(cls, seq) -> "ThreeVector":
        t, x, y = (float(c) for c in seq)
        return cls(t, x, y)

    def as_array(self) -> np.ndarray:
        return np.array([self.t, self.x, self.y], dtype=float)

    def lowered(self) -> np.ndarray:
        return np.array([self.t, -self.x, -self.y], dtype=float)

    def spatial(self) -> np.ndarray:
        return np.array([self.x, self.y], dtype=float)

    def minkowski_sq(self) -> float:
        return minkowski_dot(self, self)

    def __neg__(self) -> "ThreeVector":
        return ThreeVector(-self.t, -self.x, -self.y)

    def scaled(self, c: float) -> "ThreeVector":
        return ThreeVector(c * self.t, c * self.x, c * self.y)


def minkowski_dot(u, v) -> float:
    """Mostly-minus inner product; u and v must live in the same dimension."""
    if isinstance(u, FourVector) and isinstance(v, FourVector):
        return float(u.as_array() @ v.lowered())
    if isinstance(u, ThreeVector) and isinstance(v, ThreeVector):
        return float(u.as_array() @ v.lowered())
    raise ValueError("minkowski_dot requires two vectors of the same dimension")


def _permutation_sign(indices: tuple[int, ...]) -> int:
    sign = 1
    idx = list(indices)
    for i in range(len(idx)):
        for j in range(i + 1, len(idx)):
            if idx[i] == idx[j]:
                return 0
            if idx[i] > idx[j]:
                sign = -sign
    return sign


def levi_civita(indices) -> int:
    """Totally antisymmetric symbol, eps^{012}=+1 (3D) or eps^{0123}=+1 (4D)."""
    idx = tuple(int(i) for i in indices)
    if len(idx) not in (3, 4):
        raise ValueError("levi_civita takes 3 or 4 indices")
    dim = len(idx)
    for i in idx:
        if not 0 <= i < dim:
            raise ValueError(f"index {i} out of range for dimension {dim}")
    return _permutation_sign(idx)


def epsilon_contraction_3d(mu: int, sigma: int, rho: int, tau: int) -> int:
    """Sum over nu of eps_{mu nu rho} eps^{nu sigma tau} in 2+1 dimensions.

    Both symbols are plain permutation signs here (lowering three indices with
    the  diag(1,-1,-1) metric leaves the 3D symbol unchanged), and the repeated
    index is summed directly.  The result obeys
    -delta^sigma_mu delta^tau_rho + delta^sigma_rho delta^tau_mu.
    """
    for i in (mu, sigma, rho, tau):
        if not 0 <= int(i) < 3:
            raise ValueError("indices must lie in 0..2")
    total = 0
    for nu in range(3):
        total += levi_civita((mu, nu, rho)) * levi_civita((nu, sigma, tau))
    return total


def eig_hermitian(matrix, atol: float = 1e-12):
    """Eigendecomposition of a Hermitian matrix, eigenvalues ascending.

    Returns (eigenvalues, eigenvectors) with M @ V = V @ diag(w).  Refuses
    non-Hermitian input; reconstruction is checked to 1e-10 * ||M||.
    """
    m = np.asarray(matrix, dtype=complex)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise ValueError("eig_hermitian needs a square matrix")
    scale = max(1.0, float(np.max(np.abs(m))))
    if float(np.max(np.abs(m - m.conj().T))) > atol * scale:
        raise ValueError("matrix is not Hermitian within tolerance")
    w, v = np.linalg.eigh(m)
    resid = float(np.max(np.abs(m @ v - v @ np.diag(w))))
    if resid > 1e-10 * scale:
        raise RuntimeError(f"eigendecomposition reconstruction error {resid:g}")
    return w, v
