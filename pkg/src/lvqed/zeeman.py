"""Foldy-Wouthuysen reduction with CPT-odd backgrounds and the modified
anomalous Zeeman shift of hydrogen-like states.

The nonrelativistic Hamiltonian kept through second order in 1/m is

    g0 [ m + (P - Sigma b0)^2 / 2m - P^4 / 8m^3 ] + e A0 + a0 + Sigma.b
    - (e/2m) Sigma.B - (e/4m^2) Sigma.(E x p) - (1/2m^2) (Sigma.P)(P.b)

with P = p - a - eA; the field-gradient pieces vanish for uniform fields and
are dropped here.  Everything below operates on constant numeric fields, the
only regime where a 4x4 matrix check of the expansion is faithful.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np
from numpy.polynomial.legendre import leggauss
from scipy.integrate import quad
from scipy.special import lpmv

from .clifford import build_basis
from .dirac import BackgroundFields

N_THETA = 64
N_PHI = 128


# --- Foldy-Wouthuysen -------------------------------------------------------

def fw_free_transform(p, m: float) -> np.ndarray:
    """Exact unitary that block-diagonalizes the free Dirac Hamiltonian.

    U = (E + m + g0 (alpha.p)) / sqrt(2 E (E + m)), with U H U^dag = g0 E.
    """
    if not m > 0:
        raise ValueError("mass must be positive")
    basis = build_basis(4)
    p = np.asarray(p, dtype=float)
    E = math.sqrt(float(p @ p) + m * m)
    odd = sum(basis.alpha[i] * p[i] for i in range(3))
    U = (E + m) * np.eye(4) + basis.beta @ odd
    return U / math.sqrt(2.0 * E * (E + m))


@dataclass(frozen=True)
class FieldConfiguration:
    """Uniform electromagnetic environment at the evaluation point."""

    A0: float = 0.0
    A: tuple = (0.0, 0.0, 0.0)
    B: tuple = (0.0, 0.0, 0.0)
    E_field: tuple = (0.0, 0.0, 0.0)
    p: tuple = (0.0, 0.0, 0.0)


def _sigma_dot(vec) -> np.ndarray:
    basis = build_basis(4)
    out = np.zeros((4, 4), dtype=complex)
    for i in range(3):
        out += basis.Sigma[i] * vec[i]
    return out


def _alpha_dot(vec) -> np.ndarray:
    basis = build_basis(4)
    out = np.zeros((4, 4), dtype=complex)
    for i in range(3):
        out += basis.alpha[i] * vec[i]
    return out


def fw_hamiltonian_nr(config: FieldConfiguration,
                      fields: BackgroundFields) -> np.ndarray:
    """Nonrelativistic 4x4 Hamiltonian through 1/m^2 for uniform fields."""
    basis = build_basis(4)
    m, e = fields.m, fields.e
    p = np.asarray(config.p, dtype=float)
    A = np.asarray(config.A, dtype=float)
    B = np.asarray(config.B, dtype=float)
    Ef = np.asarray(config.E_field, dtype=float)
    P = p - fields.a.spatial() - e * A
    b0 = fields.b.t
    bvec = fields.b.spatial()
    Psq = float(P @ P)

    mass_block = (m + (Psq + b0 * b0) / (2.0 * m) - Psq * Psq / (8.0 * m ** 3)) \
        * np.eye(4) - (b0 / m) * _sigma_dot(P)
    H = basis.beta @ mass_block
    H += (e * config.A0 + fields.a.t) * np.eye(4)
    H += _sigma_dot(bvec)
    H -= (e / (2.0 * m)) * _sigma_dot(B)
    H -= (e / (4.0 * m * m)) * _sigma_dot(np.cross(Ef, p))
    H -= (float(P @ bvec) / (2.0 * m * m)) * _sigma_dot(P)
    return H


def fw_odd_operator(P, b0: float) -> np.ndarray:
    """The block-off-diagonal part alpha.P + b0 G5 of the coupled Hamiltonian."""
    basis = build_basis(4)
    return _alpha_dot(P) + b0 * basis.gamma5_lower


def fw_identity_deviations(rng=None) -> dict:
    """Matrix-level checks of the algebra feeding the 1/m expansion.

    Verifies, for random constant vectors:
      * (alpha.u)(alpha.v) = u.v + i Sigma.(u x v);
      * odd^2 = P^2 - 2 b0 Sigma.P + b0^2  for odd = alpha.P + b0 G5;
      * [odd, Sigma.b] = 2i alpha.(P x b);
      * [alpha.P, i e alpha.E] = 2 e Sigma.(E x P)  (the uniform-E piece).
    Returns the maximum deviation per identity.
    """
    rng = np.random.default_rng(0) if rng is None else rng
    eye = np.eye(4)
    devs = {"alpha_product": 0.0, "odd_square": 0.0,
            "odd_even_commutator": 0.0, "electric_commutator": 0.0}
    for _ in range(100):
        u = rng.uniform(-1, 1, 3)
        v = rng.uniform(-1, 1, 3)
        lhs = _alpha_dot(u) @ _alpha_dot(v)
        rhs = float(u @ v) * eye + 1j * _sigma_dot(np.cross(u, v))
        devs["alpha_product"] = max(devs["alpha_product"],
                                    float(np.max(np.abs(lhs - rhs))))
    for _ in range(50):
        P = rng.uniform(-1, 1, 3)
        b0 = rng.uniform(-1, 1)
        b = rng.uniform(-1, 1, 3)
        Ef = rng.uniform(-1, 1, 3)
        e = rng.uniform(0.5, 2.0)
        odd = fw_odd_operator(P, b0)
        sq = float(P @ P + b0 * b0) * eye - 2.0 * b0 * _sigma_dot(P)
        devs["odd_square"] = max(devs["odd_square"],
                                 float(np.max(np.abs(odd @ odd - sq))))
        comm = odd @ _sigma_dot(b) - _sigma_dot(b) @ odd
        want = 2j * _alpha_dot(np.cross(P, b))
        devs["odd_even_commutator"] = max(
            devs["odd_even_commutator"], float(np.max(np.abs(comm - want))))
        inner = 1j * e * _alpha_dot(Ef)
        comm2 = _alpha_dot(P) @ inner - inner @ _alpha_dot(P)
        want2 = 2.0 * e * _sigma_dot(np.cross(Ef, P))
        devs["electric_commutator"] = max(
            devs["electric_commutator"], float(np.max(np.abs(comm2 - want2))))
    return devs


def fw_vs_exact_deviation(config: FieldConfiguration,
                          fields: BackgroundFields) -> float:
    """Gap between the reduced and the exact particle-branch eigenvalues.

    Compares the upper-block eigenvalues of the reduced Hamiltonian with the
    two largest eigenvalues of the exact one (valid for B = E = 0, where both
    sides are plain matrices over the same numeric fields).
    """
    from .dirac import hamiltonian_matrix

    if np.any(np.asarray(config.B) != 0.0) or np.any(
            np.asarray(config.E_field) != 0.0):
        raise ValueError("the eigenvalue comparison needs B = E = 0")
    exact = np.linalg.eigvalsh(
        hamiltonian_matrix(config.p, fields, A0=config.A0, A=config.A))
    reduced = fw_hamiltonian_nr(config, fields)
    upper = np.linalg.eigvalsh(reduced[:2, :2])
    return float(np.max(np.abs(np.sort(upper) - np.sort(exact[2:]))))


def fw_slope_vs_mass(config: FieldConfiguration, fields: BackgroundFields,
                     masses=(10.0, 20.0, 40.0, 80.0)) -> float:
    """Fitted log-log slope of the FW-vs-exact deviation across masses."""
    devs = []
    for m in masses:
        f = BackgroundFields(a=fields.a, b=fields.b, m=m, e=fields.e)
        devs.append(fw_vs_exact_deviation(config, f))
    slope = np.polyfit(np.log(np.asarray(masses)), np.log(np.asarray(devs)), 1)[0]
    return float(slope)


# --- spin-orbit coupled states ----------------------------------------------

@dataclass(frozen=True)
class CoupledState:
    """Total-angular-momentum eigenstate |j m_j> built on orbital ell."""

    ell: int
    branch: str          # "plus" for j = ell + 1/2, "minus" for j = ell - 1/2
    m_j: float           # half-integer, |m_j| <= j

    def __post_init__(self):
        if self.ell < 0:
            raise ValueError("ell must be nonnegative")
        if self.branch not in ("plus", "minus"):
            raise ValueError("branch must be 'plus' or 'minus'")
        if self.branch == "minus" and self.ell == 0:
            raise ValueError("j = ell - 1/2 needs ell >= 1")
        j = self.j
        if abs(self.m_j) > j + 1e-12 or abs(2 * self.m_j - round(2 * self.m_j)) > 1e-12 \
                or round(2 * self.m_j) % 2 == 0:
            raise ValueError("m_j must be a half-integer with |m_j| <= j")

    @property
    def j(self) -> float:
        return self.ell + 0.5 if self.branch == "plus" else self.ell - 0.5

    @property
    def m_orb(self) -> int:
        """Orbital magnetic number of the spin-up component, m = m_j - 1/2."""
        return int(round(self.m_j - 0.5))


def cg_weights(ell: int, m: int):
    """Coupling weights (alpha, beta) of the j = ell + 1/2 doublet.

    alpha^2 = (ell + m + 1)/(2 ell + 1) and beta^2 = (ell - m)/(2 ell + 1);
    the normalization alpha^2 + beta^2 = 1 is checked in exact rational
    arithmetic before taking square roots.
    """
    if not -ell - 1 <= m <= ell:
        raise ValueError("m out of range")
    asq = Fraction(ell + m + 1, 2 * ell + 1)
    bsq = Fraction(ell - m, 2 * ell + 1)
    assert asq + bsq == 1
    return math.sqrt(asq), math.sqrt(bsq)


def sph_harm(ell: int, m: int, theta, phi):
    """Orthonormal spherical harmonic with the Condon-Shortley phase."""
    if abs(m) > ell:
        return np.zeros_like(np.broadcast_arrays(
            np.asarray(theta, dtype=float), np.asarray(phi, dtype=float))[0],
            dtype=complex)
    theta = np.asarray(theta, dtype=float)
    phi = np.asarray(phi, dtype=float)
    ma = abs(m)
    norm = math.sqrt((2 * ell + 1) / (4 * math.pi)
                     * math.factorial(ell - ma) / math.factorial(ell + ma))
    base = norm * lpmv(ma, ell, np.cos(theta)) * np.exp(1j * ma * phi)
    if m >= 0:
        return base
    return (-1) ** ma * np.conj(base)


def coupled_spinor(state: CoupledState, theta, phi) -> np.ndarray:
    """Two-component angular wavefunction of the coupled state."""
    m = state.m_orb
    alpha, beta = cg_weights(state.ell, m)
    up = sph_harm(state.ell, m, theta, phi)
    down = sph_harm(state.ell, m + 1, theta, phi)
    if state.branch == "plus":
        return np.stack([alpha * up, beta * down])
    return np.stack([beta * up, -alpha * down])


def zeeman_shift_axial(state: CoupledState, b_z: float) -> float:
    """First-order level shift from the axial-z background.

    +2 m_j b_z / (2 ell + 1) on the j = ell + 1/2 branch and the opposite sign
    on j = ell - 1/2; each line therefore splits into 2j + 1 components with
    linear spacing b_z / (2 ell + 1) (doubled relative to part of the earlier
    literature; the quadrature oracle pins the value used here).
    """
    sign = 1.0 if state.branch == "plus" else -1.0
    return sign * 2.0 * state.m_j * b_z / (2 * state.ell + 1)


# --- hydrogen radial functions (Bohr radius 1) --------------------------------

_RADIAL = {
    (1, 0): lambda r: 2.0 * np.exp(-r),
    (2, 0): lambda r: (1.0 / (2.0 * math.sqrt(2.0))) * (2.0 - r) * np.exp(-r / 2),
    (2, 1): lambda r: (1.0 / (2.0 * math.sqrt(6.0))) * r * np.exp(-r / 2),
    (3, 0): lambda r: (2.0 / (81.0 * math.sqrt(3.0)))
        * (27.0 - 18.0 * r + 2.0 * r * r) * np.exp(-r / 3),
    (3, 1): lambda r: (4.0 / (81.0 * math.sqrt(6.0)))
        * (6.0 - r) * r * np.exp(-r / 3),
    (3, 2): lambda r: (4.0 / (81.0 * math.sqrt(30.0))) * r * r * np.exp(-r / 3),
}


def hydrogen_radial(n: int, ell: int, r):
    if (n, ell) not in _RADIAL:
        raise ValueError("radial functions are built in for n <= 3 only")
    return _RADIAL[(n, ell)](np.asarray(r, dtype=float))


def _radial_factor(n: int, ell: int, weight: str) -> float:
    R = _RADIAL[(n, ell)]
    if weight == "norm":
        f = lambda r: R(r) ** 2 * r * r
    elif weight == "r":
        f = lambda r: R(r) ** 2 * r ** 3
    elif weight == "dr":
        h = 1e-6
        f = lambda r: R(r) * (R(r + h) - R(r - h)) / (2 * h) * r * r
    else:
        raise ValueError(weight)
    val, _ = quad(f, 0.0, np.inf, limit=200)
    return float(val)


# --- quadrature oracle --------------------------------------------------------

def _angular_grids():
    x, w = leggauss(N_THETA)
    theta = np.arccos(x)
    phi = np.linspace(0.0, 2.0 * math.pi, N_PHI, endpoint=False)
    return theta, w, phi


def _legendre_theta(ell: int, m: int, x: np.ndarray) -> np.ndarray:
    """Normalized theta factor: Y_ell^m without the azimuthal phase."""
    ma = abs(m)
    if ma > ell:
        return np.zeros_like(np.asarray(x, dtype=float))
    norm = math.sqrt((2 * ell + 1) / (4 * math.pi)
                     * math.factorial(ell - ma) / math.factorial(ell + ma))
    return norm * lpmv(ma, ell, x)


def _legendre_theta_deriv(ell: int, m: int, x: np.ndarray) -> np.ndarray:
    """(1 - x^2) d/dx of the normalized theta factor, via the exact recurrence."""
    ma = abs(m)
    if ma > ell:
        return np.zeros_like(x)
    norm = math.sqrt((2 * ell + 1) / (4 * math.pi)
                     * math.factorial(ell - ma) / math.factorial(ell + ma))
    upper = (ell + ma) * lpmv(ma, ell - 1, x) if ell >= 1 else np.zeros_like(x)
    return norm * (upper - ell * x * lpmv(ma, ell, x))


def zeeman_shift_oracle(state: CoupledState, fields: BackgroundFields,
                        B0: float, n_radial: int | None = None) -> dict:
    """Numerical matrix elements behind the Zeeman analysis.

    Returns the axial shift <sigma.b_z>, together with the couplings that
    integrate to zero: ``vector`` combines the vector-background gradient
    term with its vector-potential partner (symmetric gauge, uniform B0
    along z), ``b0_gradient`` is the axial time-component gradient term, and
    ``sigma_dot_A`` the spin/vector-potential term.
    """
    ell = state.ell
    n = n_radial if n_radial is not None else ell + 1
    if n > 3 or ell >= n:
        raise ValueError("radial functions available for n <= 3, ell < n")
    m_e = fields.m
    theta, w_theta, phi = _angular_grids()
    spinor = coupled_spinor(state, theta[:, None], phi[None, :])
    weight = w_theta[:, None] * (2.0 * math.pi / N_PHI)

    def angular_expectation(sigma_matrix):
        dens = np.einsum("atp,ab,btp->tp", spinor.conj(), sigma_matrix, spinor)
        return float(np.sum(weight * dens).real)

    sx = np.array([[0, 1], [1, 0]], dtype=complex)
    sy = np.array([[0, -1j], [1j, 0]], dtype=complex)
    sz = np.array([[1, 0], [0, -1]], dtype=complex)

    axial = fields.b.z * angular_expectation(sz)

    # gradient couplings: radial factor x (angular integrals that vanish)
    x, w = leggauss(N_THETA)
    m_orb = state.m_orb
    alpha_w, beta_w = cg_weights(ell, m_orb)
    pieces = [(alpha_w, m_orb), (beta_w, m_orb + 1)]
    ang_cos = 0.0
    ang_deriv = 0.0
    for coef, m in pieces:
        th = _legendre_theta(ell, m, x)
        ang_cos += coef * coef * float(np.sum(w * th * th * x)) * 2.0 * math.pi
        dth = _legendre_theta_deriv(ell, m, x)
        # int Theta dTheta/dx (x^2 - 1) dx, written with the recurrence factor
        ang_deriv += coef * coef * float(np.sum(w * th * (-dth))) * 2.0 * math.pi
    rad_d = _radial_factor(n, ell, "dr")
    rad_n = _radial_factor(n, ell, "norm")
    rad_r = _radial_factor(n, ell, "r")
    # transverse-a coupling through the symmetric-gauge potential:
    # expectation of (y a_x - x a_y), which dies in the azimuthal integral
    density = np.sum(np.abs(spinor) ** 2, axis=0)
    sin_t_grid = np.sin(theta)[:, None]
    exp_y = np.sum(weight * density * sin_t_grid * np.sin(phi)[None, :])
    exp_x = np.sum(weight * density * sin_t_grid * np.cos(phi)[None, :])
    pot = abs(fields.e * B0 / (2.0 * m_e)) * rad_r \
        * (abs(fields.a.x * exp_y) + abs(fields.a.y * exp_x))
    vector = abs(fields.a.z / m_e) * (abs(rad_d * ang_cos)
                                      + abs(rad_n * ang_deriv)) + pot
    b0_gradient = abs(fields.b.t * state.m_j / ((2 * ell + 1) * m_e)) \
        * (abs(rad_d * ang_cos) + abs(rad_n * ang_deriv))

    # sigma.A for A = -B0 (y/2, -x/2, 0): expectation of y sigma_x - x sigma_y
    dens_x = np.einsum("atp,ab,btp->tp", spinor.conj(), sx, spinor)
    dens_y = np.einsum("atp,ab,btp->tp", spinor.conj(), sy, spinor)
    ang_sA = np.sum(weight * sin_t_grid
                    * (np.sin(phi)[None, :] * dens_x
                       - np.cos(phi)[None, :] * dens_y))
    sigma_dot_A = abs(fields.e * fields.b.t * B0 / (2.0 * m_e)
                      * rad_r * complex(ang_sA))

    return {
        "axial": axial,
        "vector": vector,
        "b0_gradient": b0_gradient,
        "sigma_dot_A": float(sigma_dot_A),
    }
