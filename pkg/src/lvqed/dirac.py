"""Spectrum, spinors, and propagators of the Dirac equation with constant
CPT-odd vector (a) and axial (b) backgrounds.

The equation of motion kernel is ``pslash - aslash - bslash*G5 - m`` with
``G5 = gamma5_lower``; see :mod:`lvqed.clifford` for why the lowered axial
matrix is the consistent coupling.  The dispersion relation is the quartic

    [(p-a)^2 - b^2 - m^2]^2 - 4 [b.(p-a)]^2 + 4 b^2 (p-a)^2 = 0,

even under b -> -b, whose four real roots split into two particle and two
antiparticle branches for small backgrounds.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .clifford import GammaBasis, build_basis, slash
from .minkowski import FourVector, eig_hermitian


@dataclass(frozen=True)
class BackgroundFields:
    """Constant backgrounds a_mu, b_mu plus fermion mass and charge."""

    a: FourVector
    b: FourVector
    m: float
    e: float = 1.0

    def __post_init__(self):
        if not self.m > 0:
            raise ValueError("mass must be positive")
        for v in (self.a, self.b):
            if not np.all(np.isfinite(v.as_array())):
                raise ValueError("background components must be finite")

    @classmethod
    def free(cls, m: float, e: float = 1.0) -> "BackgroundFields":
        zero = FourVector(0.0, 0.0, 0.0, 0.0)
        return cls(a=zero, b=zero, m=m, e=e)


@dataclass(frozen=True)
class DispersionRoots:
    """Roots of the dispersion quartic at fixed spatial momentum.

    ``particle``/``antiparticle`` are populated when all roots are real;
    antiparticle energies refer to the sign-reversed root branch (the physical
    antiparticle carries the opposite spatial momentum).
    """

    roots: tuple
    all_real: bool
    particle: tuple | None
    antiparticle: tuple | None


@dataclass(frozen=True)
class ModifiedSpinor:
    components: np.ndarray
    kind: str            # "particle" | "antiparticle"
    alpha: int           # 1 or 2
    momentum: np.ndarray
    energy: float


def _basis() -> GammaBasis:
    return build_basis(4)


def dispersion_quartic(p_spatial, fields: BackgroundFields) -> np.ndarray:
    """Monic coefficients (descending powers of p0) of the dispersion quartic."""
    q2, q1, q0 = _x_space_coefficients(p_spatial, fields)
    a0 = fields.a.t
    # binomial shift of x^4 + q2 x^2 + q1 x + q0 under x -> p0 - a0
    poly_x = np.array([1.0, 0.0, q2, q1, q0])
    shifted = np.zeros(5)
    for n, cn in zip(range(4, -1, -1), poly_x):
        if cn == 0.0:
            continue
        for j in range(n + 1):
            shifted[4 - j] += cn * math.comb(n, j) * (-a0) ** (n - j)
    return shifted


def quartic_residual(p0: complex, p_spatial, fields: BackgroundFields) -> float:
    """|LHS| of the dispersion quartic at a candidate root p0."""
    coeffs = dispersion_quartic(p_spatial, fields)
    return float(abs(np.polyval(coeffs, p0)))


def dispersion_scale(p_spatial, fields: BackgroundFields) -> float:
    k = np.asarray(p_spatial, dtype=float)
    return max(
        fields.m,
        float(np.linalg.norm(k)),
        float(np.max(np.abs(fields.a.as_array()))),
        float(np.max(np.abs(fields.b.as_array()))),
        1e-30,
    )


def _x_space_coefficients(p_spatial, fields: BackgroundFields):
    """Quartic coefficients in the shifted energy x = p0 - a0."""
    k = np.asarray(p_spatial, dtype=float) - fields.a.spatial()
    K = float(k @ k)
    beta = fields.b.minkowski_sq()
    c = float(fields.b.spatial() @ k)
    b0 = fields.b.t
    S = K + beta + fields.m ** 2
    q2 = -2.0 * S - 4.0 * b0 * b0 + 4.0 * beta
    q1 = 8.0 * b0 * c
    q0 = S * S - 4.0 * c * c - 4.0 * beta * K
    return q2, q1, q0


def dispersion_roots(p_spatial, fields: BackgroundFields,
                     imag_tol: float = 1e-8) -> DispersionRoots:
    """All four roots of the quartic via the companion matrix.

    The odd coefficient vanishes exactly when b0 * (b.(p-a)) = 0; that
    biquadratic case (which contains the double roots of the free and
    timelike-b limits) is solved in closed form, since polynomial root
    finders lose half the digits on degenerate roots.  When every root is
    real the two largest are labelled particle energies E_u (ascending) and
    the negated two smallest antiparticle energies E_v (ascending).
    """
    q2, q1, q0 = _x_space_coefficients(p_spatial, fields)
    scale = dispersion_scale(p_spatial, fields)
    if abs(q1) <= 1e-14 * scale ** 3:
        disc = complex(q2 * q2 / 4.0 - q0) ** 0.5
        roots = []
        for ysq in (-q2 / 2.0 - disc, -q2 / 2.0 + disc):
            r = complex(ysq) ** 0.5
            roots.extend([-r, r])
        roots = np.array(roots)
    else:
        coeffs = np.array([1.0, 0.0, q2, q1, q0])
        roots = np.roots(coeffs)
        deriv = np.polyder(coeffs)
        # Newton polish tightens the companion-matrix roots; the generic
        # quartic here has well separated roots
        for _ in range(2):
            slope = np.polyval(deriv, roots)
            good = np.abs(slope) > 1e-12
            roots[good] = roots[good] \
                - np.polyval(coeffs, roots[good]) / slope[good]
    roots = roots + fields.a.t
    order = np.argsort(roots.real)
    roots = roots[order]
    all_real = bool(np.max(np.abs(roots.imag)) <= imag_tol * scale)
    if all_real:
        r = np.sort(roots.real)
        particle = (float(r[2]), float(r[3]))
        antiparticle = (float(-r[1]), float(-r[0]))
    else:
        particle = antiparticle = None
    return DispersionRoots(
        roots=tuple(complex(z) for z in roots),
        all_real=all_real,
        particle=particle,
        antiparticle=antiparticle,
    )


def energies_closed_form(p_spatial, fields: BackgroundFields, case: str):
    """Closed-form labelled energies for purely timelike or spacelike b.

    Returns {"E_u": (E1, E2), "E_v": (E1, E2)} indexed by the branch label
    alpha in {1, 2}.  For the spacelike case the inner radicand is
    [b.(p-a)]^2 + m^2 b^2, the form validated against the quartic roots.
    """
    p = np.asarray(p_spatial, dtype=float)
    a_vec = fields.a.spatial()
    b_vec = fields.b.spatial()
    m, a0, b0 = fields.m, fields.a.t, fields.b.t
    if case == "timelike_b":
        if np.linalg.norm(b_vec) > 1e-12 * max(1.0, abs(b0)):
            raise ValueError("timelike case requires a purely timelike b")
        ku = np.linalg.norm(p - a_vec)
        kv = np.linalg.norm(p + a_vec)
        e_u = tuple(math.sqrt((ku + (-1) ** al * b0) ** 2 + m * m) + a0
                    for al in (1, 2))
        e_v = tuple(math.sqrt((kv - (-1) ** al * b0) ** 2 + m * m) - a0
                    for al in (1, 2))
    elif case == "spacelike_b":
        if abs(b0) > 1e-12 * max(1.0, float(np.linalg.norm(b_vec))):
            raise ValueError("spacelike case requires a purely spatial b")
        bsq = float(b_vec @ b_vec)
        ku = p - a_vec
        kv = p + a_vec
        inner_u = math.sqrt(float(b_vec @ ku) ** 2 + m * m * bsq)
        inner_v = math.sqrt(float(b_vec @ kv) ** 2 + m * m * bsq)
        e_u = tuple(
            math.sqrt(float(ku @ ku) + m * m + bsq + (-1) ** al * 2.0 * inner_u)
            + a0 for al in (1, 2))
        e_v = tuple(
            math.sqrt(float(kv @ kv) + m * m + bsq - (-1) ** al * 2.0 * inner_v)
            - a0 for al in (1, 2))
    else:
        raise ValueError("case must be 'timelike_b' or 'spacelike_b'")
    return {"E_u": e_u, "E_v": e_v}


def hamiltonian_matrix(p_spatial, fields: BackgroundFields,
                       A0: float = 0.0, A=(0.0, 0.0, 0.0)) -> np.ndarray:
    """One-particle Hamiltonian with minimal coupling and both backgrounds.

    H = alpha.(p - a - eA) + m gamma0 + (a0 + e A0) + b0 G5 + Sigma.b,
    with G5 the lowered axial matrix.  Hermitian by construction; its
    characteristic polynomial (at A = 0) is the dispersion quartic.
    """
    basis = _basis()
    p = np.asarray(p_spatial, dtype=float)
    kin = p - fields.a.spatial() - fields.e * np.asarray(A, dtype=float)
    H = np.zeros((4, 4), dtype=complex)
    for i in range(3):
        H += basis.alpha[i] * kin[i]
        H += basis.Sigma[i] * fields.b.spatial()[i]
    H += fields.m * basis.beta
    H += (fields.a.t + fields.e * float(A0)) * np.eye(4)
    H += fields.b.t * basis.gamma5_lower
    return H


def hamiltonian_eigenvalues(p_spatial, fields: BackgroundFields) -> np.ndarray:
    w, _ = eig_hermitian(hamiltonian_matrix(p_spatial, fields))
    return w


def helicity_spinor(direction, alpha: int) -> np.ndarray:
    """Two-spinor eigenvector of sigma.n with eigenvalue -(-1)^alpha."""
    n = np.asarray(direction, dtype=float)
    norm = np.linalg.norm(n)
    if norm == 0.0:
        raise ValueError("helicity direction must be nonzero")
    n = n / norm
    theta = math.acos(max(-1.0, min(1.0, n[2])))
    phi = math.atan2(n[1], n[0])
    if alpha == 1:     # helicity +1
        return np.array([math.cos(theta / 2.0),
                         math.sin(theta / 2.0) * np.exp(1j * phi)], dtype=complex)
    if alpha == 2:     # helicity -1
        return np.array([-math.sin(theta / 2.0) * np.exp(-1j * phi),
                         math.cos(theta / 2.0)], dtype=complex)
    raise ValueError("alpha must be 1 or 2")


def _require_timelike_b(fields: BackgroundFields):
    if np.linalg.norm(fields.b.spatial()) > 1e-12 * max(1.0, abs(fields.b.t)):
        raise ValueError("spinor construction requires purely timelike b")


def spinor_u(alpha: int, p_spatial, fields: BackgroundFields,
             axis=(0.0, 0.0, 1.0)) -> ModifiedSpinor:
    """Normalized positive-energy spinor for purely timelike b.

    The two-spinor is the helicity eigenstate of sigma.(p - a)/|p - a| with
    eigenvalue -(-1)^alpha; `axis` supplies the quantization direction when
    |p - a| vanishes.
    """
    _require_timelike_b(fields)
    p = np.asarray(p_spatial, dtype=float)
    k = p - fields.a.spatial()
    kn = np.linalg.norm(k)
    direction = k if kn > 0.0 else np.asarray(axis, dtype=float)
    chi = helicity_spinor(direction, alpha)
    m, a0, b0 = fields.m, fields.a.t, fields.b.t
    E = math.sqrt((kn + (-1) ** alpha * b0) ** 2 + m * m) + a0
    xi = (-((-1) ** alpha) * kn - b0) / (E - a0 + m)
    N = math.sqrt((E - a0 + m) / (2.0 * m))
    comps = N * np.concatenate([chi, xi * chi])
    return ModifiedSpinor(components=comps, kind="particle", alpha=alpha,
                          momentum=p.copy(), energy=E)


def spinor_v(alpha: int, p_spatial, fields: BackgroundFields,
             axis=(0.0, 0.0, 1.0)) -> ModifiedSpinor:
    """Normalized antiparticle spinor for purely timelike b (vbar v = -1)."""
    _require_timelike_b(fields)
    p = np.asarray(p_spatial, dtype=float)
    k = p + fields.a.spatial()
    kn = np.linalg.norm(k)
    direction = k if kn > 0.0 else np.asarray(axis, dtype=float)
    chi = helicity_spinor(direction, alpha)
    m, a0, b0 = fields.m, fields.a.t, fields.b.t
    E = math.sqrt((kn - (-1) ** alpha * b0) ** 2 + m * m) - a0
    xi = (-((-1) ** alpha) * kn + b0) / (E + a0 + m)
    N = math.sqrt((E + a0 + m) / (2.0 * m))
    comps = N * np.concatenate([xi * chi, chi])
    return ModifiedSpinor(components=comps, kind="antiparticle", alpha=alpha,
                          momentum=p.copy(), energy=E)


def spinor_norm(spinor: ModifiedSpinor) -> float:
    """Lorentz-invariant norm ubar u (or vbar v)."""
    basis = _basis()
    u = spinor.components
    return float((u.conj() @ basis.beta @ u).real)


def spinor_residual(spinor: ModifiedSpinor, fields: BackgroundFields) -> float:
    """|| (H - E) psi || for the eigenproblem the spinor claims to solve."""
    if spinor.kind == "particle":
        H = hamiltonian_matrix(spinor.momentum, fields)
        return float(np.linalg.norm(H @ spinor.components
                                    - spinor.energy * spinor.components))
    # antiparticle plane wave carries e^{+ip.x}: H(-p) v = -E v
    H = hamiltonian_matrix(-spinor.momentum, fields)
    return float(np.linalg.norm(H @ spinor.components
                                + spinor.energy * spinor.components))


def propagator_kernel(p: FourVector, fields: BackgroundFields) -> np.ndarray:
    """Momentum-space wave operator  pslash - aslash - bslash G5 - m."""
    basis = _basis()
    return (slash(basis, p) - slash(basis, fields.a)
            - slash(basis, fields.b) @ basis.gamma5_lower
            - fields.m * np.eye(4))


def propagator_denominator(p: FourVector, fields: BackgroundFields) -> float:
    """The dispersion quartic evaluated at p (the propagator denominator)."""
    d = p - fields.a
    dsq = d.minkowski_sq()
    bsq = fields.b.minkowski_sq()
    bd = float(fields.b.as_array() @ d.lowered())
    x = dsq - bsq - fields.m ** 2
    return float(x * x - 4.0 * bd * bd + 4.0 * bsq * dsq)


def propagator_exact(p: FourVector, fields: BackgroundFields) -> np.ndarray:
    """Closed-form momentum-space propagator off the mass shell.

    Satisfies kernel(p) @ S(p) = i * identity (both orders).  Raises near the
    dispersion roots, where the rationalized denominator vanishes.
    """
    basis = _basis()
    scale = dispersion_scale(p.spatial(), fields)
    scale = max(scale, abs(p.t))
    den = propagator_denominator(p, fields)
    if abs(den) <= 1e-12 * scale ** 4:
        raise ValueError("momentum lies on (or too close to) a dispersion root")
    g5 = basis.gamma5_lower
    kslash = slash(basis, p - fields.a)
    bslash = slash(basis, fields.b)
    d = p - fields.a
    x = d.minkowski_sq() - fields.b.minkowski_sq() - fields.m ** 2
    comm = kslash @ bslash - bslash @ kslash
    numerator = (kslash - bslash @ g5 + fields.m * np.eye(4)) @ (
        x * np.eye(4) + comm @ g5)
    return 1j * numerator / den


def propagator_series(p: FourVector, fields: BackgroundFields,
                      order: int) -> np.ndarray:
    """Geometric expansion of the propagator in axial insertions (requires a=0).

    Partial sum of S0 * (M)^k for k = 0..order with M = -i bslash G5 S0 and
    S0 the free propagator; converges to the exact propagator when the
    spectral radius of M is below one.
    """
    if np.max(np.abs(fields.a.as_array())) > 0.0:
        raise ValueError("series expansion is defined for a = 0")
    if order < 0:
        raise ValueError("order must be nonnegative")
    basis = _basis()
    free = slash(basis, p) - fields.m * np.eye(4)
    s0 = 1j * np.linalg.inv(free)
    insertion = -1j * slash(basis, fields.b) @ basis.gamma5_lower @ s0
    radius = insertion_spectral_radius(p, fields)
    if radius >= 1.0:
        raise ValueError(f"series diverges: spectral radius {radius:.3g} >= 1")
    total = np.zeros((4, 4), dtype=complex)
    term = s0.copy()
    for _ in range(order + 1):
        total += term
        term = term @ insertion
    return total


def insertion_spectral_radius(p: FourVector, fields: BackgroundFields) -> float:
    basis = _basis()
    free = slash(basis, p) - fields.m * np.eye(4)
    s0 = 1j * np.linalg.inv(free)
    insertion = -1j * slash(basis, fields.b) @ basis.gamma5_lower @ s0
    return float(np.max(np.abs(np.linalg.eigvals(insertion))))
