"""Maxwell-Chern-Simons photon physics.

2+1 dimensions: the topologically massive wave operator and its exact
propagator at finite gauge parameter (or in the transverse limit).

3+1 dimensions: the Chern-Simons-modified Maxwell equations driven by a fixed
background vector eta_mu, the quartic photon dispersion, the two circularly
polarized branches for timelike eta, and their group velocities.  Plane waves
carry the phase exp(i k.x) with k.x = omega t - kvec.xvec, so d/dt -> i omega
and nabla -> -i kvec.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .minkowski import FourVector, ThreeVector, levi_civita

METRIC3 = np.diag([1.0, -1.0, -1.0])
METRIC4 = np.diag([1.0, -1.0, -1.0, -1.0])


@dataclass(frozen=True)
class MCSParams:
    """Topological mass and covariant gauge-fixing weight."""

    theta: float
    lam: float = 1.0
    landau_limit: bool = False

    def __post_init__(self):
        if not self.landau_limit and self.lam == 0.0:
            raise ValueError("gauge parameter must be nonzero (or use the "
                             "landau_limit flag)")


def _eps3() -> np.ndarray:
    eps = np.zeros((3, 3, 3))
    for i in range(3):
        for j in range(3):
            for k in range(3):
                eps[i, j, k] = levi_civita((i, j, k))
    return eps


_EPS3 = _eps3()


def mcs_kernel(k: ThreeVector, params: MCSParams) -> np.ndarray:
    """Momentum-space wave operator with lower indices (mu, nu).

    -k^2 g_{mu nu} + k_mu k_nu - i theta eps_{mu nu rho} k^rho
    - lam k_mu k_nu.
    """
    if params.landau_limit:
        raise ValueError("kernel needs a finite gauge parameter")
    ksq = k.minkowski_sq()
    k_lo = k.lowered()
    k_up = k.as_array()
    out = (-ksq * METRIC3 + np.outer(k_lo, k_lo)
           - params.lam * np.outer(k_lo, k_lo)).astype(complex)
    out -= 1j * params.theta * np.einsum("mnr,r->mn", _EPS3, k_up)
    return out


def mcs_propagator(k: ThreeVector, params: MCSParams) -> np.ndarray:
    """Exact photon propagator with upper indices (mu, nu).

    -i g / (k^2 - th^2) + i k k / (k^2 (k^2 - th^2))
    - th eps^{mu nu rho} k_rho / (k^2 (k^2 - th^2)) - (i/lam) k k / k^4;
    the gauge tail is dropped in the transverse (landau_limit) mode.
    Contracting with the kernel returns i times the identity.
    """
    ksq = k.minkowski_sq()
    th = params.theta
    scale = max(abs(ksq), th * th, 1e-30)
    if abs(ksq) <= 1e-10 * scale or abs(ksq - th * th) <= 1e-10 * scale:
        raise ValueError("momentum on a propagator pole")
    k_up = k.as_array()
    k_lo = k.lowered()
    out = (-1j * METRIC3 / (ksq - th * th)
           + 1j * np.outer(k_up, k_up) / (ksq * (ksq - th * th))).astype(complex)
    out -= th * np.einsum("mnr,r->mn", _EPS3, k_lo) / (ksq * (ksq - th * th))
    if not params.landau_limit:
        out -= (1.0 / params.lam) * 1j * np.outer(k_up, k_up) / ksq ** 2
    return out


def eta_from_b(b: FourVector, e: float) -> FourVector:
    """Background vector of the induced term, eta_mu = (e^2 / 6 pi^2) b_mu."""
    c = e * e / (6.0 * math.pi ** 2)
    return b.scaled(c)


@dataclass(frozen=True)
class PhotonMode:
    k_spatial: tuple
    eta: FourVector
    omega_roots: tuple
    stable: bool
    group_velocities: tuple


def _dispersion_coeffs(k_spatial, eta: FourVector) -> np.ndarray:
    """Monic quartic in omega for  k^4 + k^2 eta^2 - (k.eta)^2 = 0."""
    kv = np.asarray(k_spatial, dtype=float)
    K = float(kv @ kv)
    ev = eta.spatial()
    eta_sq = eta.minkowski_sq()
    c = float(kv @ ev)
    # (w^2-K)^2 + (w^2-K) eta_sq - (w eta0 - c)^2
    return np.array([
        1.0,
        0.0,
        -2.0 * K + eta_sq - eta.t ** 2,
        2.0 * eta.t * c,
        K * K - K * eta_sq - c * c,
    ])


def photon_dispersion(k_spatial, eta: FourVector,
                      imag_tol: float = 1e-8) -> PhotonMode:
    """Solve the modified dispersion quartic at fixed spatial momentum.

    The mode is stable iff all four roots are real; group velocities along
    k-hat are computed for the real, nonzero branches by implicit
    differentiation of the quartic.
    """
    kv = np.asarray(k_spatial, dtype=float)
    coeffs = _dispersion_coeffs(kv, eta)
    roots = np.roots(coeffs)
    scale = max(1e-30, float(np.linalg.norm(kv)),
                float(np.max(np.abs(eta.as_array()))))
    stable = bool(np.max(np.abs(roots.imag)) <= imag_tol * scale)
    roots = tuple(sorted((complex(z) for z in roots), key=lambda z: z.real))
    vgs = []
    if stable:
        for z in roots:
            vg = _group_velocity(kv, eta, z.real)
            if vg is not None:
                vgs.append(vg)
    return PhotonMode(k_spatial=tuple(float(c) for c in kv), eta=eta,
                      omega_roots=roots, stable=stable,
                      group_velocities=tuple(vgs))


def _group_velocity(kv: np.ndarray, eta: FourVector, w: float):
    """d omega / d |k| along k-hat from the implicit quartic."""
    K = float(kv @ kv)
    kmag = math.sqrt(K)
    if kmag == 0.0:
        return None
    khat = kv / kmag
    ev = eta.spatial()
    c = float(kv @ ev)
    chat = float(khat @ ev)
    eta_sq = eta.minkowski_sq()
    ksq = w * w - K
    dF_dw = 4.0 * ksq * w + 2.0 * w * eta_sq - 2.0 * eta.t * (w * eta.t - c)
    dF_dk = -4.0 * ksq * kmag - 2.0 * kmag * eta_sq \
        + 2.0 * chat * (w * eta.t - c)
    if abs(dF_dw) < 1e-14 * max(1.0, abs(dF_dk)):
        return None
    return -dF_dk / dF_dw


def dispersion_residual(omega: complex, k_spatial, eta: FourVector) -> float:
    coeffs = _dispersion_coeffs(k_spatial, eta)
    return float(abs(np.polyval(coeffs, omega)))


def birefringence_timelike(eta0: float, k_mag: float) -> dict:
    """Closed-form branches for purely timelike eta.

    omega_pm = sqrt(|k| (|k| +- eta0)); for eta0 > |k| the minus branch is
    imaginary (unstable) and its group velocity is undefined.
    The group velocities are (|k|/omega_pm)(1 +- eta0 / 2|k|).
    """
    if k_mag <= 0.0:
        raise ValueError("k_mag must be positive")
    stable = eta0 <= k_mag
    w_plus = math.sqrt(k_mag * (k_mag + eta0))
    if stable:
        w_minus = complex(math.sqrt(k_mag * (k_mag - eta0)), 0.0)
    else:
        w_minus = complex(0.0, math.sqrt(k_mag * (eta0 - k_mag)))
    vg_plus = (k_mag / w_plus) * (1.0 + eta0 / (2.0 * k_mag)) \
        if w_plus > 0 else None
    vg_minus = None
    if stable and w_minus.real > 0:
        vg_minus = (k_mag / w_minus.real) * (1.0 - eta0 / (2.0 * k_mag))
    return {
        "omega_plus": w_plus,
        "omega_minus": w_minus,
        "vg_plus": vg_plus,
        "vg_minus": vg_minus,
        "stable": stable,
    }


def solve_circular_mode(k_spatial, eta0: float, branch: str) -> dict:
    """Source-free plane-wave solution for timelike eta.

    Builds the circular polarization in the plane transverse to k that
    diagonalizes the modified curl equation: khat x E = +- i E picks the
    omega_+- branch respectively.  Returns complex amplitudes E0, B0 and the
    wave vector as a FourVector.
    """
    kv = np.asarray(k_spatial, dtype=float)
    kmag = float(np.linalg.norm(kv))
    if kmag == 0.0:
        raise ValueError("need a nonzero spatial momentum")
    khat = kv / kmag
    seed = np.array([1.0, 0.0, 0.0])
    if abs(khat @ seed) > 0.9:
        seed = np.array([0.0, 1.0, 0.0])
    e1 = np.cross(khat, seed)
    e1 /= np.linalg.norm(e1)
    e2 = np.cross(khat, e1)
    if branch == "plus":
        E0 = (e1 - 1j * e2) / math.sqrt(2.0)   # khat x E = +i E
        omega = math.sqrt(kmag * (kmag + eta0))
    elif branch == "minus":
        E0 = (e1 + 1j * e2) / math.sqrt(2.0)   # khat x E = -i E
        if eta0 > kmag:
            raise ValueError("minus branch unstable for eta0 > |k|")
        omega = math.sqrt(kmag * (kmag - eta0))
    else:
        raise ValueError("branch must be 'plus' or 'minus'")
    B0 = np.cross(kv, E0) / omega
    return {"E0": E0, "B0": B0,
            "k": FourVector(omega, *(float(c) for c in kv))}


def maxwell_residual(plane_wave: dict, eta: FourVector,
                     rho: complex = 0.0, J=(0.0, 0.0, 0.0)) -> dict:
    """Residual magnitudes of the four modified Maxwell equations.

    The plane wave is {E0, B0, k: FourVector} with fields proportional to
    exp(i k.x); derivatives act algebraically (d_t -> i omega,
    nabla -> -i kvec).  The homogeneous pair is unmodified; the inhomogeneous
    pair reads  curl B - eta_vec x E + eta0 B = J + dE/dt  and
    div E + eta_vec . B = rho.
    """
    E0 = np.asarray(plane_wave["E0"], dtype=complex)
    B0 = np.asarray(plane_wave["B0"], dtype=complex)
    k4 = plane_wave["k"]
    omega = k4.t
    kv = k4.spatial()
    ev = eta.spatial()
    J = np.asarray(J, dtype=complex)

    div_b = -1j * (kv @ B0)
    faraday = -1j * np.cross(kv, E0) + 1j * omega * B0
    ampere = (-1j * np.cross(kv, B0) - np.cross(ev, E0) + eta.t * B0
              - J - 1j * omega * E0)
    gauss = -1j * (kv @ E0) + ev @ B0 - rho
    return {
        "div_B": float(abs(div_b)),
        "faraday": float(np.max(np.abs(faraday))),
        "ampere": float(np.max(np.abs(ampere))),
        "gauss": float(abs(gauss)),
    }


def wave_operator_4d(k: FourVector, eta: FourVector) -> np.ndarray:
    """Momentum-space equation-of-motion operator M^{nu sigma}.

    M A = 0 encodes  box A^nu - d^nu (d.A) - eps^{mu nu rho sigma} eta_mu
    d_rho A_sigma = 0 with d -> ik; M k = 0 by antisymmetry, so longitudinal
    shifts of the polarization are pure gauge.
    """
    ksq = k.minkowski_sq()
    k_up = k.as_array()
    k_lo = k.lowered()
    # mixed-index operator M^nu_lambda acting on contravariant polarizations
    out = (-ksq * np.eye(4) + np.outer(k_up, k_lo)).astype(complex)
    eta_lo = eta.lowered()
    for nu in range(4):
        for lam in range(4):
            acc = 0.0
            for mu in range(4):
                for rho in range(4):
                    s = levi_civita((mu, nu, rho, lam))
                    if s != 0:
                        acc += s * eta_lo[mu] * k_lo[rho]
            out[nu, lam] += -1j * acc * METRIC4[lam, lam]
    return out
