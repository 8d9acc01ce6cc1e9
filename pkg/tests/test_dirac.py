import math

import numpy as np
import pytest

from lvqed.clifford import build_basis
from lvqed.dirac import (
    BackgroundFields,
    dispersion_quartic,
    dispersion_roots,
    dispersion_scale,
    energies_closed_form,
    hamiltonian_eigenvalues,
    hamiltonian_matrix,
    insertion_spectral_radius,
    propagator_exact,
    propagator_kernel,
    propagator_series,
    quartic_residual,
    spinor_norm,
    spinor_residual,
    spinor_u,
    spinor_v,
)
from lvqed.minkowski import FourVector

ZERO = FourVector(0, 0, 0, 0)


def fields(a=(0, 0, 0, 0), b=(0, 0, 0, 0), m=1.0, e=1.0):
    return BackgroundFields(a=FourVector(*a), b=FourVector(*b), m=m, e=e)


def random_fields(rng, m=1.0, scale=0.1):
    a = scale * m * rng.uniform(-1, 1, size=4)
    b = scale * m * rng.uniform(-1, 1, size=4)
    return fields(a=a, b=b, m=m)


# --- dispersion quartic -----------------------------------------------------

def test_free_quartic_roots():
    f = fields(m=1.0)
    coeffs = dispersion_quartic([0, 0, 0], f)
    assert np.allclose(coeffs, [1, 0, -2, 0, 1])  # (p0^2 - 1)^2


def test_free_roots_values():
    f = fields(m=4.0)
    r = dispersion_roots([3, 0, 0], f)
    assert r.all_real
    got = sorted(z.real for z in r.roots)
    assert np.allclose(got, [-5, -5, 5, 5])
    assert np.allclose(r.particle, [5, 5])
    assert np.allclose(r.antiparticle, [5, 5])


def test_timelike_closed_form_matches_roots():
    f = fields(b=(0.1, 0, 0, 0), m=1.0)
    r = dispersion_roots([1, 0, 0], f)
    want = sorted(math.sqrt((1 + s * 0.1) ** 2 + 1) for s in (-1, 1))
    assert np.allclose(sorted(r.particle), want, atol=1e-12)
    cf = energies_closed_form([1, 0, 0], f, "timelike_b")
    assert np.allclose(sorted(cf["E_u"]), want, atol=1e-13)


def test_timelike_a_only_shifts_particles():
    base = fields(m=1.0)
    shifted = fields(a=(0.07, 0, 0, 0), m=1.0)
    p = [0.4, -0.3, 0.2]
    r0 = dispersion_roots(p, base)
    r1 = dispersion_roots(p, shifted)
    assert np.allclose(np.array(r1.particle), np.array(r0.particle) + 0.07,
                       atol=1e-12)


def test_quartic_matches_hamiltonian_char_poly_random():
    rng = np.random.default_rng(42)
    for _ in range(50):
        f = random_fields(rng)
        p = rng.uniform(-1, 1, size=3)
        coeffs = dispersion_quartic(p, f)
        char = np.poly(hamiltonian_matrix(p, f))
        assert np.allclose(coeffs, char.real, atol=1e-9)
        assert np.max(np.abs(char.imag)) < 1e-10


def test_roots_match_eigenvalues_many_draws():
    rng = np.random.default_rng(0)
    for _ in range(300):
        f = random_fields(rng)
        p = rng.uniform(-1.5, 1.5, size=3)
        roots = sorted(z.real for z in dispersion_roots(p, f).roots)
        eigs = hamiltonian_eigenvalues(p, f)
        assert np.max(np.abs(np.array(roots) - eigs)) < 1e-9


def test_quartic_residual_at_eigenvalues():
    rng = np.random.default_rng(1)
    for _ in range(50):
        f = random_fields(rng)
        p = rng.uniform(-1, 1, size=3)
        scale = dispersion_scale(p, f)
        for ev in hamiltonian_eigenvalues(p, f):
            assert quartic_residual(ev, p, f) < 1e-9 * scale ** 4


def test_spacelike_closed_form_matches_roots():
    rng = np.random.default_rng(2)
    for _ in range(100):
        b = 0.1 * rng.uniform(-1, 1, size=3)
        a = 0.05 * rng.uniform(-1, 1, size=4)
        a[0] = 0.0
        f = fields(a=a, b=(0, *b), m=1.0)
        p = rng.uniform(-1, 1, size=3)
        cf = energies_closed_form(p, f, "spacelike_b")
        r = dispersion_roots(p, f)
        assert np.allclose(sorted(cf["E_u"]), sorted(r.particle), atol=1e-10)


def test_closed_form_case_mismatch():
    f = fields(b=(0.1, 0.2, 0, 0))
    with pytest.raises(ValueError):
        energies_closed_form([1, 0, 0], f, "timelike_b")
    with pytest.raises(ValueError):
        energies_closed_form([1, 0, 0], f, "spacelike_b")
    with pytest.raises(ValueError):
        energies_closed_form([1, 0, 0], f, "lightlike")


def test_antiparticle_branch_against_reversed_momentum():
    f = fields(a=(0.03, 0.01, -0.02, 0.04), b=(0.05, 0, 0, 0), m=1.0)
    p = np.array([0.6, -0.1, 0.3])
    cf = energies_closed_form(p, f, "timelike_b")
    r = dispersion_roots(-p, f)
    assert np.allclose(sorted(cf["E_v"]), sorted(r.antiparticle), atol=1e-10)


# --- Hamiltonian ------------------------------------------------------------

def test_hamiltonian_free_limit():
    H = hamiltonian_matrix([0, 0, 0], fields(m=1.5))
    assert np.allclose(H, 1.5 * build_basis(4).gamma[0])
    assert np.allclose(np.linalg.eigvalsh(H), [-1.5, -1.5, 1.5, 1.5])


def test_hamiltonian_hermitian():
    rng = np.random.default_rng(3)
    for _ in range(20):
        f = random_fields(rng)
        H = hamiltonian_matrix(rng.uniform(-1, 1, 3), f,
                               A0=rng.uniform(-1, 1),
                               A=rng.uniform(-1, 1, 3))
        assert np.max(np.abs(H - H.conj().T)) < 1e-13


def test_hamiltonian_timelike_b_eigenvalues():
    f = fields(b=(0.2, 0, 0, 0), m=1.0)
    eigs = hamiltonian_eigenvalues([0.5, 0, 0], f)
    want = sorted([math.sqrt((0.5 + s * 0.2) ** 2 + 1) * sign
                   for s in (-1, 1) for sign in (-1, 1)])
    # the negative branch carries the opposite |p| +- b0 combination
    assert np.allclose(sorted(eigs), sorted(want), atol=1e-12)


# --- spinors ----------------------------------------------------------------

def test_spinor_free_limit_matches_standard():
    f = fields(m=1.0)
    u = spinor_u(1, [0, 0, 0.8], f)
    E = math.sqrt(0.8 ** 2 + 1)
    N = math.sqrt((E + 1) / 2)
    want = N * np.array([1, 0, 0.8 / (E + 1), 0], dtype=complex)
    assert np.allclose(u.components, want, atol=1e-12)


def test_spinor_lower_component_scaling():
    f = fields(b=(0.05, 0, 0, 0), m=1.0)
    for alpha in (1, 2):
        u = spinor_u(alpha, [0, 0, 1.0], f)
        E = u.energy
        xi = (-((-1) ** alpha) * 1.0 - 0.05) / (E + 1.0)
        ratio = u.components[2 + (alpha - 1)] / u.components[alpha - 1]
        assert abs(ratio - xi) < 1e-12


def test_spinor_residuals_and_norms_many_draws():
    rng = np.random.default_rng(4)
    for _ in range(200):
        m = 1.0
        f = fields(a=0.1 * rng.uniform(-1, 1, 4),
                   b=(0.1 * rng.uniform(-1, 1), 0, 0, 0), m=m)
        p = rng.uniform(-1.5, 1.5, size=3)
        alpha = int(rng.integers(1, 3))
        u = spinor_u(alpha, p, f)
        assert spinor_residual(u, f) < 1e-9
        assert abs(spinor_norm(u) - 1.0) < 1e-10
        v = spinor_v(alpha, p, f)
        assert spinor_residual(v, f) < 1e-9
        assert abs(spinor_norm(v) + 1.0) < 1e-10


def test_spinor_v_mirrors_u_under_b0_flip():
    p = [0.3, 0.4, -0.2]
    fp = fields(b=(0.08, 0, 0, 0), m=1.0)
    fm = fields(b=(-0.08, 0, 0, 0), m=1.0)
    for alpha in (1, 2):
        v = spinor_v(alpha, p, fp)
        u = spinor_u(alpha, p, fm)
        # swap upper and lower two-spinor blocks
        mirrored = np.concatenate([u.components[2:], u.components[:2]])
        assert np.allclose(np.abs(v.components), np.abs(mirrored), atol=1e-12)


def test_spinor_orthogonality_free_reversed_momentum():
    f = fields(m=1.0)
    p = np.array([0.3, -0.5, 0.7])
    for au in (1, 2):
        for av in (1, 2):
            u = spinor_u(au, p, f)
            v = spinor_v(av, -p, f)
            assert abs(np.vdot(u.components, v.components)) < 1e-12


def test_spinor_zero_momentum_uses_axis():
    f = fields(b=(0.05, 0, 0, 0), m=1.0)
    u = spinor_u(1, [0, 0, 0], f)
    assert spinor_residual(u, f) < 1e-9
    assert abs(spinor_norm(u) - 1.0) < 1e-10


# --- propagators ------------------------------------------------------------

def test_propagator_free_limit():
    f = fields(m=1.0)
    p = FourVector(0.3, 0.2, -0.4, 0.1)
    S = propagator_exact(p, f)
    basis = build_basis(4)
    from lvqed.clifford import slash
    want = 1j * (slash(basis, p) + np.eye(4)) / (p.minkowski_sq() - 1.0)
    assert np.allclose(S, want, atol=1e-12)


def test_propagator_defining_identity_many_draws():
    rng = np.random.default_rng(5)
    checked = 0
    while checked < 500:
        f = random_fields(rng)
        p = FourVector(*rng.uniform(-2, 2, size=4))
        try:
            S = propagator_exact(p, f)
        except ValueError:
            continue
        K = propagator_kernel(p, f)
        assert np.max(np.abs(K @ S - 1j * np.eye(4))) < 1e-10
        assert np.max(np.abs(S @ K - 1j * np.eye(4))) < 1e-10
        checked += 1


def test_propagator_rejects_on_shell():
    f = fields(m=1.0)
    with pytest.raises(ValueError):
        propagator_exact(FourVector(1.0, 0, 0, 0), f)


def test_propagator_denominator_is_the_quartic():
    from lvqed.dirac import propagator_denominator
    rng = np.random.default_rng(6)
    for _ in range(50):
        f = random_fields(rng)
        p = FourVector(*rng.uniform(-2, 2, size=4))
        den = propagator_denominator(p, f)
        poly = np.polyval(dispersion_quartic(p.spatial(), f), p.t)
        assert den == pytest.approx(poly, rel=1e-10, abs=1e-12)


def test_series_order_zero_is_free():
    f = fields(b=(0.1, 0.05, 0, 0), m=1.0)
    p = FourVector(0.3, 0.2, -0.4, 0.1)
    basis = build_basis(4)
    from lvqed.clifford import slash
    s0 = 1j * np.linalg.inv(slash(basis, p) - np.eye(4))
    assert np.allclose(propagator_series(p, f, 0), s0, atol=1e-13)


def test_series_converges_geometrically():
    f = fields(b=(0.25, 0.05, 0.1, -0.2), m=1.0)
    p = FourVector(0.5, -0.3, 0.2, 0.6)
    exact = propagator_exact(p, f)
    rho = insertion_spectral_radius(p, f)
    assert rho < 1
    errs = [np.max(np.abs(propagator_series(p, f, k) - exact))
            for k in range(0, 11)]
    # root-test convergence rate approaches the spectral radius; the window
    # stays well above the double-precision floor
    ratio = (errs[10] / errs[4]) ** (1.0 / 6.0)
    assert abs(ratio - rho) < 0.1 * rho
    assert errs[10] < 1e-3 * errs[0]


def test_series_requires_zero_a():
    f = fields(a=(0.1, 0, 0, 0), b=(0.1, 0, 0, 0), m=1.0)
    with pytest.raises(ValueError):
        propagator_series(FourVector(0.3, 0.2, -0.4, 0.1), f, 2)


def test_series_divergence_detected():
    f = fields(b=(0.0, 0, 0, 0.4), m=1.0)
    # near the mass shell the insertion grows beyond the convergence radius
    p = FourVector(1.05, 0, 0, 0.45)
    if insertion_spectral_radius(p, f) >= 1:
        with pytest.raises(ValueError):
            propagator_series(p, f, 3)


def test_background_fields_validation():
    with pytest.raises(ValueError):
        BackgroundFields(a=ZERO, b=ZERO, m=0.0)
    with pytest.raises(ValueError):
        BackgroundFields(a=FourVector(np.inf, 0, 0, 0), b=ZERO, m=1.0)
