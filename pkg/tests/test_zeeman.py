import math

import numpy as np
import pytest
from scipy.integrate import quad

from lvqed.clifford import build_basis
from lvqed.dirac import BackgroundFields
from lvqed.minkowski import FourVector
from lvqed.zeeman import (
    CoupledState,
    FieldConfiguration,
    cg_weights,
    coupled_spinor,
    fw_free_transform,
    fw_hamiltonian_nr,
    fw_identity_deviations,
    fw_slope_vs_mass,
    fw_vs_exact_deviation,
    hydrogen_radial,
    sph_harm,
    zeeman_shift_axial,
    zeeman_shift_oracle,
)


def fields(a=(0, 0, 0, 0), b=(0, 0, 0, 0), m=1.0, e=1.0):
    return BackgroundFields(a=FourVector(*a), b=FourVector(*b), m=m, e=e)


# --- free FW transform --------------------------------------------------------

def test_fw_transform_identity_at_rest():
    assert np.allclose(fw_free_transform([0, 0, 0], 2.0), np.eye(4))


def test_fw_transform_unitary_random():
    rng = np.random.default_rng(0)
    for _ in range(20):
        U = fw_free_transform(rng.uniform(-2, 2, 3), rng.uniform(0.5, 3.0))
        assert np.max(np.abs(U @ U.conj().T - np.eye(4))) < 1e-13


def test_fw_transform_block_diagonalizes():
    basis = build_basis(4)
    p = np.array([3.0, 0.0, 0.0])
    m = 4.0
    U = fw_free_transform(p, m)
    H = sum(basis.alpha[i] * p[i] for i in range(3)) + m * basis.beta
    out = U @ H @ U.conj().T
    assert np.max(np.abs(out - 5.0 * basis.beta)) < 1e-12
    assert np.max(np.abs(out[:2, 2:])) < 1e-12
    assert np.max(np.abs(out[2:, :2])) < 1e-12


def test_fw_transform_requires_positive_mass():
    with pytest.raises(ValueError):
        fw_free_transform([1, 0, 0], 0.0)


# --- reduced Hamiltonian -------------------------------------------------------

def test_fw_hamiltonian_free_rest():
    H = fw_hamiltonian_nr(FieldConfiguration(), fields(m=1.3))
    assert np.allclose(H, np.diag([1.3, 1.3, -1.3, -1.3]))


def test_fw_hamiltonian_pure_axial_split():
    b = (0.0, 0.02, -0.03, 0.06)
    H = fw_hamiltonian_nr(FieldConfiguration(), fields(b=b, m=1.0))
    upper = np.linalg.eigvalsh(H[:2, :2])
    bmag = math.sqrt(0.02 ** 2 + 0.03 ** 2 + 0.06 ** 2)
    assert upper[1] - upper[0] == pytest.approx(2.0 * bmag, rel=1e-12)


def test_fw_hamiltonian_hermitian():
    rng = np.random.default_rng(4)
    for _ in range(10):
        cfg = FieldConfiguration(p=rng.uniform(-1, 1, 3),
                                 A0=rng.uniform(-1, 1),
                                 A=rng.uniform(-1, 1, 3),
                                 B=rng.uniform(-1, 1, 3),
                                 E_field=rng.uniform(-1, 1, 3))
        f = fields(a=0.1 * rng.uniform(-1, 1, 4), b=0.1 * rng.uniform(-1, 1, 4))
        H = fw_hamiltonian_nr(cfg, f)
        assert np.max(np.abs(H - H.conj().T)) < 1e-13


def test_fw_algebra_identities():
    devs = fw_identity_deviations(np.random.default_rng(7))
    for name, dev in devs.items():
        assert dev < 1e-12, name


def test_fw_deviation_shrinks_like_inverse_square_or_better():
    cfg = FieldConfiguration(p=(0.3, -0.2, 0.5), A0=0.02, A=(0.01, -0.02, 0.015))
    configs = {
        "timelike": fields(a=(0.02, 0.01, -0.015, 0.03), b=(0.04, 0, 0, 0)),
        "generic": fields(a=(0.02, 0.01, -0.015, 0.03),
                          b=(0.04, 0.02, -0.03, 0.05)),
    }
    for name, f in configs.items():
        slope = fw_slope_vs_mass(cfg, f)
        assert slope <= -2.0, (name, slope)


def test_fw_deviation_requires_plain_matrices():
    cfg = FieldConfiguration(B=(0, 0, 0.1))
    with pytest.raises(ValueError):
        fw_vs_exact_deviation(cfg, fields())


# --- coupling weights and spinors ----------------------------------------------

def test_cg_weights_s_state():
    assert cg_weights(0, 0) == (1.0, 0.0)


def test_cg_weights_p_state():
    alpha, beta = cg_weights(1, 0)
    assert alpha == pytest.approx(math.sqrt(2.0 / 3.0), abs=1e-15)
    assert beta == pytest.approx(math.sqrt(1.0 / 3.0), abs=1e-15)


def test_cg_weights_normalized_all_ell():
    for ell in range(11):
        for m in range(-ell - 1, ell + 1):
            alpha, beta = cg_weights(ell, m)
            assert alpha * alpha + beta * beta == pytest.approx(1.0, abs=1e-15)


def test_cg_weights_range_guard():
    with pytest.raises(ValueError):
        cg_weights(1, 2)


def test_coupled_spinor_s_state_value():
    st = CoupledState(ell=0, branch="plus", m_j=0.5)
    val = coupled_spinor(st, 0.7, 1.1)
    assert val[0] == pytest.approx(1.0 / math.sqrt(4 * math.pi), abs=1e-14)
    assert val[1] == 0.0


def _angular_quadrature(fn):
    from numpy.polynomial.legendre import leggauss
    x, w = leggauss(64)
    theta = np.arccos(x)
    phi = np.linspace(0, 2 * math.pi, 128, endpoint=False)
    vals = fn(theta[:, None], phi[None, :])
    return np.sum(w[:, None] * vals) * (2 * math.pi / 128)


@pytest.mark.parametrize("ell,branch,m_j", [
    (0, "plus", 0.5), (1, "plus", 1.5), (1, "plus", -0.5),
    (1, "minus", 0.5), (2, "plus", 2.5), (2, "minus", -1.5),
])
def test_coupled_spinor_normalized(ell, branch, m_j):
    st = CoupledState(ell=ell, branch=branch, m_j=m_j)
    norm = _angular_quadrature(
        lambda t, p: np.sum(np.abs(coupled_spinor(st, t, p)) ** 2, axis=0))
    assert norm == pytest.approx(1.0, abs=1e-10)


def test_coupled_spinor_branches_orthogonal():
    plus = CoupledState(ell=1, branch="plus", m_j=0.5)
    minus = CoupledState(ell=1, branch="minus", m_j=0.5)
    overlap = _angular_quadrature(
        lambda t, p: np.sum(np.conj(coupled_spinor(plus, t, p))
                            * coupled_spinor(minus, t, p), axis=0))
    assert abs(overlap) < 1e-10


def test_sph_harm_against_known_values():
    theta, phi = 0.9, 0.4
    assert sph_harm(0, 0, theta, phi) == pytest.approx(
        1 / math.sqrt(4 * math.pi))
    want = math.sqrt(3 / (4 * math.pi)) * math.cos(theta)
    assert sph_harm(1, 0, theta, phi) == pytest.approx(want, abs=1e-14)


def test_coupled_state_validation():
    with pytest.raises(ValueError):
        CoupledState(ell=0, branch="minus", m_j=0.5)
    with pytest.raises(ValueError):
        CoupledState(ell=1, branch="plus", m_j=2.5)
    with pytest.raises(ValueError):
        CoupledState(ell=1, branch="plus", m_j=1.0)


# --- axial Zeeman shift ----------------------------------------------------------

def test_axial_shift_s_state():
    st = CoupledState(ell=0, branch="plus", m_j=0.5)
    assert zeeman_shift_axial(st, 1e-3) == pytest.approx(1e-3, abs=1e-18)


def test_axial_shift_minus_branch():
    st = CoupledState(ell=1, branch="minus", m_j=0.5)
    assert zeeman_shift_axial(st, 1e-3) == pytest.approx(-1e-3 / 3, abs=1e-18)


def test_axial_shift_odd_in_mj_and_branch():
    for m_j in (0.5, 1.5):
        plus = CoupledState(ell=1, branch="plus", m_j=m_j)
        minus_mj = CoupledState(ell=1, branch="plus", m_j=-m_j)
        assert zeeman_shift_axial(plus, 2e-4) == -zeeman_shift_axial(
            minus_mj, 2e-4)
    p = CoupledState(ell=2, branch="plus", m_j=1.5)
    m = CoupledState(ell=2, branch="minus", m_j=1.5)
    assert zeeman_shift_axial(p, 1e-3) == -zeeman_shift_axial(m, 1e-3)


def test_axial_line_spacing():
    ell = 1
    shifts = [zeeman_shift_axial(CoupledState(ell=ell, branch="plus", m_j=mj),
                                 1e-3)
              for mj in (-1.5, -0.5, 0.5, 1.5)]
    gaps = np.diff(shifts)
    assert np.allclose(gaps, 2e-3 / (2 * ell + 1))


# --- quadrature oracle -----------------------------------------------------------

def test_radial_functions_normalized():
    for n in (1, 2, 3):
        for ell in range(n):
            val, _ = quad(lambda r: hydrogen_radial(n, ell, r) ** 2 * r * r,
                          0, np.inf, limit=200)
            assert val == pytest.approx(1.0, rel=1e-10), (n, ell)


@pytest.mark.parametrize("ell,branch,m_j", [
    (0, "plus", 0.5), (1, "plus", 1.5), (1, "plus", 0.5),
    (1, "minus", -0.5), (2, "plus", 1.5), (2, "minus", 0.5),
])
def test_oracle_axial_matches_formula(ell, branch, m_j):
    st = CoupledState(ell=ell, branch=branch, m_j=m_j)
    f = fields(b=(0, 0, 0, 1e-3))
    rec = zeeman_shift_oracle(st, f, B0=0.0)
    want = zeeman_shift_axial(st, 1e-3)
    assert rec["axial"] == pytest.approx(want, rel=1e-8, abs=1e-15)


def test_oracle_stretched_state_value():
    st = CoupledState(ell=1, branch="plus", m_j=1.5)
    rec = zeeman_shift_oracle(st, fields(b=(0, 0, 0, 1e-3)), B0=0.0)
    assert rec["axial"] == pytest.approx(1e-3, rel=1e-8)


def test_oracle_vanishing_couplings():
    f = fields(a=(0.0, 0.25, -0.15, 0.3), b=(0.2, 0, 0, 1e-3), e=1.0)
    for st in (CoupledState(ell=0, branch="plus", m_j=0.5),
               CoupledState(ell=1, branch="plus", m_j=0.5),
               CoupledState(ell=1, branch="minus", m_j=-0.5),
               CoupledState(ell=2, branch="plus", m_j=2.5)):
        rec = zeeman_shift_oracle(st, f, B0=5.0)
        assert abs(rec["vector"]) < 1e-10, st
        assert abs(rec["b0_gradient"]) < 1e-10, st
        assert abs(rec["sigma_dot_A"]) < 1e-10, st


def test_oracle_radial_guard():
    st = CoupledState(ell=3, branch="plus", m_j=0.5)
    with pytest.raises(ValueError):
        zeeman_shift_oracle(st, fields(), B0=0.0)
