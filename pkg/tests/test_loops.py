import math
from fractions import Fraction

import numpy as np
import pytest

from lvqed.loops import (
    DIVERGENT_TABLE,
    LaurentSeries,
    cs_coefficient_3d,
    cs_ledger_4d,
    feynman_integral,
    feynman_parametrize_check,
    form_factor_3d,
    form_factor_3d_quadrature,
    trace_reduction_check,
    wick_oracle,
)


# --- closed-form table ---------------------------------------------------------

def test_scalar_3d_value():
    got = feynman_integral("scalar", 3, 2, 1.0)
    assert got == pytest.approx(1j / (8 * math.pi), abs=1e-15)


def test_scalar_4d_value():
    got = feynman_integral("scalar", 4, 4, 1.0)
    assert got == pytest.approx(1j / (96 * math.pi ** 2), abs=1e-16)


def test_two_p_4d_value():
    got = feynman_integral("two_p", 4, 4, 1.0)
    assert got == pytest.approx(-1j / (192 * math.pi ** 2), abs=1e-16)


def test_p2_4d_value():
    got = feynman_integral("p2", 4, 4, 2.0)
    assert got == pytest.approx(-1j / (48 * math.pi ** 2 * 4.0), abs=1e-16)


def test_mass_scaling():
    for m in (0.5, 1.0, 3.0):
        got = feynman_integral("scalar", 4, 4, m)
        assert got == pytest.approx(1j / (96 * math.pi ** 2 * m ** 4),
                                    rel=1e-14)


def test_divergent_combinations_rejected_in_integer_dimension():
    with pytest.raises(ValueError):
        feynman_integral("p4", 4, 4, 1.0)
    with pytest.raises(ValueError):
        feynman_integral("scalar", 4, 2, 1.0)
    with pytest.raises(ValueError):
        feynman_integral("scalar", 3, 1, 1.0)


def test_unknown_kind_rejected():
    with pytest.raises(ValueError):
        feynman_integral("p6", 4, 5, 1.0)
    with pytest.raises(ValueError):
        feynman_integral("scalar", 5, 4, 1.0)


# --- Laurent data ----------------------------------------------------------------

def test_laurent_entries_exact():
    assert feynman_integral("p4", "4-2eps", 4, 1.0) == LaurentSeries(
        Fraction(1, 16))
    assert feynman_integral("four_p", "4-2eps", 4, 1.0) == LaurentSeries(
        Fraction(1, 384))
    assert feynman_integral("p2_two_p", "4-2eps", 4, 1.0) == LaurentSeries(
        Fraction(1, 64))


def test_laurent_contraction_relations():
    four = DIVERGENT_TABLE[("four_p", 4)]
    assert four.block * 6 == DIVERGENT_TABLE[("p2_two_p", 4)].block
    assert DIVERGENT_TABLE[("p2_two_p", 4)].block * 4 == \
        DIVERGENT_TABLE[("p4", 4)].block


def test_laurent_arithmetic_exact():
    a = LaurentSeries(Fraction(1, 16), Fraction(1, 3))
    b = LaurentSeries(Fraction(-1, 16), Fraction(1, 6))
    s = a + b
    assert s.pole == 0
    assert s.block == 0
    assert s.finite == Fraction(1, 2)
    assert a.scaled(Fraction(2, 3)).block == Fraction(1, 24)


def test_laurent_unsupported():
    with pytest.raises(ValueError):
        feynman_integral("scalar", "4-2eps", 4, 1.0)


# --- Wick-rotated oracle ------------------------------------------------------------

def test_oracle_scalar_3d():
    got = wick_oracle("scalar", 3, 2, 1.0)
    assert abs(got - 1j / (8 * math.pi)) < 1e-6 * abs(1 / (8 * math.pi))


def test_oracle_scalar_4d():
    got = wick_oracle("scalar", 4, 4, 1.0)
    want = 1j / (96 * math.pi ** 2)
    assert abs(got - want) < 1e-6 * abs(want)


def test_oracle_p2_4d():
    got = wick_oracle("p2", 4, 4, 2.0)
    want = -1j / (48 * math.pi ** 2 * 4.0)
    assert abs(got - want) < 1e-6 * abs(want)


def test_oracle_matches_table_everywhere_finite():
    for kind in ("scalar", "p2"):
        for D in (3, 4):
            for alpha in range(2, 7):
                for m in (0.7, 1.3):
                    deg = {"scalar": 0, "p2": 2}[kind]
                    if 2 * alpha - D - deg <= 0:
                        continue
                    got = wick_oracle(kind, D, alpha, m)
                    want = feynman_integral(kind, D, alpha, m)
                    assert abs(got - want) <= 1e-6 * abs(want), (kind, D, alpha)


def test_oracle_rejects_divergent():
    with pytest.raises(ValueError):
        wick_oracle("p2", 4, 3, 1.0)


# --- Feynman parametrization ----------------------------------------------------------

def test_parametrization_simple_values():
    assert feynman_parametrize_check(1.0, 1.0) == pytest.approx(1.0, abs=1e-10)
    assert feynman_parametrize_check(2.0, 3.0) == pytest.approx(1 / 6, abs=1e-10)
    assert feynman_parametrize_check(4.0, 4.0) == pytest.approx(1 / 16, abs=1e-10)
    assert feynman_parametrize_check(-2.0, -5.0) == pytest.approx(0.1, abs=1e-10)


def test_parametrization_sign_guard():
    with pytest.raises(ValueError):
        feynman_parametrize_check(1.0, -1.0)
    with pytest.raises(ValueError):
        feynman_parametrize_check(0.0, 1.0)


# --- planar induced term ------------------------------------------------------------

def test_cs3d_value_and_sign():
    pos = cs_coefficient_3d(1.0, 1.0)
    assert pos.rational == Fraction(-1, 8)
    assert pos.value(1.0) == pytest.approx(-1 / (8 * math.pi))
    neg = cs_coefficient_3d(-2.5, 1.0)
    assert neg.value(1.0) == pytest.approx(+1 / (8 * math.pi))


def test_cs3d_magnitude_mass_independent():
    vals = {abs(cs_coefficient_3d(m, 1.0).value(2.0)) for m in (0.1, 1.0, 50.0)}
    assert len({round(v, 15) for v in vals}) == 1


def test_cs3d_rejects_massless():
    with pytest.raises(ValueError):
        cs_coefficient_3d(0.0, 1.0)


def test_form_factor_zero_momentum_limit():
    assert form_factor_3d(0.0, 1.0) == pytest.approx(1.0)
    assert form_factor_3d(1e-12, 2.0) == pytest.approx(0.5, rel=1e-9)


def test_form_factor_matches_quadrature():
    for m in (0.8, 1.0, 2.0):
        for frac in (1e-4, 0.1, 0.5, 0.9, 0.99):
            ksq = frac * 4.0 * m * m
            got = form_factor_3d(ksq, m)
            want = form_factor_3d_quadrature(ksq, m)
            assert got == pytest.approx(want, abs=1e-10), (m, frac)


def test_form_factor_monotone():
    vals = [form_factor_3d(k, 1.0) for k in np.linspace(0.0, 3.9, 40)]
    assert all(b > a for a, b in zip(vals, vals[1:]))


def test_form_factor_branch_point():
    with pytest.raises(ValueError):
        form_factor_3d(4.0, 1.0)
    with pytest.raises(ValueError):
        form_factor_3d(-0.1, 1.0)


# --- trace reduction -------------------------------------------------------------------

def test_trace_reduction_zero_b():
    dev = trace_reduction_check(
        p=[0.4, 0.1, -0.2, 0.3], b=[0, 0, 0, 0], A1=[1, 0.5, 0, 0],
        A2=[0, 0.2, 0.9, 0], dpartial=[0.3, 0, 0.1, 0.7], m=1.0)
    assert dev < 1e-12


def test_trace_reduction_zero_momentum_keeps_m4_term():
    import numpy as np
    from lvqed.clifford import build_basis, slash
    from lvqed.minkowski import FourVector
    basis = build_basis(4)
    b, A1, A2, d, m = [0.3, 0.1, 0, 0.2], [1, 0.4, 0, 0], [0, 0.7, 0.2, 0], \
        [0.1, 0, 0.5, 0.3], 1.3
    dev = trace_reduction_check([0, 0, 0, 0], b, A1, A2, d, m)
    assert dev < 1e-12
    Bs, S1, S2, Dd = (slash(basis, FourVector(*v)) for v in (b, A1, A2, d))
    lone = -1j * m ** 4 * (Bs @ S1 @ Dd @ S2 @ basis.gamma5_lower)
    kept = (m * m * Bs @ basis.gamma5_lower @ S1) @ (1j * m * m * Dd @ S2)
    assert np.max(np.abs(kept - lone)) < 1e-12


def test_trace_reduction_random_draws():
    rng = np.random.default_rng(9)
    for _ in range(200):
        vecs = [rng.normal(size=4) for _ in range(5)]
        m = rng.uniform(0.5, 2.0)
        scale = max(np.max(np.abs(np.concatenate(vecs))), m) ** 8
        dev = trace_reduction_check(*vecs, m)
        assert dev < 1e-9 * scale


# --- induced-term ledger ------------------------------------------------------------------

def test_ledger_pole_cancellation_exact():
    led = cs_ledger_4d()
    assert led["pole_sum"] == 0
    assert isinstance(led["pole_sum"], Fraction)


def test_ledger_finite_total_exact():
    led = cs_ledger_4d(e=1.0)
    assert led["finite_total"].rational == Fraction(1, 12)
    assert led["finite_total_value"] == pytest.approx(1 / (12 * math.pi ** 2))


def test_ledger_fifth_term():
    led = cs_ledger_4d()
    entry = {en.label: en for en in led["per_term"]}["m2_bdotp"]
    assert entry.finite == Fraction(1, 48)


def test_ledger_block_cancellation_numeric():
    led = cs_ledger_4d()
    for eps in (1e-3, 1e-6):
        total = sum(
            LaurentSeries(en.block, en.finite).evaluate(eps, m=1.0)
            for en in led["per_term"])
        assert total == pytest.approx(float(Fraction(1, 12)), abs=1e-9)


def test_ledger_mass_independent():
    led = cs_ledger_4d()
    vals = {LaurentSeries(Fraction(0), en.finite).evaluate(1e-4, m)
            for en in led["per_term"] for m in (0.5, 1.0, 7.0)}
    # finite entries carry no mass dependence at all
    assert vals == {0.0, float(Fraction(1, 48))}


def test_ledger_divergent_entries_share_block():
    led = cs_ledger_4d()
    blocks = [en.block for en in led["per_term"] if en.block != 0]
    assert blocks == [Fraction(-1, 12), Fraction(1, 24), Fraction(1, 24)]
