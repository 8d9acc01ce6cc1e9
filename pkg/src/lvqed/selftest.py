"""Cross-module invariant batteries behind the `selftest` command.

Each suite re-runs the defining identities of one layer at the shipped
tolerances and reports its worst deviation.  Suites accept a fault flag so the
reporting path itself can be exercised: injecting a fault corrupts a local
copy of the inputs and must flip the suite to failed.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

import numpy as np

from . import clifford, dirac, landau, loops, photon, zeeman
from .clifford import build_basis, trace_product
from .dirac import BackgroundFields
from .minkowski import FourVector, ThreeVector, epsilon_contraction_3d, levi_civita


@dataclass(frozen=True)
class SuiteResult:
    name: str
    passed: bool
    max_deviation: float
    tolerance: float
    detail: str


def _result(name, dev, tol, detail=""):
    return SuiteResult(name=name, passed=bool(dev <= tol),
                       max_deviation=float(dev), tolerance=tol, detail=detail)


def suite_tensor(fault: bool = False) -> SuiteResult:
    rng = np.random.default_rng(101)
    dev = 0.0
    for _ in range(200):
        u = FourVector(*rng.uniform(-5, 5, 4))
        v = FourVector(*rng.uniform(-5, 5, 4))
        from .minkowski import minkowski_dot
        dev = max(dev, abs(minkowski_dot(u, v) - minkowski_dot(v, u)))
    for idx in itertools.permutations(range(4)):
        swapped = (idx[1], idx[0]) + idx[2:]
        dev = max(dev, abs(levi_civita(idx) + levi_civita(swapped)))
    for t in itertools.product(range(3), repeat=4):
        mu, sg, rho, tau = t
        d = lambda i, j: 1 if i == j else 0
        want = -d(sg, mu) * d(tau, rho) + d(sg, rho) * d(tau, mu)
        dev = max(dev, abs(epsilon_contraction_3d(mu, sg, rho, tau) - want))
    for _ in range(50):
        raw = rng.normal(size=(4, 4)) + 1j * rng.normal(size=(4, 4))
        m = raw + raw.conj().T
        from .minkowski import eig_hermitian
        w, _ = eig_hermitian(m)
        dev = max(dev, abs(np.sum(w) - np.trace(m).real))
    if fault:
        dev += 1.0
    return _result("tensor_core", dev, 1e-10)


def suite_clifford(fault: bool = False) -> SuiteResult:
    dev = 0.0
    for dim in (3, 4):
        basis = build_basis(dim)
        gammas = [g.copy() for g in basis.gamma]
        if fault and dim == 4:
            gammas[1] = gammas[1].copy()
            gammas[1][0, 0] += 1e-3
        eye = np.eye(basis.order)
        for mu in range(dim):
            for nu in range(dim):
                anti = gammas[mu] @ gammas[nu] + gammas[nu] @ gammas[mu]
                want = 2.0 * (basis.metric_diag[mu] if mu == nu else 0.0) * eye
                dev = max(dev, float(np.max(np.abs(anti - want))))
        factor = -1.0 if dim == 3 else -2.0
        for nu in range(dim):
            acc = sum(basis.metric_diag[mu]
                      * gammas[mu] @ gammas[nu] @ gammas[mu]
                      for mu in range(dim))
            dev = max(dev, float(np.max(np.abs(acc - factor * gammas[nu]))))
    b4 = build_basis(4)
    for idx in itertools.product(range(4), repeat=4):
        got = trace_product(b4, [b4.gamma[i] for i in idx] + [b4.gamma5_lower])
        dev = max(dev, abs(got - 4j * levi_civita(idx)))
    for mu in range(4):
        for nu in range(4):
            dev = max(dev, abs(trace_product(
                b4, [b4.gamma[mu], b4.gamma[nu], b4.gamma5])))
    report = clifford.discrete_symmetry_check(b4)
    if not all(all(row.values()) for row in report.values()):
        dev = max(dev, 1.0)
    return _result("clifford", dev, 1e-13)


def suite_dirac(fault: bool = False) -> SuiteResult:
    rng = np.random.default_rng(202)
    dev = 0.0
    for _ in range(1000):
        m = 1.0
        f = BackgroundFields(
            a=FourVector(*(0.1 * m * rng.uniform(-1, 1, 4))),
            b=FourVector(*(0.1 * m * rng.uniform(-1, 1, 4))), m=m)
        p = rng.uniform(-1.5, 1.5, 3)
        roots = sorted(z.real for z in dirac.dispersion_roots(p, f).roots)
        eigs = dirac.hamiltonian_eigenvalues(p, f)
        dev = max(dev, float(np.max(np.abs(np.array(roots) - eigs))))
    closed_dev = 0.0
    for _ in range(200):
        f = BackgroundFields(a=FourVector(*(0.05 * rng.uniform(-1, 1, 4))),
                             b=FourVector(rng.uniform(-0.1, 0.1), 0, 0, 0),
                             m=1.0)
        p = rng.uniform(-1.5, 1.5, 3)
        cf = dirac.energies_closed_form(p, f, "timelike_b")
        r = dirac.dispersion_roots(p, f)
        closed_dev = max(closed_dev, float(np.max(
            np.abs(np.sort(cf["E_u"]) - np.sort(r.particle)))))
    spinor_dev = 0.0
    for _ in range(200):
        f = BackgroundFields(a=FourVector(*(0.1 * rng.uniform(-1, 1, 4))),
                             b=FourVector(rng.uniform(-0.1, 0.1), 0, 0, 0),
                             m=1.0)
        p = rng.uniform(-1.5, 1.5, 3)
        for alpha in (1, 2):
            u = dirac.spinor_u(alpha, p, f)
            spinor_dev = max(spinor_dev, dirac.spinor_residual(u, f),
                             abs(dirac.spinor_norm(u) - 1.0))
            v = dirac.spinor_v(alpha, p, f)
            spinor_dev = max(spinor_dev, dirac.spinor_residual(v, f),
                             abs(dirac.spinor_norm(v) + 1.0))
    prop_dev = 0.0
    checked = 0
    while checked < 500:
        f = BackgroundFields(a=FourVector(*(0.1 * rng.uniform(-1, 1, 4))),
                             b=FourVector(*(0.1 * rng.uniform(-1, 1, 4))),
                             m=1.0)
        p = FourVector(*rng.uniform(-2, 2, 4))
        try:
            S = dirac.propagator_exact(p, f)
        except ValueError:
            continue
        K = dirac.propagator_kernel(p, f)
        if fault:
            K = K + 1e-6
        prop_dev = max(prop_dev, float(np.max(np.abs(K @ S - 1j * np.eye(4)))))
        checked += 1
    total = max(dev / 1e-9, closed_dev / 1e-12, spinor_dev / 1e-9,
                prop_dev / 1e-10)
    return _result("dirac_lv", total, 1.0,
                   detail=f"roots {dev:.2e}, closed {closed_dev:.2e}, "
                          f"spinors {spinor_dev:.2e}, propagator {prop_dev:.2e}")


def suite_landau(fault: bool = False) -> SuiteResult:
    rng = np.random.default_rng(303)
    rel_dev = 0.0
    for n in range(0, 11):
        for s in (-1, 1):
            for p_z in (-0.7, 0.0, 0.4):
                f = BackgroundFields(
                    a=FourVector(*(0.1 * rng.uniform(-1, 1, 4))),
                    b=FourVector(*(0.1 * rng.uniform(-1, 1, 4))), m=1.0)
                st = landau.LandauState(n=n, s=s, p_z=p_z, p_y=0.0, B0=0.2,
                                        fields=f)
                got = landau.energy_shift_quadrature_oracle(st)
                want = landau.energy_shift(st)
                if fault:
                    want = landau.EnergyShift(
                        total=want.total + 1e-3,
                        terms={**want.terms,
                               "A0": want.terms["A0"] + 1e-3})
                for key in want.terms:
                    bound = 1e-8 * abs(want.terms[key]) + 1e-12
                    rel_dev = max(rel_dev,
                                  abs(got.terms[key] - want.terms[key]) / bound)
    f = BackgroundFields(a=FourVector(0, 0, 0, 0),
                         b=FourVector(0, 0, 0, 5e-4), m=1.0)
    rec = landau.penning_frequencies(1.0, 0.1, f)
    ratio_dev = abs(rec["delta_omega_bar"] / 5e-4 - 4.0)
    total = max(rel_dev, ratio_dev / 1e-10)
    return _result("landau_penning", total, 1.0,
                   detail=f"shift bound ratio {rel_dev:.2e}, "
                          f"penning dev {ratio_dev:.2e}")


def suite_zeeman(fault: bool = False) -> SuiteResult:
    devs = zeeman.fw_identity_deviations(np.random.default_rng(404))
    alg_dev = max(devs.values())
    U = zeeman.fw_free_transform([0.6, -0.3, 0.9], 1.0)
    basis = build_basis(4)
    p = np.array([0.6, -0.3, 0.9])
    H = sum(basis.alpha[i] * p[i] for i in range(3)) + basis.beta
    E = math.sqrt(float(p @ p) + 1.0)
    block_dev = float(np.max(np.abs(U @ H @ U.conj().T - E * basis.beta)))
    cfg = zeeman.FieldConfiguration(p=(0.3, -0.2, 0.5), A0=0.02,
                                    A=(0.01, -0.02, 0.015))
    f = BackgroundFields(a=FourVector(0.02, 0.01, -0.015, 0.03),
                         b=FourVector(0.04, 0.02, -0.03, 0.05), m=1.0)
    slope = zeeman.fw_slope_vs_mass(cfg, f)
    slope_dev = max(0.0, slope + 2.0)

    shift_dev = 0.0
    vanish_dev = 0.0
    fz = BackgroundFields(a=FourVector(0, 0, 0, 0.3),
                          b=FourVector(0.2, 0, 0, 1e-3), m=1.0)
    for st in (zeeman.CoupledState(0, "plus", 0.5),
               zeeman.CoupledState(1, "plus", 1.5),
               zeeman.CoupledState(1, "minus", -0.5),
               zeeman.CoupledState(2, "plus", 0.5)):
        rec = zeeman.zeeman_shift_oracle(st, fz, B0=5.0)
        want = zeeman.zeeman_shift_axial(st, 1e-3)
        if fault:
            want *= 1.5
        shift_dev = max(shift_dev, abs(rec["axial"] - want) / abs(want))
        vanish_dev = max(vanish_dev, abs(rec["vector"]),
                         abs(rec["b0_gradient"]), abs(rec["sigma_dot_A"]))
    total = max(alg_dev / 1e-12, block_dev / 1e-12, slope_dev,
                shift_dev / 1e-8, vanish_dev / 1e-10)
    return _result("zeeman_fw", total, 1.0,
                   detail=f"algebra {alg_dev:.2e}, block {block_dev:.2e}, "
                          f"slope {slope:.2f}, axial rel {shift_dev:.2e}, "
                          f"vanishing {vanish_dev:.2e}")


def suite_loops(fault: bool = False) -> SuiteResult:
    rel_dev = 0.0
    for kind in ("scalar", "p2"):
        for D in (3, 4):
            for alpha in (2, 3, 4):
                deg = {"scalar": 0, "p2": 2}[kind]
                if 2 * alpha - D - deg <= 0:
                    continue
                want = loops.feynman_integral(kind, D, alpha, 1.0)
                got = loops.wick_oracle(kind, D, alpha, 1.0)
                rel_dev = max(rel_dev, abs(got - want) / abs(want))
    led = loops.cs_ledger_4d()
    ledger_ok = (led["pole_sum"] == 0
                 and led["finite_total"].rational == loops.Fraction(1, 12))
    fifth = {e.label: e for e in led["per_term"]}["m2_bdotp"]
    ledger_ok = ledger_ok and fifth.finite == loops.Fraction(1, 48)
    cs3 = loops.cs_coefficient_3d(1.0, 1.0)
    ledger_ok = ledger_ok and cs3.rational == loops.Fraction(-1, 8)
    ff_dev = abs(loops.form_factor_3d(1e-10, 1.0) - 1.0)
    rng = np.random.default_rng(505)
    trace_dev = 0.0
    for _ in range(200):
        vecs = [rng.normal(size=4) for _ in range(5)]
        m = rng.uniform(0.5, 2.0)
        scale = max(np.max(np.abs(np.concatenate(vecs))), m) ** 8
        trace_dev = max(trace_dev,
                        loops.trace_reduction_check(*vecs, m) / scale)
    if fault:
        ledger_ok = False
    total = max(rel_dev / 1e-6, ff_dev / 1e-10, trace_dev / 1e-9,
                0.0 if ledger_ok else 2.0)
    return _result("loop_tools", total, 1.0,
                   detail=f"wick rel {rel_dev:.2e}, ledger exact {ledger_ok}, "
                          f"trace {trace_dev:.2e}")


def suite_photon(fault: bool = False) -> SuiteResult:
    rng = np.random.default_rng(606)
    ident_dev = 0.0
    checked = 0
    while checked < 500:
        k = ThreeVector(*rng.uniform(-2, 2, 3))
        th = rng.uniform(-1.5, 1.5)
        ksq = k.minkowski_sq()
        if abs(ksq) < 0.05 or abs(ksq - th * th) < 0.05:
            continue
        params = photon.MCSParams(theta=float(th), lam=1.0)
        prop = photon.mcs_propagator(k, params)
        K = photon.mcs_kernel(k, params)
        ident_dev = max(ident_dev,
                        float(np.max(np.abs(K @ prop - 1j * np.eye(3)))))
        checked += 1
    trans_dev = 0.0
    for _ in range(50):
        k = ThreeVector(*rng.uniform(-2, 2, 3))
        if abs(k.minkowski_sq()) < 0.05:
            continue
        prop = photon.mcs_propagator(k, photon.MCSParams(theta=0.6, lam=1e8))
        trans_dev = max(trans_dev,
                        float(np.max(np.abs(k.lowered() @ prop)))
                        / float(np.max(np.abs(prop))))
    closed_dev = 0.0
    vg_dev = 0.0
    for eta0, kmag in ((0.1, 1.0), (0.05, 0.4), (0.3, 2.0)):
        bir = photon.birefringence_timelike(eta0, kmag)
        closed_dev = max(closed_dev,
                         abs(bir["omega_plus"] ** 2 - kmag * (kmag + eta0)),
                         abs(bir["omega_minus"].real ** 2
                             - kmag * (kmag - eta0)))
        h = 1e-5
        up = photon.birefringence_timelike(eta0, kmag + h)["omega_plus"]
        dn = photon.birefringence_timelike(eta0, kmag - h)["omega_plus"]
        vg_dev = max(vg_dev, abs((up - dn) / (2 * h) - bir["vg_plus"]))
    max_dev = 0.0
    eta = FourVector(0.12, 0, 0, 0)
    for branch in ("plus", "minus"):
        wave = photon.solve_circular_mode([0.4, -0.3, 0.8], 0.12, branch)
        if fault:
            wave["E0"] = wave["E0"] + 0.01
        res = photon.maxwell_residual(wave, eta)
        max_dev = max(max_dev, *res.values())
    flag_ok = (not photon.birefringence_timelike(0.1, 0.05)["stable"]
               and photon.birefringence_timelike(0.1, 0.15)["stable"])
    total = max(ident_dev / 1e-11, trans_dev / 1e-6, closed_dev / 1e-12,
                vg_dev / 1e-8, max_dev / 1e-10, 0.0 if flag_ok else 2.0)
    return _result("photon_lv", total, 1.0,
                   detail=f"mcs {ident_dev:.2e}, transversal {trans_dev:.2e}, "
                          f"closed {closed_dev:.2e}, vg {vg_dev:.2e}, "
                          f"maxwell {max_dev:.2e}")


SUITES = {
    "tensor_core": suite_tensor,
    "clifford": suite_clifford,
    "dirac_lv": suite_dirac,
    "landau_penning": suite_landau,
    "zeeman_fw": suite_zeeman,
    "loop_tools": suite_loops,
    "photon_lv": suite_photon,
}


def run_selftest(fault: str | None = None) -> list[SuiteResult]:
    """Run every suite; `fault` names a suite to corrupt (testing hook)."""
    if fault is not None and fault not in SUITES:
        raise ValueError(f"unknown suite {fault!r}")
    return [fn(fault=(name == fault)) for name, fn in SUITES.items()]
