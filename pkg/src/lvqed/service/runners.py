"""Computation behind each endpoint.  The CLI calls these directly."""

from __future__ import annotations

from fractions import Fraction

import numpy as np

from .. import dirac, landau, loops, photon, zeeman
from ..dirac import BackgroundFields
from ..minkowski import FourVector
from ..selftest import run_selftest
from .schemas import (
    DispersionRequest,
    LoopCheckRequest,
    PenningRequest,
    PhotonRequest,
    RecordResponse,
    SelftestRequest,
    SelftestResponse,
    SpectrumRequest,
    SuiteReport,
    TableResponse,
    ZeemanRequest,
)


def _fields(req) -> BackgroundFields:
    return BackgroundFields(a=FourVector(*req.a), b=FourVector(*req.b),
                            m=req.m, e=req.e)


def run_dispersion(req: DispersionRequest) -> TableResponse:
    f = _fields(req)
    direction = np.asarray(req.direction, dtype=float)
    direction = direction / np.linalg.norm(direction)
    columns = ["px", "py", "pz", "root1", "root2", "root3", "root4",
               "max_residual"]
    if req.oracle:
        columns.append("eigen_deviation")
    rows = []
    for val in req.sweep.values():
        if req.sweep.variable == "pmag":
            p = val * direction
        elif req.sweep.variable in ("px", "py", "pz"):
            p = np.zeros(3)
            p["xyz".index(req.sweep.variable[1])] = val
        else:
            raise ValueError(f"unknown sweep variable {req.sweep.variable!r}")
        roots = dirac.dispersion_roots(p, f)
        reals = [z.real for z in roots.roots]
        resid = max(dirac.quartic_residual(z, p, f) for z in roots.roots)
        row = [float(p[0]), float(p[1]), float(p[2]), *reals, resid]
        if req.oracle:
            eigs = dirac.hamiltonian_eigenvalues(p, f)
            row.append(float(np.max(np.abs(np.sort(reals) - eigs))))
        rows.append(row)
    return TableResponse(columns=columns, rows=rows)


def run_spectrum(req: SpectrumRequest) -> TableResponse:
    f = _fields(req)
    columns = ["n", "s", "p_z", "energy", "shift_total",
               "shift_A0", "shift_Az", "shift_B0", "shift_Bz"]
    if req.oracle:
        columns.append("oracle_deviation")
    rows = []
    for n in range(req.n_max + 1):
        for s in (-1, 1):
            st = landau.LandauState(n=n, s=s, p_z=req.p_z, p_y=0.0,
                                    B0=req.B0, fields=f)
            sh = landau.energy_shift(st)
            row = [n, s, req.p_z, landau.landau_energy(st), sh.total,
                   sh.terms["A0"], sh.terms["Az"], sh.terms["B0term"],
                   sh.terms["Bzterm"]]
            if req.oracle:
                oracle = landau.energy_shift_quadrature_oracle(st)
                row.append(abs(oracle.total - sh.total))
            rows.append(row)
    return TableResponse(columns=columns, rows=rows)


def run_penning(req: PenningRequest) -> RecordResponse:
    f = _fields(req)
    rec = landau.penning_frequencies(req.m, abs(req.e) * req.B0, f)
    bz = f.b.z
    rec["ratio_delta_omega_bar_over_bz"] = (
        rec["delta_omega_bar"] / bz if bz != 0.0 else 0.0)
    return RecordResponse(record=rec)


def run_zeeman(req: ZeemanRequest) -> TableResponse:
    f = _fields(req)
    bz = f.b.z
    columns = ["ell", "branch", "m_j", "shift"]
    if req.verify:
        columns += ["oracle_axial", "vector", "b0_gradient", "sigma_dot_A"]
    rows = []
    for ell in range(req.ell_max + 1):
        branches = ["plus"] if ell == 0 else ["plus", "minus"]
        for branch in branches:
            j = ell + 0.5 if branch == "plus" else ell - 0.5
            mjs = [(-j + k) for k in range(int(2 * j) + 1)]
            for m_j in mjs:
                st = zeeman.CoupledState(ell=ell, branch=branch, m_j=m_j)
                row = [ell, branch, m_j, zeeman.zeeman_shift_axial(st, bz)]
                if req.verify:
                    rec = zeeman.zeeman_shift_oracle(st, f, B0=req.B0)
                    row += [rec["axial"], rec["vector"], rec["b0_gradient"],
                            rec["sigma_dot_A"]]
                rows.append(row)
    return TableResponse(columns=columns, rows=rows)


def run_photon(req: PhotonRequest) -> TableResponse:
    if req.eta0 is not None:
        eta0 = float(req.eta0)
    else:
        eta0 = photon.eta_from_b(FourVector(*req.b), req.e).t
    columns = ["kmag", "omega_plus", "omega_minus_real", "omega_minus_imag",
               "vg_plus", "vg_minus", "stable"]
    if req.verify:
        columns += ["vg_plus_fd_dev", "vg_minus_fd_dev"]
    rows = []
    for kmag in req.sweep.values():
        if kmag <= 0:
            raise ValueError("photon sweep needs positive momenta")
        bir = photon.birefringence_timelike(eta0, kmag)
        # absent branches travel as None (JSON null) so that in-process and
        # remote responses render identically
        row = [kmag, bir["omega_plus"], bir["omega_minus"].real,
               bir["omega_minus"].imag, bir["vg_plus"], bir["vg_minus"],
               bool(bir["stable"])]
        if req.verify:
            h = 1e-5
            devs = []
            for branch, key in (("omega_plus", "vg_plus"),
                                ("omega_minus", "vg_minus")):
                if bir[key] is None:
                    devs.append(None)
                    continue
                up = photon.birefringence_timelike(eta0, kmag + h)[branch]
                dn = photon.birefringence_timelike(eta0, kmag - h)[branch]
                fd = (np.real(up) - np.real(dn)) / (2 * h)
                devs.append(abs(fd - bir[key]))
            row += devs
        rows.append(row)
    return TableResponse(columns=columns, rows=rows)


def run_loop_check(req: LoopCheckRequest) -> RecordResponse:
    m, e = req.m, req.e
    finite = []
    for kind, D, alpha in (("scalar", 3, 2), ("scalar", 4, 4),
                           ("p2", 4, 4), ("p2", 3, 3)):
        want = loops.feynman_integral(kind, D, alpha, m)
        got = loops.wick_oracle(kind, D, alpha, m)
        finite.append({
            "kind": kind, "D": D, "alpha": alpha,
            "analytic_imag": want.imag, "oracle_imag": got.imag,
            "rel_error": abs(got - want) / abs(want),
        })
    laurent = {
        f"{kind}_alpha{alpha}": {
            "pole": str(entry.pole), "finite_extra": str(entry.finite)}
        for (kind, alpha), entry in loops.DIVERGENT_TABLE.items()
    }
    led = loops.cs_ledger_4d(e=e)
    ledger = {
        "pole_sum": str(led["pole_sum"]),
        "finite_total": str(led["finite_total"].rational),
        "finite_total_value": led["finite_total_value"],
        "per_term": [
            {"label": en.label, "block": str(en.block),
             "finite": str(en.finite), "pattern": en.pattern,
             "pattern_sign": en.pattern_sign}
            for en in led["per_term"]
        ],
    }
    cs3 = loops.cs_coefficient_3d(m, e)
    record = {
        "finite_table": finite,
        "laurent_entries": laurent,
        "induced_4d": ledger,
        "induced_3d": {
            "rational": str(cs3.rational), "unit": cs3.unit,
            "mass_sign": cs3.mass_sign, "value": cs3.value(e),
        },
        "form_factor_zero_momentum": loops.form_factor_3d(0.0, m),
        "form_factor_limit_dev": abs(
            loops.form_factor_3d(1e-10 * m * m, m) - 1.0 / abs(m)),
        "fifth_term": str(Fraction(1, 48)),
        "mcs": _mcs_identity_section(req.theta, req.lam),
    }
    return RecordResponse(record=record)


def _mcs_identity_section(theta: float, lam: float) -> dict:
    """Planar propagator checks on a fixed pole-free momentum grid."""
    from ..minkowski import ThreeVector

    params = photon.MCSParams(theta=theta, lam=lam)
    landau = photon.MCSParams(theta=theta, lam=1e8)
    grid = [ThreeVector(t, x, y)
            for t in (-1.3, 0.4, 1.1) for x in (-0.8, 0.5) for y in (0.3, -0.6)]
    ident = trans = 0.0
    used = 0
    for k in grid:
        ksq = k.minkowski_sq()
        if abs(ksq) < 0.05 or abs(ksq - theta * theta) < 0.05:
            continue
        prop = photon.mcs_propagator(k, params)
        K = photon.mcs_kernel(k, params)
        ident = max(ident, float(np.max(np.abs(K @ prop - 1j * np.eye(3)))))
        tail_free = photon.mcs_propagator(k, landau)
        trans = max(trans, float(np.max(np.abs(k.lowered() @ tail_free)))
                    / float(np.max(np.abs(tail_free))))
        used += 1
    return {"theta": theta, "lambda": lam, "grid_points": used,
            "max_identity_residual": ident,
            "transversality_residual": trans}


def run_selftest_request(req: SelftestRequest) -> SelftestResponse:
    results = run_selftest(fault=req.fault)
    suites = [SuiteReport(name=r.name, passed=r.passed,
                          max_deviation=r.max_deviation,
                          tolerance=r.tolerance, detail=r.detail)
              for r in results]
    return SelftestResponse(ok=all(r.passed for r in results), suites=suites)
