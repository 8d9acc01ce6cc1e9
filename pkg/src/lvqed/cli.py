"""Command-line front end.

Thin client of the service layer: each subcommand builds the same request
model the HTTP endpoint accepts, runs it (in process by default, or against a
remote service with --server), and renders the structured response as CSV or
JSON.  Identical configurations produce byte-identical output files.

Exit codes: 0 success, 1 selftest/verification failure, 2 usage error.
"""

from __future__ import annotations

import argparse
import json
import math
import sys

from .service import runners
from .service.schemas import (
    DispersionRequest,
    LoopCheckRequest,
    PenningRequest,
    PhotonRequest,
    RecordResponse,
    SelftestRequest,
    SelftestResponse,
    SpectrumRequest,
    Sweep,
    TableResponse,
    ZeemanRequest,
)

_DEVIATION_MARKERS = ("deviation", "residual", "_dev", "vector",
                      "b0_gradient", "sigma_dot_A")


class UsageError(Exception):
    pass


def _parse_vector(text: str, n: int):
    parts = text.split(",")
    if len(parts) != n:
        raise UsageError(f"expected {n} comma-separated components, got {text!r}")
    try:
        return [float(p) for p in parts]
    except ValueError as exc:
        raise UsageError(f"bad vector component in {text!r}") from exc


def _parse_sweep(text: str) -> Sweep:
    parts = text.split(":")
    if len(parts) != 4:
        raise UsageError("sweep format is var:start:stop:steps")
    var, start, stop, steps = parts
    try:
        return Sweep(variable=var, start=float(start), stop=float(stop),
                     steps=int(steps))
    except Exception as exc:
        raise UsageError(f"bad sweep {text!r}: {exc}") from exc


def _load_config(path: str) -> dict:
    conf = {}
    with open(path, "r", encoding="utf-8") as fh:
        for line in fh:
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            if "=" not in line:
                raise UsageError(f"config line without '=': {line!r}")
            key, val = line.split("=", 1)
            conf[key.strip()] = val.strip()
    return conf


def _fmt(value) -> str:
    if value is None:
        return "nan"
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        if math.isnan(value):
            return "nan"
        return format(value, ".17g")
    return str(value)


def render(response, fmt: str) -> str:
    """Serialize a response deterministically (CSV table or sorted JSON)."""
    if isinstance(response, TableResponse):
        if fmt == "csv":
            lines = [",".join(response.columns)]
            for row in response.rows:
                lines.append(",".join(_fmt(v) for v in row))
            return "\n".join(lines) + "\n"
        payload = [dict(zip(response.columns, row)) for row in response.rows]
        return json.dumps(payload, indent=2, sort_keys=True) + "\n"
    if isinstance(response, RecordResponse):
        if fmt == "csv":
            flat = {k: v for k, v in response.record.items()
                    if isinstance(v, (int, float, bool, str))}
            lines = [",".join(flat.keys()),
                     ",".join(_fmt(v) for v in flat.values())]
            return "\n".join(lines) + "\n"
        return json.dumps(response.record, indent=2, sort_keys=True) + "\n"
    if isinstance(response, SelftestResponse):
        return json.dumps(response.model_dump(), indent=2, sort_keys=True) + "\n"
    raise TypeError(f"cannot render {type(response)!r}")


def _deviation_columns(response: TableResponse):
    return [i for i, c in enumerate(response.columns)
            if any(marker in c for marker in _DEVIATION_MARKERS)]


def _run(request, path: str, server: str | None):
    """Dispatch a request in process or to a remote service."""
    if server is None:
        runner = {
            "dispersion": runners.run_dispersion,
            "spectrum": runners.run_spectrum,
            "penning": runners.run_penning,
            "zeeman": runners.run_zeeman,
            "photon": runners.run_photon,
            "loop-check": runners.run_loop_check,
            "selftest": runners.run_selftest_request,
        }[path]
        return runner(request)
    import httpx

    url = server.rstrip("/") + "/v1/" + path
    reply = httpx.post(url, json=request.model_dump(mode="json"), timeout=300.0)
    if reply.status_code != 200:
        raise UsageError(f"service error {reply.status_code}: {reply.text}")
    data = reply.json()
    model = {"table": TableResponse, "record": RecordResponse,
             "selftest": SelftestResponse}[data.get("kind", "table")]
    return model.model_validate(data)


def _emit(text: str, out: str | None):
    if out:
        with open(out, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _add_common(parser, vectors=True):
    parser.add_argument("--m", type=float, default=None, help="fermion mass")
    parser.add_argument("--e", type=float, default=None, help="charge")
    if vectors:
        parser.add_argument("--a", default=None, metavar="t,x,y,z",
                            help="vector background")
        parser.add_argument("--b", default=None, metavar="t,x,y,z",
                            help="axial background")
    parser.add_argument("--format", choices=("csv", "json"), default=None)
    parser.add_argument("--out", default=None, help="output path")
    parser.add_argument("--seed", type=int, default=None)
    parser.add_argument("--tolerance", type=float, default=None,
                        help="reporting threshold for verification columns")
    parser.add_argument("--config", default=None,
                        help="flat key=value config file (flags win)")
    parser.add_argument("--server", default=None,
                        help="base URL of a running service; default in-process")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="lvqed",
        description="Sweeps and self-tests for a CPT-odd extension of QED")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("dispersion", help="fermion dispersion roots")
    _add_common(p)
    p.add_argument("--sweep", default=None, metavar="var:start:stop:steps")
    p.add_argument("--direction", default=None, metavar="x,y,z")
    p.add_argument("--oracle", action="store_true",
                   help="append the eigenvalue-oracle deviation column")

    p = sub.add_parser("spectrum", help="Landau tower with background shifts")
    _add_common(p)
    p.add_argument("--B0", type=float, default=None)
    p.add_argument("--n-max", type=int, default=None)
    p.add_argument("--pz", type=float, default=None)
    p.add_argument("--oracle", action="store_true")

    p = sub.add_parser("penning", help="trap frequencies and their shifts")
    _add_common(p)
    p.add_argument("--B0", type=float, default=None)

    p = sub.add_parser("zeeman", help="axial Zeeman splitting of coupled states")
    _add_common(p)
    p.add_argument("--ell-max", type=int, default=None)
    p.add_argument("--B0", type=float, default=None)
    p.add_argument("--verify", action="store_true",
                   help="append quadrature-oracle columns")

    p = sub.add_parser("photon", help="birefringent photon branches")
    _add_common(p, vectors=False)
    p.add_argument("--eta0", type=float, default=None)
    p.add_argument("--b", default=None, metavar="t,x,y,z",
                   help="derive eta from an axial background")
    p.add_argument("--sweep", default=None, metavar="var:start:stop:steps")
    p.add_argument("--verify", action="store_true",
                   help="append finite-difference group-velocity deviations")

    p = sub.add_parser("loop-check", help="loop-integral tables and ledgers")
    _add_common(p, vectors=False)
    p.add_argument("--theta", type=float, default=None,
                   help="planar topological mass for the propagator checks")
    p.add_argument("--lambda", type=float, default=None, dest="lam",
                   help="planar gauge-fixing parameter")

    p = sub.add_parser("selftest", help="run every invariant suite")
    p.add_argument("--json", action="store_true", dest="as_json")
    p.add_argument("--inject-fault", default=None, metavar="SUITE",
                   help="corrupt one suite (testing hook)")
    p.add_argument("--out", default=None)
    p.add_argument("--server", default=None)

    p = sub.add_parser("serve", help="run the HTTP service")
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--port", type=int, default=8000)
    return parser


def _effective(args, conf: dict, key: str, default, cast=None):
    val = getattr(args, key, None)
    if val is not None and val is not False:
        return val
    if key in conf:
        raw = conf[key]
        if cast is not None:
            return cast(raw)
        if isinstance(default, bool):
            return raw.lower() in ("1", "true", "yes")
        if isinstance(default, int) and not isinstance(default, bool):
            return int(raw)
        if isinstance(default, float):
            return float(raw)
        return raw
    return default


def _build_request(args, conf: dict):
    cmd = args.command
    m = _effective(args, conf, "m", 1.0)
    e = _effective(args, conf, "e", 1.0)
    if cmd in ("dispersion", "spectrum", "penning", "zeeman"):
        a = _effective(args, conf, "a", "0,0,0,0", cast=str)
        b = _effective(args, conf, "b", "0,0,0,0", cast=str)
        a = _parse_vector(a, 4) if isinstance(a, str) else a
        b = _parse_vector(b, 4) if isinstance(b, str) else b
    if cmd == "dispersion":
        sweep = _effective(args, conf, "sweep", "pmag:0:2:21", cast=str)
        direction = _effective(args, conf, "direction", "0,0,1", cast=str)
        return DispersionRequest(
            m=m, e=e, a=a, b=b, sweep=_parse_sweep(sweep),
            direction=_parse_vector(direction, 3),
            oracle=bool(_effective(args, conf, "oracle", False)),
            seed=int(_effective(args, conf, "seed", 0)))
    if cmd == "spectrum":
        return SpectrumRequest(
            m=m, e=e, a=a, b=b,
            B0=float(_effective(args, conf, "B0", 0.1)),
            n_max=int(_effective(args, conf, "n_max", 5)),
            p_z=float(_effective(args, conf, "pz", 0.0)),
            oracle=bool(_effective(args, conf, "oracle", False)))
    if cmd == "penning":
        return PenningRequest(
            m=m, e=e, a=a, b=b,
            B0=float(_effective(args, conf, "B0", 0.1)))
    if cmd == "zeeman":
        return ZeemanRequest(
            m=m, e=e, a=a, b=b,
            ell_max=int(_effective(args, conf, "ell_max", 2)),
            B0=float(_effective(args, conf, "B0", 1.0)),
            verify=bool(_effective(args, conf, "verify", False)))
    if cmd == "photon":
        sweep = _effective(args, conf, "sweep", "kmag:0.05:2:40", cast=str)
        eta0 = _effective(args, conf, "eta0", None,
                          cast=lambda s: float(s))
        b = _effective(args, conf, "b", None, cast=str)
        b_vec = _parse_vector(b, 4) if isinstance(b, str) else b
        if eta0 is None and b_vec is None:
            eta0 = 0.1
        return PhotonRequest(
            eta0=eta0, b=b_vec, e=e, sweep=_parse_sweep(sweep),
            verify=bool(_effective(args, conf, "verify", False)))
    if cmd == "loop-check":
        return LoopCheckRequest(
            m=m, e=e,
            theta=float(_effective(args, conf, "theta", 0.7)),
            lam=float(_effective(args, conf, "lam", 1.0)))
    raise UsageError(f"unknown command {cmd!r}")


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)

    if args.command == "serve":
        import uvicorn

        from .service import app
        uvicorn.run(app, host=args.host, port=args.port)
        return 0

    try:
        if args.command == "selftest":
            response = _run(SelftestRequest(fault=args.inject_fault),
                            "selftest", args.server)
            if args.as_json:
                _emit(render(response, "json"), args.out)
            else:
                for suite in response.suites:
                    status = "PASS" if suite.passed else "FAIL"
                    print(f"{status} {suite.name:16s} "
                          f"max_deviation={suite.max_deviation:.3e} "
                          f"{suite.detail}")
                print("selftest:", "ok" if response.ok else "FAILED")
            return 0 if response.ok else 1

        conf = _load_config(args.config) if getattr(args, "config", None) else {}
        request = _build_request(args, conf)
        response = _run(request, args.command, args.server)
        fmt = _effective(args, conf, "format", "csv")
        out = _effective(args, conf, "out", None, cast=str)
        _emit(render(response, fmt), out)

        tolerance = _effective(args, conf, "tolerance", None,
                               cast=lambda s: float(s))
        verifying = bool(getattr(args, "oracle", False)
                         or getattr(args, "verify", False))
        if verifying and isinstance(response, TableResponse):
            threshold = tolerance if tolerance is not None else 1e-8
            worst = 0.0
            for idx in _deviation_columns(response):
                for row in response.rows:
                    v = row[idx]
                    if isinstance(v, float) and not math.isnan(v):
                        worst = max(worst, abs(v))
            print(f"verification: max deviation {worst:.3e} "
                  f"(threshold {threshold:g})", file=sys.stderr)
            if worst > threshold:
                return 1
        return 0
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
