"""FastAPI application wrapping the numerical core."""

from __future__ import annotations

from fastapi import FastAPI, HTTPException

from .. import __version__
from . import runners
from .schemas import (
    DispersionRequest,
    LoopCheckRequest,
    PenningRequest,
    PhotonRequest,
    RecordResponse,
    SelftestRequest,
    SelftestResponse,
    SpectrumRequest,
    TableResponse,
    ZeemanRequest,
)

app = FastAPI(
    title="lvqed",
    version=__version__,
    description="Cross-validated observables of a CPT-odd extension of QED",
)


@app.get("/health")
def health() -> dict:
    return {"status": "ok", "version": __version__}


def _guarded(fn, req):
    try:
        return fn(req)
    except ValueError as exc:
        raise HTTPException(status_code=422, detail=str(exc)) from exc


@app.post("/v1/dispersion", response_model=TableResponse)
def dispersion(req: DispersionRequest) -> TableResponse:
    return _guarded(runners.run_dispersion, req)


@app.post("/v1/spectrum", response_model=TableResponse)
def spectrum(req: SpectrumRequest) -> TableResponse:
    return _guarded(runners.run_spectrum, req)


@app.post("/v1/penning", response_model=RecordResponse)
def penning(req: PenningRequest) -> RecordResponse:
    return _guarded(runners.run_penning, req)


@app.post("/v1/zeeman", response_model=TableResponse)
def zeeman(req: ZeemanRequest) -> TableResponse:
    return _guarded(runners.run_zeeman, req)


@app.post("/v1/photon", response_model=TableResponse)
def photon(req: PhotonRequest) -> TableResponse:
    return _guarded(runners.run_photon, req)


@app.post("/v1/loop-check", response_model=RecordResponse)
def loop_check(req: LoopCheckRequest) -> RecordResponse:
    return _guarded(runners.run_loop_check, req)


@app.post("/v1/selftest", response_model=SelftestResponse)
def selftest(req: SelftestRequest) -> SelftestResponse:
    return _guarded(runners.run_selftest_request, req)
