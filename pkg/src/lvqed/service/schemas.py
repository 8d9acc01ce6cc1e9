"""Request and response models for the compute service.

Every sweep endpoint takes the physical inputs plus an optional sweep
directive and returns either a table (columns + rows) or a flat record.
The CLI builds the same models and renders the same responses, so in-process
and over-the-wire use produce identical bytes.
"""

from __future__ import annotations

from pydantic import BaseModel, Field, field_validator, model_validator


class Sweep(BaseModel):
    variable: str
    start: float
    stop: float
    steps: int = Field(ge=1)

    @model_validator(mode="after")
    def _ordered(self):
        if self.start > self.stop:
            raise ValueError("sweep start must not exceed stop")
        return self

    def values(self):
        if self.steps == 1:
            return [self.start]
        step = (self.stop - self.start) / (self.steps - 1)
        return [self.start + i * step for i in range(self.steps)]


class PhysicalParams(BaseModel):
    m: float = Field(default=1.0, gt=0)
    e: float = 1.0
    a: list[float] = Field(default_factory=lambda: [0.0, 0.0, 0.0, 0.0])
    b: list[float] = Field(default_factory=lambda: [0.0, 0.0, 0.0, 0.0])

    @field_validator("a", "b")
    @classmethod
    def _four_components(cls, v):
        if len(v) != 4:
            raise ValueError("background vectors need 4 components (t,x,y,z)")
        return [float(c) for c in v]


class DispersionRequest(PhysicalParams):
    sweep: Sweep = Sweep(variable="pmag", start=0.0, stop=2.0, steps=21)
    direction: list[float] = Field(default_factory=lambda: [0.0, 0.0, 1.0])
    oracle: bool = False
    seed: int = 0

    @field_validator("direction")
    @classmethod
    def _three_components(cls, v):
        if len(v) != 3 or all(c == 0 for c in v):
            raise ValueError("direction needs 3 components, not all zero")
        return [float(c) for c in v]


class SpectrumRequest(PhysicalParams):
    B0: float = Field(default=0.1, gt=0)
    n_max: int = Field(default=5, ge=0, le=30)
    p_z: float = 0.0
    oracle: bool = False


class PenningRequest(PhysicalParams):
    B0: float = Field(default=0.1, gt=0)


class ZeemanRequest(PhysicalParams):
    ell_max: int = Field(default=2, ge=0, le=2)
    verify: bool = False
    B0: float = 1.0


class PhotonRequest(BaseModel):
    eta0: float | None = None
    b: list[float] | None = None
    e: float = 1.0
    sweep: Sweep = Sweep(variable="kmag", start=0.05, stop=2.0, steps=40)
    verify: bool = False

    @model_validator(mode="after")
    def _eta_source(self):
        if self.eta0 is None and self.b is None:
            raise ValueError("provide eta0 directly or a b vector to derive it")
        if self.b is not None and len(self.b) != 4:
            raise ValueError("b needs 4 components")
        return self


class LoopCheckRequest(BaseModel):
    m: float = Field(default=1.0, gt=0)
    e: float = 1.0
    theta: float = 0.7
    lam: float = 1.0

    @field_validator("lam")
    @classmethod
    def _nonzero(cls, v):
        if v == 0.0:
            raise ValueError("gauge parameter must be nonzero")
        return v


class SelftestRequest(BaseModel):
    fault: str | None = None


class TableResponse(BaseModel):
    kind: str = "table"
    columns: list[str]
    rows: list[list]


class RecordResponse(BaseModel):
    kind: str = "record"
    record: dict


class SuiteReport(BaseModel):
    name: str
    passed: bool
    max_deviation: float
    tolerance: float
    detail: str


class SelftestResponse(BaseModel):
    kind: str = "selftest"
    ok: bool
    suites: list[SuiteReport]
