"""Pydantic request/response models for the HTTP service.

Complex numbers travel as {"re": ..., "im": ...}; every response embeds the
fully-resolved request so any output can be regenerated from its summary.
"""

from __future__ import annotations

from typing import Literal, Optional

from pydantic import BaseModel, Field


class ComplexNumber(BaseModel):
    re: float = 0.0
    im: float = 0.0

    def to_complex(self) -> complex:
        return complex(self.re, self.im)

    @classmethod
    def wrap(cls, z: complex) -> "ComplexNumber":
        return cls(re=float(z.real), im=float(z.imag))


class CriticalParamsModel(BaseModel):
    c: int
    d: int
    xi1: ComplexNumber
    xi2: ComplexNumber
    zeta1: ComplexNumber
    zeta2: ComplexNumber


class FamilyParamsModel(BaseModel):
    h: int
    k: int
    u: float = Field(ge=0.0, le=1.0)


class SeriesCoeff(BaseModel):
    k: int
    re: float
    im: float


class QuatPathModel(BaseModel):
    z: list[SeriesCoeff]
    w: list[SeriesCoeff]


class FamilyRequest(BaseModel):
    params: FamilyParamsModel
    grid_size: int = Field(default=1024, ge=16, le=65536)
    seed: int = 0
    with_knot_report: bool = True
    with_linking: bool = False
    epsilon: float = 1e-3


class FamilyResponse(BaseModel):
    config: FamilyRequest
    energy: float
    energy_level: float
    singular_u: Optional[float] = None
    predicted_knot: dict
    q: QuatPathModel
    closure: dict
    knot_report: Optional[dict] = None
    linking: Optional[int] = None


class FlowRequest(BaseModel):
    init: Literal["random", "given"] = "random"
    q: Optional[QuatPathModel] = None
    seed: int = 0
    max_frequency: int = Field(default=5, ge=1, le=32)
    parity: Literal["even", "odd"] = "even"
    step: float = 1e-3
    grad_tol: float = 1e-8
    max_iter: int = 200000
    record_every: int = 100


class FlowResponse(BaseModel):
    config: FlowRequest
    converged: bool
    iterations: int
    energy: float
    residual: float
    fit_residual: float
    left_open_stratum: bool
    classified: Optional[CriticalParamsModel] = None
    trajectory: list[list[float]]
    limit: QuatPathModel


class ClassifyRequest(BaseModel):
    q: QuatPathModel
    fit_tol: float = 1e-8


class ClassifyResponse(BaseModel):
    config: ClassifyRequest
    critical: bool
    fit_residual: float
    normal_form: Optional[CriticalParamsModel] = None
    eigenvalues: Optional[list[float]] = None
    detail: str = ""


class InvariantsRequest(BaseModel):
    q: QuatPathModel
    grid_size: int = Field(default=1024, ge=16, le=65536)


class InvariantsResponse(BaseModel):
    config: InvariantsRequest
    energy: float
    closure: dict
    grid: list[float]
    kappa1: list[float]
    kappa2: list[float]
    tw: list[float]
    st: list[float]
    speed: list[float]


class SpectrumRequest(BaseModel):
    c_max: int = Field(ge=1, le=64)


class SpectrumLevel(BaseModel):
    c: int
    d: int
    energy: float


class SpectrumResponse(BaseModel):
    config: SpectrumRequest
    levels: list[SpectrumLevel]


class ExportRequest(BaseModel):
    q: QuatPathModel
    format: Literal["csv", "obj", "json"]
    grid_size: int = Field(default=1024, ge=16, le=65536)
    tube_scale: Optional[float] = None


class ExportResponse(BaseModel):
    config: ExportRequest
    content: str
