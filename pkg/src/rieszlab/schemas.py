"""Pydantic request/response models for the HTTP service.

Function-valued inputs (symbols, transform arguments) travel as named
descriptors so that every request is fully serializable and reruns are
reproducible.
"""

from __future__ import annotations

from typing import Literal

import numpy as np
from pydantic import BaseModel, Field

DEFAULT_NU = 1.0 / np.pi


class SequenceGenerator(BaseModel):
    """Node/weight window description (mirrors scenarios.generate_sequence)."""

    kind: Literal["lattice", "perturbed", "decaying", "file"] = "lattice"
    half: int = 40
    delta: float = 0.2
    rate: float = 2.0
    nu: float = DEFAULT_NU
    calibrate: bool = False
    path: str | None = None

    def to_params(self) -> dict:
        out = self.model_dump()
        if out["path"] is None:
            out.pop("path")
        return out


class ComplexNumber(BaseModel):
    re: float
    im: float = 0.0

    def to_complex(self) -> complex:
        return complex(self.re, self.im)

    @classmethod
    def wrap(cls, z: complex) -> "ComplexNumber":
        return cls(re=float(np.real(z)), im=float(np.imag(z)))


class ThetaModel(BaseModel):
    """Inner function descriptor: exponential/Blaschke data or Clark origin."""

    kind: Literal["exp", "blaschke", "clark"] = "exp"
    exp_type: float = 2.0 * np.pi
    zeros: list[ComplexNumber] = Field(default_factory=list)
    sequence: SequenceGenerator | None = None
    pairing: bool = True
    compensate: bool = False


class FunctionDescriptor(BaseModel):
    """Named real-valued test function on the line."""

    kind: Literal["zero", "poisson", "bump", "bump_pair"] = "zero"
    height: float = 1.0
    center: float = 0.0
    width: float = 1.0
    separation: float = 1.2  # bump_pair: odd pair of bumps at +-separation


class ValidateRequest(BaseModel):
    lambdas: list[float] | None = None
    nus: list[float] | None = None
    generator: SequenceGenerator | None = None
    first_index: int = 0


class ValidateResponse(BaseModel):
    count: int
    delta: float
    discrepancy: float
    window: tuple[int, int]
    weight_mass: float
    was_sorted: bool
    nodes_csv: str


class ClarkEvalRequest(BaseModel):
    generator: SequenceGenerator = Field(default_factory=SequenceGenerator)
    pairing: bool = True
    compensate: bool = False
    points: list[ComplexNumber]


class ClarkEvalResponse(BaseModel):
    values: list[ComplexNumber]
    max_node_deviation: float
    herglotz_positive: bool
    spec_json: str


class GramRequest(BaseModel):
    theta: ThetaModel = Field(default_factory=ThetaModel)
    generator: SequenceGenerator = Field(default_factory=SequenceGenerator)
    outward: bool = False
    quadrature_check: bool = False


class GramResponse(BaseModel):
    size: int
    window: tuple[int, int]
    lambda_min: float
    lambda_max: float
    max_offdiagonal: float
    gram_csv: str
    quadrature_max_deviation: float | None = None


class RieszRequest(BaseModel):
    theta: ThetaModel = Field(default_factory=ThetaModel)
    generator: SequenceGenerator = Field(default_factory=SequenceGenerator)
    window_sizes: list[int] = Field(default_factory=lambda: [50, 100, 200])


class RieszResponse(BaseModel):
    window_sizes: list[int]
    lower: list[float]
    upper: list[float]
    bounds_csv: str


class AobRequest(BaseModel):
    theta: ThetaModel = Field(default_factory=ThetaModel)
    generator: SequenceGenerator = Field(default_factory=SequenceGenerator)
    tail_starts: list[int] = Field(default_factory=lambda: [0, 5, 10, 15, 20])


class AobResponse(BaseModel):
    tail_starts: list[int]
    lower: list[float]
    upper: list[float]
    verdict: dict
    tails_csv: str


class AngleRequest(BaseModel):
    theta: ThetaModel = Field(default_factory=ThetaModel)
    generator: SequenceGenerator = Field(default_factory=SequenceGenerator)
    tail_starts: list[int] = Field(default_factory=lambda: [5, 10, 20, 40])
    resolution: int | None = None


class AngleResponse(BaseModel):
    tail_starts: list[int]
    cosines: list[float]
    angles_csv: str


class SymbolModel(BaseModel):
    """Unimodular symbol generator.

    inner_pair: u = Theta conj(I) from a theta descriptor and a Clark
    sequence; synthesized: u = phi^n e^{i(c + a + b~)}; cayley_power:
    u = phi^k.
    """

    kind: Literal["inner_pair", "synthesized", "cayley_power"] = "inner_pair"
    theta: ThetaModel = Field(default_factory=ThetaModel)
    sequence: SequenceGenerator = Field(default_factory=SequenceGenerator)
    compensate: bool = True
    n: int = 0
    c: float = 0.0
    a: FunctionDescriptor = Field(default_factory=FunctionDescriptor)
    b: FunctionDescriptor = Field(default_factory=FunctionDescriptor)
    k: int = 1
    resolution: int = 4096


class ToeplitzRequest(BaseModel):
    symbol: SymbolModel = Field(default_factory=SymbolModel)
    sizes: list[int] = Field(default_factory=lambda: [64, 128, 256])
    tau: float = 0.1
    detector: Literal["invertibility", "unitary_plus_compact", "spectrum"] = "invertibility"
    include_trace: bool = False


class ToeplitzResponse(BaseModel):
    verdict: str | None
    evidence: dict
    winding: int | None
    spectrum_csv: str
    provenance: dict = Field(default_factory=dict)
    trace_csv: str | None = None


class HilbertRequest(BaseModel):
    function: FunctionDescriptor = Field(default_factory=lambda: FunctionDescriptor(kind="poisson"))
    grid_min: float = -6.0
    grid_max: float = 6.0
    n_grid: int = 121
    resolution: int = 4096


class HilbertResponse(BaseModel):
    grid: list[float]
    values: list[float]
    anchor_constant_check: float
    values_csv: str


class ScenarioRunRequest(BaseModel):
    params: dict = Field(default_factory=dict)
    seed: int | None = None


class ScenarioRunResponse(BaseModel):
    scenario: str
    passed: bool
    report: dict
    files: dict[str, str]


class ScenarioInfo(BaseModel):
    name: str
    description: str
    defaults: dict


class HealthResponse(BaseModel):
    status: str
    version: str
