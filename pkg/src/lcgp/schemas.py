"""Pydantic request/response models shared by the service, the CLI client,
and the problem-file loader."""

from __future__ import annotations

from typing import Literal, Optional

from pydantic import BaseModel, Field, field_validator


class RingSpec(BaseModel):
    """Operator ring declaration.

    ``poly``: commutative polynomial ring with one generator per
    coordinate, each acting by differentiation, coordinate multiplication,
    or argument shift.  ``weyl``: univariate Q(t)<dt> with dt*t = t*dt + 1.
    """

    type: Literal["poly", "weyl"] = "poly"
    generators: list[str] = Field(default_factory=list)
    semantics: list[Literal["diff", "mult", "shift"]] = Field(default_factory=list)
    coordinates: list[str] = Field(default_factory=list)

    @field_validator("generators")
    @classmethod
    def _unique(cls, v):
        if len(set(v)) != len(v):
            raise ValueError("generator names must be unique")
        return v


class KernelSpec(BaseModel):
    """Base kernel for the parametrizing components; hyperparameters are
    rational strings so they survive the exact symbolic pushforward."""

    family: Literal["se"] = "se"
    lengthscale: str = "1"
    variance: str = "1"


class Observation(BaseModel):
    point: list[float]
    component: int
    value: float


class Query(BaseModel):
    point: list[float]
    component: int


class ProblemSpec(BaseModel):
    """A complete problem: ring, constraint matrix, kernel, data, queries."""

    ring: RingSpec
    matrix: list[list[str]]
    kernel: KernelSpec = Field(default_factory=KernelSpec)
    noise: float = 1e-6
    jitter: Optional[float] = None
    order: Literal["degrevlex", "lex"] = "degrevlex"
    shift_step: str = "1"
    observations: list[Observation] = Field(default_factory=list)
    queries: list[Query] = Field(default_factory=list)


class ParametrizeRequest(BaseModel):
    ring: RingSpec
    matrix: list[list[str]]
    order: Literal["degrevlex", "lex"] = "degrevlex"


class ParametrizeResponse(BaseModel):
    parametrizable: bool
    b_matrix: list[list[str]]
    a_prime: list[list[str]]
    certificates: Optional[list[list[str]]] = None


class PushforwardRequest(BaseModel):
    ring: RingSpec
    matrix: list[list[str]]
    kernel: KernelSpec = Field(default_factory=KernelSpec)
    order: Literal["degrevlex", "lex"] = "degrevlex"
    shift_step: str = "1"


class PushforwardResponse(BaseModel):
    parametrizable: bool
    b_matrix: list[list[str]]
    a_prime: list[list[str]]
    covariance: Optional[list[list[str]]] = None


class PredictResponse(BaseModel):
    parametrizable: bool
    a_prime: list[list[str]]
    rows: list["PredictionRow"] = Field(default_factory=list)


class PredictionRow(BaseModel):
    point: list[float]
    component: int
    mean: float
    std: float


class FitRequest(BaseModel):
    problem: ProblemSpec
    lengthscales: list[str] = Field(default_factory=lambda: ["1/4", "1/2", "1", "2", "4"])
    variances: list[str] = Field(default_factory=lambda: ["1"])
    noise_vars: list[float] = Field(default_factory=lambda: [1e-6])


class FitResponse(BaseModel):
    parametrizable: bool
    lengthscale: Optional[str] = None
    variance: Optional[str] = None
    noise_var: Optional[float] = None
    log_marginal_likelihood: Optional[float] = None


PredictResponse.model_rebuild()
