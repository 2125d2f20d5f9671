"""Glue between problem specifications and the algebra/GP machinery.

Handles both ring kinds behind one interface: commutative polynomial
operator rings use the Groebner pipeline, the univariate Weyl algebra
uses Euclidean triangularization.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from . import gp, matrices, ore
from .matrices import OperatorMatrix
from .ore import OreMatrix
from .parsing import parse_matrix
from .rings import MonomialOrder, RingContext
from .schemas import (
    FitRequest,
    FitResponse,
    KernelSpec,
    ParametrizeResponse,
    PredictionRow,
    PredictResponse,
    ProblemSpec,
    PushforwardResponse,
    RingSpec,
)
from .symbolic import MatrixKernel, pushforward_covariance, se_kernel


def _parse_fraction(text: str) -> Fraction:
    return Fraction(text.strip())


def build_ring(spec: RingSpec) -> RingContext | None:
    if spec.type == "weyl":
        if spec.coordinates and spec.coordinates != ["t"]:
            raise ValueError("the weyl ring has the single coordinate t")
        return None
    generators = spec.generators or [f"d{i + 1}" for i in range(len(spec.coordinates))]
    semantics = spec.semantics or ["diff"] * len(generators)
    coordinates = spec.coordinates or [f"x{i + 1}" for i in range(len(generators))]
    return RingContext.make(generators, semantics=semantics, coordinates=coordinates)


def build_matrix(spec: RingSpec, rows: list[list[str]]):
    if spec.type == "weyl":
        return ore.parse_ore_matrix(rows)
    ctx = build_ring(spec)
    return OperatorMatrix(ctx, parse_matrix(rows, ctx))


def coordinates_of(spec: RingSpec) -> tuple[str, ...]:
    if spec.type == "weyl":
        return ("t",)
    ctx = build_ring(spec)
    return ctx.coordinates


def _order(name: str) -> MonomialOrder:
    return MonomialOrder(base=name)


@dataclass
class Parametrization:
    A: object
    B: object
    A_prime: object
    parametrizable: bool
    certificates: list | None = None


def parametrize(spec: RingSpec, rows: list[list[str]], order: str = "degrevlex") -> Parametrization:
    A = build_matrix(spec, rows)
    if spec.type == "weyl":
        B, A1, ok = ore.ore_parametrization_report(A)
        return Parametrization(A, B, A1, ok)
    report = matrices.check_parametrizable(A, _order(order))
    return Parametrization(A, report.B, report.A_prime, report.parametrizable, report.certificates)


def parametrize_response(spec: RingSpec, rows, order="degrevlex") -> ParametrizeResponse:
    p = parametrize(spec, rows, order)
    certs = None
    if p.certificates is not None:
        certs = [[str(c) for c in row] for row in p.certificates]
    return ParametrizeResponse(
        parametrizable=p.parametrizable,
        b_matrix=p.B.to_strings(),
        a_prime=p.A_prime.to_strings(),
        certificates=certs,
    )


def base_kernels(kernel: KernelSpec, coordinates, count: int):
    ls = _parse_fraction(kernel.lengthscale)
    var = _parse_fraction(kernel.variance)
    k = se_kernel(coordinates, ls, var)
    return [k] * count


def pushforward(
    spec: RingSpec,
    rows,
    kernel: KernelSpec,
    order="degrevlex",
    shift_step="1",
) -> tuple[Parametrization, MatrixKernel | None]:
    p = parametrize(spec, rows, order)
    if not p.parametrizable:
        return p, None
    coords = coordinates_of(spec)
    kernels = base_kernels(kernel, coords, p.B.ncols)
    K = pushforward_covariance(p.B, kernels, shift_step=_parse_fraction(shift_step))
    return p, K


def pushforward_response(spec, rows, kernel, order="degrevlex", shift_step="1") -> PushforwardResponse:
    p, K = pushforward(spec, rows, kernel, order, shift_step)
    return PushforwardResponse(
        parametrizable=p.parametrizable,
        b_matrix=p.B.to_strings(),
        a_prime=p.A_prime.to_strings(),
        covariance=K.to_strings() if K is not None else None,
    )


def _validate_components(problem: ProblemSpec, ncomponents: int):
    for kind, items in (("observation", problem.observations), ("query", problem.queries)):
        for item in items:
            if not 0 <= item.component < ncomponents:
                raise ValueError(
                    f"{kind} component {item.component} out of range for a "
                    f"system with {ncomponents} output components"
                )


def _dataset(problem: ProblemSpec) -> gp.Dataset:
    return gp.Dataset.from_triples(
        [(o.point, o.component, o.value) for o in problem.observations]
    )


def build_model(problem: ProblemSpec) -> tuple[Parametrization, gp.GPModel | None]:
    p, K = pushforward(
        problem.ring, problem.matrix, problem.kernel, problem.order, problem.shift_step
    )
    if K is None:
        return p, None
    _validate_components(problem, p.A.ncols)
    model = gp.GPModel(
        K,
        noise_var=problem.noise,
        jitter=problem.jitter,
        hyperparameters={
            "lengthscale": problem.kernel.lengthscale,
            "variance": problem.kernel.variance,
        },
    )
    return p, model


def predict_response(problem: ProblemSpec) -> PredictResponse:
    p, model = build_model(problem)
    if model is None:
        return PredictResponse(parametrizable=False, a_prime=p.A_prime.to_strings())
    data = _dataset(problem)
    queries = [(q.point, q.component) for q in problem.queries]
    rows = []
    if queries:
        mean, cov = gp.posterior(model, data, queries)
        std = np.sqrt(np.clip(np.diag(cov), 0.0, None))
        for q, m, s in zip(problem.queries, mean, std):
            rows.append(
                PredictionRow(point=q.point, component=q.component, mean=float(m), std=float(s))
            )
    return PredictResponse(
        parametrizable=True, a_prime=p.A_prime.to_strings(), rows=rows
    )


def fit_response(request: FitRequest) -> FitResponse:
    problem = request.problem
    p = parametrize(problem.ring, problem.matrix, problem.order)
    if not p.parametrizable:
        return FitResponse(parametrizable=False)
    _validate_components(problem, p.A.ncols)
    coords = coordinates_of(problem.ring)
    step = _parse_fraction(problem.shift_step)
    ncols = p.B.ncols

    def builder(ls, var):
        k = se_kernel(coords, _parse_fraction(ls), _parse_fraction(var))
        return pushforward_covariance(p.B, [k] * ncols, shift_step=step)

    data = _dataset(problem)
    model = gp.fit_hyperparameters(
        builder,
        data,
        lengthscales=request.lengthscales,
        variances=request.variances,
        noise_vars=request.noise_vars,
        jitter=problem.jitter,
    )
    hp = model.hyperparameters
    return FitResponse(
        parametrizable=True,
        lengthscale=hp["lengthscale"],
        variance=hp["variance"],
        noise_var=hp["noise_var"],
        log_marginal_likelihood=hp["log_marginal_likelihood"],
    )
