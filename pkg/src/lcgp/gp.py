"""Multi-output GP conditioning with per-component observations.

Observations are (point, output component, value) triples, so a model can
be conditioned on individual components (e.g. pin one current component
and the flux while predicting the magnetic field).  The mean function is
identically zero; constraints are carried entirely by the covariance.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np
from scipy.linalg import cho_factor, cho_solve

from .symbolic import CompiledMatrixKernel, MatrixKernel, compile_evaluator


class FactorizationError(RuntimeError):
    """Cholesky failed even after jitter escalation."""


DEFAULT_NOISE_VAR = 1e-6
JITTER_SCALE = 1e-8
JITTER_RETRIES = 8


@dataclass
class Dataset:
    """Observations (x_i, c_i, y_i): value of output component c_i at x_i."""

    points: np.ndarray      # (n, d)
    components: np.ndarray  # (n,) ints
    values: np.ndarray      # (n,)

    @classmethod
    def from_triples(cls, triples) -> "Dataset":
        pts, comps, vals = [], [], []
        for p, c, v in triples:
            pts.append(np.atleast_1d(np.asarray(p, dtype=float)))
            comps.append(int(c))
            vals.append(float(v))
        if pts:
            points = np.stack(pts)
        else:
            points = np.zeros((0, 1))
        values = np.asarray(vals, dtype=float)
        if not np.all(np.isfinite(points)) or not np.all(np.isfinite(values)):
            raise ValueError("observations must be finite")
        return cls(points, np.asarray(comps, dtype=int), values)

    def __len__(self):
        return len(self.values)


@dataclass
class GPModel:
    """Matrix covariance plus noise/jitter policy; read-only once built."""

    kernel: MatrixKernel
    noise_var: float = DEFAULT_NOISE_VAR
    jitter: float | None = None  # None: JITTER_SCALE * mean Gram diagonal
    hyperparameters: dict = field(default_factory=dict)
    _compiled: CompiledMatrixKernel | None = field(default=None, repr=False)

    @property
    def compiled(self) -> CompiledMatrixKernel:
        if self._compiled is None:
            self._compiled = compile_evaluator(self.kernel)
        return self._compiled


def cross_covariance(
    compiled: CompiledMatrixKernel,
    P1: np.ndarray,
    c1: np.ndarray,
    P2: np.ndarray,
    c2: np.ndarray,
) -> np.ndarray:
    """Dense covariance block between two (point, component) lists."""
    n, m = len(c1), len(c2)
    out = np.zeros((n, m))
    c1 = np.asarray(c1)
    c2 = np.asarray(c2)
    for i in np.unique(c1):
        ridx = np.nonzero(c1 == i)[0]
        for j in np.unique(c2):
            cidx = np.nonzero(c2 == j)[0]
            ru, cu = np.meshgrid(ridx, cidx, indexing="ij")
            Xu = P1[ru.ravel()]
            Xp = P2[cu.ravel()]
            out[ru.ravel(), cu.ravel()] = compiled.pairwise(int(i), int(j), Xu, Xp)
    return out


def gram(model: GPModel, data: Dataset) -> np.ndarray:
    """Observation Gram matrix with noise variance on the diagonal."""
    G = cross_covariance(model.compiled, data.points, data.components, data.points, data.components)
    G = 0.5 * (G + G.T)
    return G + model.noise_var * np.eye(len(data))


def _factor(model: GPModel, G: np.ndarray):
    """Cholesky with escalating jitter; returns (factor, jitter used)."""
    n = G.shape[0]
    base = model.jitter
    if base is None:
        mean_diag = float(np.trace(G)) / max(n, 1)
        base = JITTER_SCALE * max(mean_diag, 1.0)
    jit = 0.0
    last_exc = None
    for attempt in range(JITTER_RETRIES + 1):
        try:
            return cho_factor(G + jit * np.eye(n), lower=True), jit
        except np.linalg.LinAlgError as exc:  # pragma: no cover - scipy raises LinAlgError
            last_exc = exc
        except Exception as exc:
            last_exc = exc
        jit = base if jit == 0.0 else 2.0 * jit
    raise FactorizationError(
        f"Cholesky failed after {JITTER_RETRIES} jitter retries "
        f"(min diagonal {np.min(np.diag(G)):.3e}): {last_exc}"
    )


def posterior(
    model: GPModel, data: Dataset, queries: Sequence[tuple]
) -> tuple[np.ndarray, np.ndarray]:
    """Posterior mean and covariance at (point, component) queries."""
    qpts = np.stack([np.atleast_1d(np.asarray(p, dtype=float)) for p, _ in queries])
    qcomp = np.asarray([int(c) for _, c in queries])
    Kqq = cross_covariance(model.compiled, qpts, qcomp, qpts, qcomp)
    if len(data) == 0:
        return np.zeros(len(queries)), 0.5 * (Kqq + Kqq.T)
    G = gram(model, data)
    factor, _ = _factor(model, G)
    KqX = cross_covariance(model.compiled, qpts, qcomp, data.points, data.components)
    alpha = cho_solve(factor, data.values)
    mean = KqX @ alpha
    cov = Kqq - KqX @ cho_solve(factor, KqX.T)
    return mean, 0.5 * (cov + cov.T)


def posterior_mean_function(model: GPModel, data: Dataset):
    """Callable mean(points, component) usable on dense evaluation grids."""
    G = gram(model, data)
    factor, _ = _factor(model, G)
    alpha = cho_solve(factor, data.values)
    compiled = model.compiled

    def mean(points, component: int):
        points = np.atleast_2d(np.asarray(points, dtype=float))
        comps = np.full(len(points), component)
        KqX = cross_covariance(compiled, points, comps, data.points, data.components)
        return KqX @ alpha

    return mean


def log_marginal_likelihood(model: GPModel, data: Dataset) -> float:
    """-1/2 y^T G^-1 y - 1/2 log det G - n/2 log 2 pi."""
    n = len(data)
    if n == 0:
        return 0.0
    G = gram(model, data)
    factor, jit = _factor(model, G)
    L = factor[0]
    alpha = cho_solve(factor, data.values)
    logdet = 2.0 * float(np.sum(np.log(np.diag(L))))
    return float(-0.5 * data.values @ alpha - 0.5 * logdet - 0.5 * n * np.log(2.0 * np.pi))


def fit_hyperparameters(
    kernel_builder,
    data: Dataset,
    lengthscales: Sequence,
    variances: Sequence = (1,),
    noise_vars: Sequence[float] = (DEFAULT_NOISE_VAR,),
    jitter: float | None = None,
) -> GPModel:
    """Grid search maximizing the log marginal likelihood.

    ``kernel_builder(lengthscale, variance)`` must return a MatrixKernel.
    Ties break to the earliest candidate in grid order, so the result is
    deterministic; with no data the first candidate wins.
    """
    best = None
    for ls in lengthscales:
        for var in variances:
            kernel = kernel_builder(ls, var)
            for nv in noise_vars:
                model = GPModel(
                    kernel,
                    noise_var=float(nv),
                    jitter=jitter,
                    hyperparameters={"lengthscale": ls, "variance": var, "noise_var": float(nv)},
                )
                lml = log_marginal_likelihood(model, data)
                if best is None or lml > best[0]:
                    best = (lml, model)
    if best is None:
        raise ValueError("empty hyperparameter grid")
    best[1].hyperparameters["log_marginal_likelihood"] = best[0]
    return best[1]
