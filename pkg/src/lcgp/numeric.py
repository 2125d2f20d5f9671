"""Finite-difference application of operator matrices to numeric fields.

Used to verify that posterior mean fields satisfy the constraints: apply
A to the mean on a grid of points and measure the residual.  Derivative
generators use central differences; multiplication and shift generators
act exactly.
"""

from __future__ import annotations

import numpy as np

from .matrices import OperatorMatrix
from .rings import DIFF, MULT, SHIFT


def _apply_monomial(fn, mono, ctx, h, shift_step):
    """Compose the actions of a single operator monomial onto fn(points)."""
    for gi, e in enumerate(mono):
        sem = ctx.semantics[gi]
        for _ in range(e):
            fn = _single_action(fn, gi, sem, h, shift_step)
    return fn


def _single_action(fn, coord, sem, h, shift_step):
    if sem == DIFF:
        def dfn(P, fn=fn, coord=coord):
            Pp = P.copy()
            Pp[:, coord] += h
            Pm = P.copy()
            Pm[:, coord] -= h
            return (fn(Pp) - fn(Pm)) / (2.0 * h)

        return dfn
    if sem == MULT:
        return lambda P, fn=fn, coord=coord: P[:, coord] * fn(P)
    if sem == SHIFT:
        def sfn(P, fn=fn, coord=coord):
            Pp = P.copy()
            Pp[:, coord] += shift_step
            return fn(Pp)

        return sfn
    raise ValueError(f"unsupported semantics {sem!r}")  # pragma: no cover


def apply_matrix_numeric(
    A: OperatorMatrix,
    component_fns,
    points: np.ndarray,
    h: float = 1e-3,
    shift_step: float = 1.0,
) -> np.ndarray:
    """Evaluate (A f)(points) for f given componentwise as callables.

    ``component_fns[j]`` maps an (n, d) point array to the j-th component
    values.  Returns an array of shape (A.nrows, n).
    """
    points = np.asarray(points, dtype=float)
    out = np.zeros((A.nrows, len(points)))
    for i in range(A.nrows):
        acc = np.zeros(len(points))
        for j in range(A.ncols):
            entry = A[i, j]
            for mono, c in entry.terms.items():
                fn = _apply_monomial(component_fns[j], mono, A.ctx, h, shift_step)
                acc = acc + float(c) * fn(points.copy())
        out[i] = acc
    return out


def constraint_residual(
    A: OperatorMatrix,
    mean_fn,
    points: np.ndarray,
    h: float = 1e-3,
    shift_step: float = 1.0,
) -> float:
    """Max |A mean| over the grid, relative to the field's max magnitude.

    ``mean_fn(points, component)`` evaluates the posterior mean.
    """
    fns = [
        (lambda P, j=j: np.asarray(mean_fn(P, j), dtype=float)) for j in range(A.ncols)
    ]
    residual = apply_matrix_numeric(A, fns, points, h=h, shift_step=shift_step)
    scale = max(float(np.max(np.abs(fn(np.asarray(points, dtype=float))))) for fn in fns)
    return float(np.max(np.abs(residual))) / max(scale, 1e-30)
