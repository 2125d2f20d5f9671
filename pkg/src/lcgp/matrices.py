"""Operator matrices over a commutative ring context and the
kernel/parametrization pipeline: B = rker(A), A' = lker(B), and the
parametrizability decision with membership certificates.
"""

from __future__ import annotations

from dataclasses import dataclass

from .groebner import buchberger, module_equal, submodule_membership, syzygy_basis
from .rings import (
    DEFAULT_ORDER,
    ModuleElement,
    MonomialOrder,
    Polynomial,
    RingContext,
    RingError,
)


class OperatorMatrix:
    """Matrix of polynomials over one ring context; immutable."""

    def __init__(self, ctx: RingContext, entries: list[list[Polynomial]], ncols: int | None = None):
        self.ctx = ctx
        self.entries = [list(row) for row in entries]
        self.nrows = len(self.entries)
        if self.nrows:
            widths = {len(row) for row in self.entries}
            if len(widths) != 1:
                raise RingError("ragged operator matrix")
            self.ncols = widths.pop()
        else:
            self.ncols = ncols or 0
        for row in self.entries:
            for p in row:
                if p.ctx != ctx:
                    raise RingError("matrix entry from a different ring context")

    @classmethod
    def identity(cls, ctx: RingContext, n: int) -> "OperatorMatrix":
        one, zero = ctx.one(), ctx.zero()
        return cls(ctx, [[one if i == j else zero for j in range(n)] for i in range(n)])

    @classmethod
    def zero(cls, ctx: RingContext, nrows: int, ncols: int) -> "OperatorMatrix":
        z = ctx.zero()
        return cls(ctx, [[z] * ncols for _ in range(nrows)], ncols=ncols)

    @classmethod
    def from_columns(cls, ctx: RingContext, columns, nrows: int) -> "OperatorMatrix":
        cols = list(columns)
        rows = [[col[i] for col in cols] for i in range(nrows)]
        if not cols:
            return cls(ctx, [[] for _ in range(nrows)], ncols=0)
        return cls(ctx, rows)

    def __getitem__(self, ij):
        i, j = ij
        return self.entries[i][j]

    def row(self, i: int) -> list[Polynomial]:
        return list(self.entries[i])

    def column(self, j: int) -> list[Polynomial]:
        return [row[j] for row in self.entries]

    def rows_as_elements(self) -> list[ModuleElement]:
        return [ModuleElement.from_polys(self.row(i), self.ncols) for i in range(self.nrows)]

    def columns_as_elements(self) -> list[ModuleElement]:
        return [ModuleElement.from_polys(self.column(j), self.nrows) for j in range(self.ncols)]

    def transpose(self) -> "OperatorMatrix":
        rows = [[self.entries[i][j] for i in range(self.nrows)] for j in range(self.ncols)]
        out = OperatorMatrix(self.ctx, rows, ncols=self.nrows)
        out.ncols = self.nrows
        return out

    def __mul__(self, other: "OperatorMatrix") -> "OperatorMatrix":
        if self.ncols != other.nrows:
            raise RingError(f"shape mismatch: {self.shape} * {other.shape}")
        zero = self.ctx.zero()
        rows = []
        for i in range(self.nrows):
            row = []
            for j in range(other.ncols):
                acc = zero
                for k in range(self.ncols):
                    acc = acc + self.entries[i][k] * other.entries[k][j]
                row.append(acc)
            rows.append(row)
        return OperatorMatrix(self.ctx, rows, ncols=other.ncols)

    def __add__(self, other: "OperatorMatrix") -> "OperatorMatrix":
        if self.shape != other.shape:
            raise RingError(f"shape mismatch: {self.shape} + {other.shape}")
        rows = [
            [a + b for a, b in zip(ra, rb)] for ra, rb in zip(self.entries, other.entries)
        ]
        return OperatorMatrix(self.ctx, rows, ncols=self.ncols)

    def __neg__(self):
        return OperatorMatrix(self.ctx, [[-p for p in row] for row in self.entries], ncols=self.ncols)

    def __sub__(self, other):
        return self + (-other)

    def __eq__(self, other):
        if not isinstance(other, OperatorMatrix):
            return NotImplemented
        return self.ctx == other.ctx and self.shape == other.shape and self.entries == other.entries

    def is_zero(self) -> bool:
        return all(p.is_zero() for row in self.entries for p in row)

    @property
    def shape(self) -> tuple[int, int]:
        return (self.nrows, self.ncols)

    def to_strings(self) -> list[list[str]]:
        return [[str(p) for p in row] for row in self.entries]

    def __repr__(self):
        return f"OperatorMatrix({self.shape}, {self.to_strings()!r})"


@dataclass
class ParametrizationReport:
    """Outcome of the kernel pipeline for an operator matrix A."""

    A: OperatorMatrix
    B: OperatorMatrix
    A_prime: OperatorMatrix
    parametrizable: bool
    certificates: list[list[Polynomial]] | None = None


def right_kernel(A: OperatorMatrix, order: MonomialOrder = DEFAULT_ORDER) -> OperatorMatrix:
    """Matrix B whose columns generate {m in R^ncols : A m = 0}.

    The columns are the reduced Groebner basis of the syzygy module of A's
    columns, so the output is deterministic; zero columns never occur.
    """
    if A.nrows == 0:
        return OperatorMatrix.identity(A.ctx, A.ncols)
    syz = syzygy_basis(A.columns_as_elements(), order)
    if not syz:
        return OperatorMatrix.from_columns(A.ctx, [], A.ncols)
    reduced = buchberger(syz, order)
    columns = [g.components() for g in reduced]
    return OperatorMatrix.from_columns(A.ctx, columns, A.ncols)


def left_kernel(B: OperatorMatrix, order: MonomialOrder = DEFAULT_ORDER) -> OperatorMatrix:
    """Matrix A' whose rows generate {m in R^{1 x nrows} : m B = 0}.

    Right kernel of the transpose; valid because the ring is commutative.
    """
    if B.ncols == 0:
        return OperatorMatrix.identity(B.ctx, B.nrows)
    return right_kernel(B.transpose(), order).transpose()


def check_parametrizable(
    A: OperatorMatrix, order: MonomialOrder = DEFAULT_ORDER
) -> ParametrizationReport:
    """Run the full pipeline and decide whether sol(A) is parametrizable.

    sol(A) is parametrizable iff every row of A' = lker(rker(A)) lies in the
    row module of A; the converse inclusion holds automatically from AB = 0.
    """
    B = right_kernel(A, order)
    A_prime = left_kernel(B, order)
    a_rows = A.rows_as_elements()
    certificates = []
    parametrizable = True
    for row in A_prime.rows_as_elements():
        ok, cofactors = submodule_membership(row, a_rows, order)
        if not ok:
            parametrizable = False
            certificates = None
            break
        certificates.append(cofactors)
    return ParametrizationReport(A, B, A_prime, parametrizable, certificates)


def controllable_part(A: OperatorMatrix, order: MonomialOrder = DEFAULT_ORDER) -> OperatorMatrix:
    """Constraint matrix A' of the largest parametrizable subbehavior."""
    return left_kernel(right_kernel(A, order), order)


def column_module_equal(
    X: OperatorMatrix, Y: OperatorMatrix, order: MonomialOrder = DEFAULT_ORDER
) -> bool:
    if X.nrows != Y.nrows:
        return False
    return module_equal(X.columns_as_elements(), Y.columns_as_elements(), order)


def row_module_equal(
    X: OperatorMatrix, Y: OperatorMatrix, order: MonomialOrder = DEFAULT_ORDER
) -> bool:
    if X.ncols != Y.ncols:
        return False
    return module_equal(X.rows_as_elements(), Y.rows_as_elements(), order)
