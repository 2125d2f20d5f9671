"""Univariate skew polynomials over Q(t) with the commutation rule
D*t = t*D + 1 (D the derivation d/dt), and kernel computation for
matrices over this ring via Euclidean triangularization.

The ring is left and right Euclidean, so kernels fall out of column resp.
row reduction with exact division; no noncommutative Groebner machinery
is needed for the univariate case.
"""

from __future__ import annotations

from fractions import Fraction
from math import comb


class OreError(ValueError):
    pass


class QPoly:
    """Univariate polynomial over Q, dense coefficient list, index = power."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs):
        coeffs = [Fraction(c) for c in coeffs]
        while coeffs and not coeffs[-1]:
            coeffs.pop()
        self.coeffs = coeffs

    @classmethod
    def const(cls, c) -> "QPoly":
        return cls([Fraction(c)])

    @classmethod
    def t(cls) -> "QPoly":
        return cls([0, 1])

    def is_zero(self):
        return not self.coeffs

    @property
    def degree(self):
        return len(self.coeffs) - 1 if self.coeffs else -1

    def lc(self) -> Fraction:
        if not self.coeffs:
            raise OreError("zero polynomial has no leading coefficient")
        return self.coeffs[-1]

    def __add__(self, other):
        n = max(len(self.coeffs), len(other.coeffs))
        a = self.coeffs + [Fraction(0)] * (n - len(self.coeffs))
        b = other.coeffs + [Fraction(0)] * (n - len(other.coeffs))
        return QPoly([x + y for x, y in zip(a, b)])

    def __neg__(self):
        return QPoly([-c for c in self.coeffs])

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return QPoly([c * other for c in self.coeffs])
        if self.is_zero() or other.is_zero():
            return QPoly([])
        out = [Fraction(0)] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            for j, b in enumerate(other.coeffs):
                out[i + j] += a * b
        return QPoly(out)

    __rmul__ = __mul__

    def divmod(self, other: "QPoly") -> tuple["QPoly", "QPoly"]:
        if other.is_zero():
            raise OreError("division by zero polynomial")
        q = [Fraction(0)] * max(0, self.degree - other.degree + 1)
        r = list(self.coeffs)
        d, lc = other.degree, other.lc()
        while len(r) - 1 >= d and any(r):
            while r and not r[-1]:
                r.pop()
            if len(r) - 1 < d:
                break
            k = len(r) - 1 - d
            c = r[-1] / lc
            q[k] = c
            for i, b in enumerate(other.coeffs):
                r[k + i] -= c * b
        return QPoly(q), QPoly(r)

    def gcd(self, other: "QPoly") -> "QPoly":
        a, b = self, other
        while not b.is_zero():
            a, b = b, a.divmod(b)[1]
        if a.is_zero():
            return a
        return a * (Fraction(1) / a.lc())

    def derivative(self) -> "QPoly":
        return QPoly([i * c for i, c in enumerate(self.coeffs)][1:])

    def eval(self, x):
        acc = Fraction(0) if isinstance(x, (int, Fraction)) else 0.0
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def is_monomial(self) -> bool:
        return sum(1 for c in self.coeffs if c) == 1

    def __eq__(self, other):
        return isinstance(other, QPoly) and self.coeffs == other.coeffs

    def __hash__(self):
        return hash(tuple(self.coeffs))

    def __str__(self):
        from .parsing import format_coeff

        if self.is_zero():
            return "0"
        parts = []
        for i in range(self.degree, -1, -1):
            c = self.coeffs[i]
            if not c:
                continue
            mag = abs(c)
            if i == 0:
                body = format_coeff(mag)
            else:
                v = "t" if i == 1 else f"t^{i}"
                body = v if mag == 1 else f"{format_coeff(mag)}*{v}"
            if not parts:
                parts.append(body if c > 0 else f"-{body}")
            else:
                parts.append(f"+ {body}" if c > 0 else f"- {body}")
        return " ".join(parts)

    __repr__ = __str__


class RatFunc:
    """Rational function num/den over Q in t; den monic, gcd(num, den) = 1."""

    __slots__ = ("num", "den")

    def __init__(self, num: QPoly, den: QPoly | None = None):
        if den is None:
            den = QPoly.const(1)
        if den.is_zero():
            raise OreError("zero denominator")
        if num.is_zero():
            num, den = QPoly([]), QPoly.const(1)
        else:
            g = num.gcd(den)
            if g.degree > 0:
                num = num.divmod(g)[0]
                den = den.divmod(g)[0]
            lc = den.lc()
            num = num * (Fraction(1) / lc)
            den = den * (Fraction(1) / lc)
        self.num = num
        self.den = den

    @classmethod
    def const(cls, c) -> "RatFunc":
        return cls(QPoly.const(c))

    @classmethod
    def t(cls) -> "RatFunc":
        return cls(QPoly.t())

    def is_zero(self):
        return self.num.is_zero()

    def __add__(self, other):
        return RatFunc(self.num * other.den + other.num * self.den, self.den * other.den)

    def __neg__(self):
        return RatFunc(-self.num, self.den)

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return RatFunc(self.num * other, self.den)
        return RatFunc(self.num * other.num, self.den * other.den)

    __rmul__ = __mul__

    def inverse(self) -> "RatFunc":
        if self.is_zero():
            raise OreError("inverse of zero rational function")
        return RatFunc(self.den, self.num)

    def __truediv__(self, other):
        return self * other.inverse()

    def derivative(self) -> "RatFunc":
        return RatFunc(
            self.num.derivative() * self.den - self.num * self.den.derivative(),
            self.den * self.den,
        )

    def eval(self, x):
        d = self.den.eval(x)
        if d == 0:
            raise OreError(f"pole of rational function at t = {x}")
        return self.num.eval(x) / d

    def __eq__(self, other):
        return isinstance(other, RatFunc) and self.num == other.num and self.den == other.den

    def __hash__(self):
        return hash((self.num, self.den))

    def __str__(self):
        if self.den == QPoly.const(1):
            s = str(self.num)
            return s if ("+" not in s and "- " not in s) else f"({s})"
        return f"({self.num})/({self.den})"

    __repr__ = __str__


RF_ZERO = RatFunc(QPoly([]))
RF_ONE = RatFunc(QPoly.const(1))


class SkewPoly:
    """Element sum_i c_i(t) D^i of Q(t)<D>, coefficients RatFunc."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs):
        coeffs = list(coeffs)
        while coeffs and coeffs[-1].is_zero():
            coeffs.pop()
        self.coeffs = coeffs

    @classmethod
    def zero(cls) -> "SkewPoly":
        return cls([])

    @classmethod
    def one(cls) -> "SkewPoly":
        return cls([RF_ONE])

    @classmethod
    def d(cls) -> "SkewPoly":
        return cls([RF_ZERO, RF_ONE])

    @classmethod
    def from_rat(cls, r: RatFunc) -> "SkewPoly":
        return cls([r])

    @classmethod
    def const(cls, c) -> "SkewPoly":
        return cls([RatFunc.const(c)])

    def is_zero(self):
        return not self.coeffs

    @property
    def degree(self):
        return len(self.coeffs) - 1 if self.coeffs else -1

    def lc(self) -> RatFunc:
        if not self.coeffs:
            raise OreError("zero skew polynomial has no leading coefficient")
        return self.coeffs[-1]

    def __add__(self, other):
        n = max(len(self.coeffs), len(other.coeffs))
        a = self.coeffs + [RF_ZERO] * (n - len(self.coeffs))
        b = other.coeffs + [RF_ZERO] * (n - len(other.coeffs))
        return SkewPoly([x + y for x, y in zip(a, b)])

    def __neg__(self):
        return SkewPoly([-c for c in self.coeffs])

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        """Product respecting D r(t) = r(t) D + r'(t):
        (a D^i)(b D^j) = sum_k C(i,k) a b^(k) D^{i+j-k}."""
        if isinstance(other, (int, Fraction)):
            other = SkewPoly.const(other)
        if isinstance(other, RatFunc):
            other = SkewPoly.from_rat(other)
        if self.is_zero() or other.is_zero():
            return SkewPoly.zero()
        out = [RF_ZERO] * (self.degree + other.degree + 1)
        for i, a in enumerate(self.coeffs):
            if a.is_zero():
                continue
            for j, b in enumerate(other.coeffs):
                if b.is_zero():
                    continue
                bk = b
                for k in range(i + 1):
                    out[i + j - k] = out[i + j - k] + a * bk * comb(i, k)
                    if k < i:
                        bk = bk.derivative()
        return SkewPoly(out)

    def __rmul__(self, other):
        if isinstance(other, (int, Fraction)):
            return SkewPoly.const(other) * self
        if isinstance(other, RatFunc):
            return SkewPoly.from_rat(other) * self
        return NotImplemented

    def __pow__(self, n: int):
        result = SkewPoly.one()
        for _ in range(n):
            result = result * self
        return result

    def __eq__(self, other):
        return isinstance(other, SkewPoly) and self.coeffs == other.coeffs

    def __hash__(self):
        return hash(tuple(self.coeffs))

    def __str__(self):
        if self.is_zero():
            return "0"
        parts = []
        for i in range(self.degree, -1, -1):
            c = self.coeffs[i]
            if c.is_zero():
                continue
            d = "dt" if i == 1 else (f"dt^{i}" if i > 1 else "")
            cs = str(c)
            if not d:
                body = cs
            elif c == RF_ONE:
                body = d
            else:
                body = f"{cs}*{d}"
            parts.append(body)
        return " + ".join(parts)

    __repr__ = __str__


def right_div(a: SkewPoly, b: SkewPoly) -> tuple[SkewPoly, SkewPoly]:
    """Quotient and remainder with a = q*b + r and deg r < deg b."""
    if b.is_zero():
        raise OreError("skew division by zero")
    q = SkewPoly.zero()
    r = a
    blc = b.lc()
    while not r.is_zero() and r.degree >= b.degree:
        k = r.degree - b.degree
        # leading coefficient of D^k * b is blc (derivation twists only lower terms)
        term = SkewPoly([RF_ZERO] * k + [r.lc() / blc])
        q = q + term
        r = r - term * b
    return q, r


def left_div(a: SkewPoly, b: SkewPoly) -> tuple[SkewPoly, SkewPoly]:
    """Quotient and remainder with a = b*q + r and deg r < deg b."""
    if b.is_zero():
        raise OreError("skew division by zero")
    q = SkewPoly.zero()
    r = a
    while not r.is_zero() and r.degree >= b.degree:
        k = r.degree - b.degree
        # b * (c D^k) has leading coefficient lc(b) * c
        c = r.lc() / b.lc()
        term = SkewPoly([RF_ZERO] * k + [c])
        q = q + term
        r = r - b * term
    return q, r


class OreMatrix:
    """Matrix of skew polynomials."""

    def __init__(self, entries: list[list[SkewPoly]], ncols: int | None = None):
        self.entries = [list(row) for row in entries]
        self.nrows = len(self.entries)
        if self.nrows and self.entries[0]:
            self.ncols = len(self.entries[0])
        else:
            self.ncols = ncols or 0
        for row in self.entries:
            if len(row) != self.ncols:
                raise OreError("ragged ore matrix")

    @classmethod
    def identity(cls, n: int) -> "OreMatrix":
        return cls(
            [[SkewPoly.one() if i == j else SkewPoly.zero() for j in range(n)] for i in range(n)]
        )

    def __getitem__(self, ij):
        i, j = ij
        return self.entries[i][j]

    def __mul__(self, other: "OreMatrix") -> "OreMatrix":
        if self.ncols != other.nrows:
            raise OreError("shape mismatch in ore matrix product")
        rows = []
        for i in range(self.nrows):
            row = []
            for j in range(other.ncols):
                acc = SkewPoly.zero()
                for k in range(self.ncols):
                    acc = acc + self.entries[i][k] * other.entries[k][j]
                row.append(acc)
            rows.append(row)
        return OreMatrix(rows, ncols=other.ncols)

    def is_zero(self):
        return all(e.is_zero() for row in self.entries for e in row)

    @property
    def shape(self):
        return (self.nrows, self.ncols)

    def column(self, j):
        return [row[j] for row in self.entries]

    def to_strings(self):
        return [[str(e) for e in row] for row in self.entries]

    def __repr__(self):
        return f"OreMatrix({self.shape}, {self.to_strings()!r})"


def ore_right_kernel(A: OreMatrix) -> OreMatrix:
    """Columns generating {m : A m = 0}, by unimodular column reduction.

    Column operations multiply A on the right, so quotients come from
    left_div (divisor on the left); the transformation U with A U
    triangular is tracked and its columns over the zeroed part form the
    kernel.
    """
    work = [list(row) for row in A.entries]
    U = OreMatrix.identity(A.ncols)
    u = [list(row) for row in U.entries]
    active = list(range(A.ncols))

    def col_sub(j, p, q):
        # col_j -= col_p * q
        for r in range(len(work)):
            work[r][j] = work[r][j] - work[r][p] * q
        for r in range(len(u)):
            u[r][j] = u[r][j] - u[r][p] * q

    for row_idx in range(A.nrows):
        while True:
            nz = [c for c in active if not work[row_idx][c].is_zero()]
            if len(nz) <= 1:
                break
            p = min(nz, key=lambda c: work[row_idx][c].degree)
            for j in nz:
                if j == p:
                    continue
                q, _ = left_div(work[row_idx][j], work[row_idx][p])
                col_sub(j, p, q)
        nz = [c for c in active if not work[row_idx][c].is_zero()]
        if nz:
            active.remove(nz[0])

    cols = [[u[r][c] for r in range(A.ncols)] for c in active]
    rows = [[col[i] for col in cols] for i in range(A.ncols)]
    if not cols:
        return OreMatrix([[] for _ in range(A.ncols)], ncols=0)
    return OreMatrix(rows)


def ore_left_kernel(B: OreMatrix) -> OreMatrix:
    """Rows generating {m : m B = 0}, by unimodular row reduction."""
    if B.ncols == 0:
        return OreMatrix.identity(B.nrows)
    work = [list(row) for row in B.entries]
    u = [list(row) for row in OreMatrix.identity(B.nrows).entries]
    active = list(range(B.nrows))

    def row_sub(i, p, q):
        # row_i -= q * row_p
        for c in range(len(work[i])):
            work[i][c] = work[i][c] - q * work[p][c]
        for c in range(len(u[i])):
            u[i][c] = u[i][c] - q * u[p][c]

    for col_idx in range(B.ncols):
        while True:
            nz = [r for r in active if not work[r][col_idx].is_zero()]
            if len(nz) <= 1:
                break
            p = min(nz, key=lambda r: work[r][col_idx].degree)
            for i in nz:
                if i == p:
                    continue
                q, _ = right_div(work[i][col_idx], work[p][col_idx])
                row_sub(i, p, q)
        nz = [r for r in active if not work[r][col_idx].is_zero()]
        if nz:
            active.remove(nz[0])

    rows = [u[r] for r in active]
    return OreMatrix(rows, ncols=B.nrows)


def _hermite_rows(rows: list[list[SkewPoly]], ncols: int) -> list[list[SkewPoly]]:
    """Row echelon form over the skew ring (pivot entries are column gcds)."""
    pending = [list(r) for r in rows if any(not e.is_zero() for e in r)]
    result = []
    for col in range(ncols):
        cand = [r for r in pending if not r[col].is_zero()]
        rest = [r for r in pending if r[col].is_zero()]
        while len(cand) > 1:
            cand.sort(key=lambda r: r[col].degree)
            piv = cand[0]
            new_cand = [piv]
            for r in cand[1:]:
                q, _ = right_div(r[col], piv[col])
                nr = [a - q * b for a, b in zip(r, piv)]
                if not nr[col].is_zero():
                    new_cand.append(nr)
                elif any(not e.is_zero() for e in nr):
                    rest.append(nr)
            cand = new_cand
        if cand:
            result.append(cand[0])
        pending = rest
    return result


def ore_row_member(m: list[SkewPoly], rows: list[list[SkewPoly]], ncols: int) -> bool:
    """Decide membership of a row vector in the left row module of rows."""
    ech = _hermite_rows(rows, ncols)
    work = list(m)
    for col in range(ncols):
        if work[col].is_zero():
            continue
        piv = next((r for r in ech if all(e.is_zero() for e in r[:col]) and not r[col].is_zero()), None)
        if piv is None:
            return False
        q, rem = right_div(work[col], piv[col])
        if not rem.is_zero():
            return False
        work = [a - q * b for a, b in zip(work, piv)]
    return all(e.is_zero() for e in work)


def ore_row_module_equal(X: OreMatrix, Y: OreMatrix) -> bool:
    if X.ncols != Y.ncols:
        return False
    return all(ore_row_member(row, Y.entries, Y.ncols) for row in X.entries) and all(
        ore_row_member(row, X.entries, X.ncols) for row in Y.entries
    )


def ore_parametrization_report(A: OreMatrix):
    """B = rker(A), A1 = lker(B), and the row-module parametrizability test."""
    B = ore_right_kernel(A)
    A1 = ore_left_kernel(B)
    parametrizable = ore_row_module_equal(A1, A) if A1.nrows else A.nrows == 0
    return B, A1, parametrizable


class SkewBuilder:
    """Parser builder for the grammar extended with `t` and `dt`.

    Multiplication folds left to right, so written operator order is
    preserved under the commutation rule; division is right
    multiplication by the inverse of a zero-degree operator.
    """

    def const(self, n):
        return SkewPoly.const(n)

    def var(self, name, pos):
        from .parsing import ParseError

        if name == "t":
            return SkewPoly.from_rat(RatFunc.t())
        if name == "dt":
            return SkewPoly.d()
        raise ParseError(f"unknown symbol {name!r} (expected t or dt)", pos)

    def add(self, a, b):
        return a + b

    def sub(self, a, b):
        return a - b

    def mul(self, a, b):
        return a * b

    def div(self, a, b, pos):
        from .parsing import ParseError

        if b.degree != 0 or b.is_zero():
            raise ParseError("division only by nonzero rational functions of t", pos)
        return a * SkewPoly.from_rat(b.coeffs[0].inverse())

    def pow(self, a, n, pos):
        from .parsing import ParseError

        if n < 0:
            raise ParseError("negative exponent; use division instead", pos)
        return a**n

    def neg(self, a):
        return -a

    def exp(self, a, pos):
        from .parsing import ParseError

        raise ParseError("exp(...) not allowed in operator entries", pos)


def parse_skew(text: str) -> SkewPoly:
    from .parsing import ExprParser

    return ExprParser(text, SkewBuilder()).parse()


def parse_ore_matrix(rows: list[list[str]]) -> OreMatrix:
    from .parsing import ParseError

    entries = []
    for i, row in enumerate(rows):
        out_row = []
        for j, cell in enumerate(row):
            try:
                out_row.append(parse_skew(cell))
            except ParseError as exc:
                raise ParseError(f"matrix entry ({i},{j}): {exc}", exc.pos) from None
        entries.append(out_row)
    return OreMatrix(entries)
