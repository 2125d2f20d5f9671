"""Symbolic covariance engine.

A :class:`KernelExpr` is a canonical sum of terms

    coeff * x^e * exp(p(x))

where x ranges over the 2d covariance variables (d unprimed coordinates
followed by their primed copies), the exponent vector e may contain
negative entries (monomial denominators such as 1/t^3), and p is a
polynomial with rational coefficients.  This class of expressions is
closed under all operator semantics in scope: differentiation,
multiplication by a coordinate, and argument shifts.  Structural equality
of the canonical form decides expression equality.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .ore import OreError, OreMatrix, SkewPoly
from .rings import DIFF, MULT, SHIFT, Polynomial, RingError

Mono = tuple[int, ...]
ExpKey = tuple[tuple[Mono, Fraction], ...]


class KernelError(ValueError):
    pass


def _poly_key(terms: dict[Mono, Fraction]) -> ExpKey:
    return tuple(sorted((m, c) for m, c in terms.items() if c))


def _poly_add(a: dict, b: dict) -> dict:
    out = dict(a)
    for m, c in b.items():
        s = out.get(m, Fraction(0)) + c
        if s:
            out[m] = s
        else:
            out.pop(m, None)
    return out


class KernelExpr:
    """Canonical symbolic expression; see module docstring.

    ``coordinates`` are the unprimed coordinate names; the variable space
    has 2*d slots, slot i for coordinate i and slot d+i for its primed
    copy.
    """

    __slots__ = ("coordinates", "terms")

    def __init__(self, coordinates: tuple[str, ...], terms: dict[tuple[Mono, ExpKey], Fraction]):
        self.coordinates = tuple(coordinates)
        self.terms = {k: c for k, c in terms.items() if c}

    # -- constructors ---------------------------------------------------------

    @classmethod
    def zero(cls, coordinates) -> "KernelExpr":
        return cls(coordinates, {})

    @classmethod
    def const(cls, coordinates, c) -> "KernelExpr":
        c = Fraction(c)
        nv = 2 * len(coordinates)
        return cls(coordinates, {((0,) * nv, ()): c} if c else {})

    @classmethod
    def var(cls, coordinates, slot: int) -> "KernelExpr":
        nv = 2 * len(coordinates)
        mono = tuple(1 if i == slot else 0 for i in range(nv))
        return cls(coordinates, {(mono, ()): Fraction(1)})

    @property
    def nvars(self) -> int:
        return 2 * len(self.coordinates)

    def var_names(self) -> list[str]:
        return list(self.coordinates) + [c + "'" for c in self.coordinates]

    def _check(self, other: "KernelExpr"):
        if self.coordinates != other.coordinates:
            raise KernelError("kernel expressions over different coordinates")

    def is_zero(self) -> bool:
        return not self.terms

    # -- arithmetic -----------------------------------------------------------

    def __add__(self, other):
        if isinstance(other, (int, Fraction)):
            other = KernelExpr.const(self.coordinates, other)
        self._check(other)
        terms = dict(self.terms)
        for k, c in other.terms.items():
            s = terms.get(k, Fraction(0)) + c
            if s:
                terms[k] = s
            else:
                terms.pop(k, None)
        return KernelExpr(self.coordinates, terms)

    __radd__ = __add__

    def __neg__(self):
        return KernelExpr(self.coordinates, {k: -c for k, c in self.terms.items()})

    def __sub__(self, other):
        if isinstance(other, (int, Fraction)):
            other = KernelExpr.const(self.coordinates, other)
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            c = Fraction(other)
            return KernelExpr(self.coordinates, {k: c * v for k, v in self.terms.items()})
        self._check(other)
        terms: dict[tuple[Mono, ExpKey], Fraction] = {}
        for (m1, e1), c1 in self.terms.items():
            p1 = dict(e1)
            for (m2, e2), c2 in other.terms.items():
                mono = tuple(a + b for a, b in zip(m1, m2))
                key = (mono, _poly_key(_poly_add(p1, dict(e2))))
                s = terms.get(key, Fraction(0)) + c1 * c2
                if s:
                    terms[key] = s
                else:
                    terms.pop(key, None)
        return KernelExpr(self.coordinates, terms)

    __rmul__ = __mul__

    def __eq__(self, other):
        if not isinstance(other, KernelExpr):
            return NotImplemented
        return self.coordinates == other.coordinates and self.terms == other.terms

    def __hash__(self):
        return hash((self.coordinates, frozenset(self.terms.items())))

    # -- operator actions -----------------------------------------------------

    def diff(self, slot: int) -> "KernelExpr":
        """Partial derivative with respect to variable slot."""
        terms: dict[tuple[Mono, ExpKey], Fraction] = {}
        for (mono, ekey), c in self.terms.items():
            e = mono[slot]
            if e:
                m2 = tuple(v - 1 if i == slot else v for i, v in enumerate(mono))
                key = (m2, ekey)
                s = terms.get(key, Fraction(0)) + c * e
                if s:
                    terms[key] = s
                else:
                    terms.pop(key, None)
            # chain rule through the exp factor
            dp = {}
            for pm, pc in ekey:
                pe = pm[slot]
                if pe:
                    pm2 = tuple(v - 1 if i == slot else v for i, v in enumerate(pm))
                    dp[pm2] = dp.get(pm2, Fraction(0)) + pc * pe
            for pm2, pc in dp.items():
                if not pc:
                    continue
                m2 = tuple(a + b for a, b in zip(mono, pm2))
                key = (m2, ekey)
                s = terms.get(key, Fraction(0)) + c * pc
                if s:
                    terms[key] = s
                else:
                    terms.pop(key, None)
        return KernelExpr(self.coordinates, terms)

    def mul_var(self, slot: int) -> "KernelExpr":
        terms = {}
        for (mono, ekey), c in self.terms.items():
            m2 = tuple(v + 1 if i == slot else v for i, v in enumerate(mono))
            terms[(m2, ekey)] = c
        return KernelExpr(self.coordinates, terms)

    def shift(self, slot: int, step=Fraction(1)) -> "KernelExpr":
        """Substitute variable slot -> slot + step."""
        step = Fraction(step)
        out = KernelExpr.zero(self.coordinates)
        for (mono, ekey), c in self.terms.items():
            e = mono[slot]
            if e < 0:
                raise KernelError("argument shift through a denominator is unsupported")
            base_mono = tuple(0 if i == slot else v for i, v in enumerate(mono))
            # expand (x+step)^e
            poly = {}
            for k in range(e + 1):
                poly[k] = Fraction(math.comb(e, k)) * step ** (e - k)
            shifted_arg = {}
            for pm, pc in ekey:
                pe = pm[slot]
                pm_base = tuple(0 if i == slot else v for i, v in enumerate(pm))
                for k in range(pe + 1):
                    coeff = pc * Fraction(math.comb(pe, k)) * step ** (pe - k)
                    m2 = tuple(v + (k if i == slot else 0) for i, v in enumerate(pm_base))
                    shifted_arg[m2] = shifted_arg.get(m2, Fraction(0)) + coeff
            new_ekey = _poly_key(shifted_arg)
            for k, pk in poly.items():
                if not pk:
                    continue
                m2 = tuple(v + (k if i == slot else 0) for i, v in enumerate(base_mono))
                out = out + KernelExpr(self.coordinates, {(m2, new_ekey): c * pk})
        return out

    def div_mono(self, slot: int, power: int) -> "KernelExpr":
        """Divide by variable slot raised to the given power."""
        terms = {}
        for (mono, ekey), c in self.terms.items():
            m2 = tuple(v - power if i == slot else v for i, v in enumerate(mono))
            terms[(m2, ekey)] = c
        return KernelExpr(self.coordinates, terms)

    def swap_primed(self) -> "KernelExpr":
        """Exchange every unprimed variable with its primed copy."""
        d = len(self.coordinates)

        def sw(m: Mono) -> Mono:
            return tuple(m[d:]) + tuple(m[:d])

        terms = {}
        for (mono, ekey), c in self.terms.items():
            terms[(sw(mono), _poly_key({sw(pm): pc for pm, pc in ekey}))] = c
        return KernelExpr(self.coordinates, terms)

    # -- evaluation -----------------------------------------------------------

    def exact_groups(self, point) -> dict[Fraction, Fraction]:
        """Evaluate at a rational point, grouping as {exp argument: rational factor}.

        The value of the expression is sum over groups of factor * e^arg.
        """
        point = [Fraction(p) for p in point]
        groups: dict[Fraction, Fraction] = {}
        for (mono, ekey), c in self.terms.items():
            val = c
            for x, e in zip(point, mono):
                if e == 0:
                    continue
                if x == 0 and e < 0:
                    raise KernelError("pole: evaluation point hits a denominator zero")
                val *= x**e
            arg = Fraction(0)
            for pm, pc in ekey:
                t = pc
                for x, e in zip(point, pm):
                    if e:
                        t *= x**e
                arg += t
            groups[arg] = groups.get(arg, Fraction(0)) + val
        return {a: v for a, v in groups.items() if v}

    def evaluate(self, point) -> float:
        pt = [float(p) for p in point]
        total = 0.0
        for (mono, ekey), c in self.terms.items():
            val = float(c)
            for x, e in zip(pt, mono):
                if e:
                    if x == 0.0 and e < 0:
                        raise KernelError("pole: evaluation point hits a denominator zero")
                    val *= x**e
            arg = 0.0
            for pm, pc in ekey:
                t = float(pc)
                for x, e in zip(pt, pm):
                    if e:
                        t *= x**e
                arg += t
            total += val * math.exp(arg)
        return total

    # -- printing -------------------------------------------------------------

    def __str__(self):
        from .parsing import format_coeff

        if not self.terms:
            return "0"
        names = self.var_names()

        def poly_str(ekey: ExpKey) -> str:
            parts = []
            for pm, pc in sorted(ekey, key=lambda it: (sum(it[0]), it[0]), reverse=True):
                mag = abs(pc)
                factors = [
                    (names[i] if e == 1 else f"{names[i]}^{e}")
                    for i, e in enumerate(pm)
                    if e
                ]
                body = "*".join(([format_coeff(mag)] if (mag != 1 or not factors) else []) + factors)
                if not parts:
                    parts.append(body if pc > 0 else f"-{body}")
                else:
                    parts.append(f"+ {body}" if pc > 0 else f"- {body}")
            return " ".join(parts) if parts else "0"

        parts = []
        for (mono, ekey) in sorted(self.terms, key=lambda k: (sum(k[0]), k[0], k[1]), reverse=True):
            c = self.terms[(mono, ekey)]
            mag = abs(c)
            num = [
                (names[i] if e == 1 else f"{names[i]}^{e}") for i, e in enumerate(mono) if e > 0
            ]
            den = [
                (names[i] if e == -1 else f"{names[i]}^{-e}") for i, e in enumerate(mono) if e < 0
            ]
            factors = []
            if mag != 1 or not (num or ekey):
                factors.append(format_coeff(mag))
            factors.extend(num)
            body = "*".join(factors)
            if den:
                body = (body or "1") + f"/({'*'.join(den)})"
            if ekey:
                body = f"{body}*exp({poly_str(ekey)})" if body else f"exp({poly_str(ekey)})"
            body = body or "1"
            if not parts:
                parts.append(body if c > 0 else f"-{body}")
            else:
                parts.append(f"+ {body}" if c > 0 else f"- {body}")
        return " ".join(parts)

    def __repr__(self):
        return f"KernelExpr({str(self)!r})"


class KernelBuilder:
    """Parser builder producing :class:`KernelExpr` values."""

    def __init__(self, coordinates):
        self.coordinates = tuple(coordinates)
        names = list(self.coordinates) + [c + "'" for c in self.coordinates]
        self.slots = {n: i for i, n in enumerate(names)}

    def const(self, n):
        return KernelExpr.const(self.coordinates, n)

    def var(self, name, pos):
        from .parsing import ParseError

        if name not in self.slots:
            raise ParseError(f"unknown variable {name!r}", pos)
        return KernelExpr.var(self.coordinates, self.slots[name])

    def add(self, a, b):
        return a + b

    def sub(self, a, b):
        return a - b

    def mul(self, a, b):
        return a * b

    def div(self, a, b, pos):
        from .parsing import ParseError

        if len(b.terms) != 1:
            raise ParseError("division only by a single monomial term", pos)
        (mono, ekey), c = next(iter(b.terms.items()))
        if ekey:
            raise ParseError("division by exp factors is unsupported", pos)
        inv_mono = tuple(-e for e in mono)
        inv = KernelExpr(a.coordinates, {(inv_mono, ()): Fraction(1) / c})
        return a * inv

    def pow(self, a, n, pos):
        from .parsing import ParseError

        if n < 0:
            raise ParseError("negative exponent; use division instead", pos)
        out = KernelExpr.const(self.coordinates, 1)
        for _ in range(n):
            out = out * a
        return out

    def neg(self, a):
        return -a

    def exp(self, a, pos):
        from .parsing import ParseError

        arg = {}
        for (mono, ekey), c in a.terms.items():
            if ekey or any(e < 0 for e in mono):
                raise ParseError("exp argument must be a polynomial", pos)
            arg[mono] = c
        nv = 2 * len(self.coordinates)
        return KernelExpr(self.coordinates, {((0,) * nv, _poly_key(arg)): Fraction(1)})


def parse_kernel_expr(text: str, coordinates) -> KernelExpr:
    from .parsing import ExprParser

    return ExprParser(text, KernelBuilder(coordinates)).parse()


def se_kernel(coordinates, lengthscale=1, variance=1) -> KernelExpr:
    """Squared exponential kernel variance * exp(-|x - x'|^2 / (2 l^2))."""
    lengthscale = Fraction(lengthscale)
    variance = Fraction(variance)
    if lengthscale <= 0 or variance <= 0:
        raise KernelError("lengthscale and variance must be positive")
    coordinates = tuple(coordinates)
    d = len(coordinates)
    nv = 2 * d
    arg: dict[Mono, Fraction] = {}
    s = Fraction(-1, 2) / (lengthscale * lengthscale)
    for i in range(d):
        for (a, b), c in (((i, i), s), ((d + i, d + i), s), ((i, d + i), -2 * s)):
            mono = tuple((1 if j == a else 0) + (1 if j == b else 0) for j in range(nv))
            arg[mono] = arg.get(mono, Fraction(0)) + c
    return KernelExpr(coordinates, {((0,) * nv, _poly_key(arg)): variance})


# -- operator application -----------------------------------------------------


def apply_operator(expr: KernelExpr, op: Polynomial, side: str, shift_step=Fraction(1)) -> KernelExpr:
    """Apply the operator polynomial on the unprimed or primed argument.

    Each generator acts per its declared semantics: differentiate,
    multiply by the paired coordinate, or translate it by ``shift_step``.
    """
    if side not in ("unprimed", "primed"):
        raise KernelError(f"side must be unprimed or primed, got {side!r}")
    ctx = op.ctx
    if len(ctx.coordinates) != len(expr.coordinates):
        raise KernelError("operator ring and kernel expression dimensions differ")
    d = len(expr.coordinates)
    offset = 0 if side == "unprimed" else d
    out = KernelExpr.zero(expr.coordinates)
    for mono, c in op.terms.items():
        cur = expr * c
        for gi, e in enumerate(mono):
            slot = offset + gi
            sem = ctx.semantics[gi]
            for _ in range(e):
                if sem == DIFF:
                    cur = cur.diff(slot)
                elif sem == MULT:
                    cur = cur.mul_var(slot)
                elif sem == SHIFT:
                    cur = cur.shift(slot, shift_step)
                else:  # pragma: no cover
                    raise KernelError(f"unsupported semantics {sem!r}")
        out = out + cur
    return out


def apply_skew(expr: KernelExpr, op: SkewPoly, side: str) -> KernelExpr:
    """Apply a skew operator sum_i r_i(t) D^i on one argument of the kernel.

    Coefficient denominators must be monomials in t (e.g. 1/t^3); richer
    denominators leave the closed expression class and are rejected.
    """
    if side not in ("unprimed", "primed"):
        raise KernelError(f"side must be unprimed or primed, got {side!r}")
    if len(expr.coordinates) != 1:
        raise KernelError("skew operators act on a single time coordinate")
    slot = 0 if side == "unprimed" else 1
    out = KernelExpr.zero(expr.coordinates)
    deriv = expr
    for i, r in enumerate(op.coeffs):
        if i > 0:
            deriv = deriv.diff(slot)
        if r.is_zero():
            continue
        if not r.den.is_monomial():
            raise KernelError(
                f"coefficient denominator {r.den} is not a monomial in t"
            )
        k = r.den.degree
        piece = deriv.div_mono(slot, k) if k else deriv
        den_lc = r.den.lc()
        num = KernelExpr.zero(expr.coordinates)
        for p, c in enumerate(r.num.coeffs):
            if not c:
                continue
            nv = 2
            mono = tuple(p if j == slot else 0 for j in range(nv))
            num = num + KernelExpr(expr.coordinates, {(mono, ()): c / den_lc})
        out = out + num * piece
    return out


@dataclass
class MatrixKernel:
    """ell x ell grid of covariance expressions over shared coordinates."""

    coordinates: tuple[str, ...]
    entries: list[list[KernelExpr]]

    @property
    def size(self) -> int:
        return len(self.entries)

    def __getitem__(self, ij):
        i, j = ij
        return self.entries[i][j]

    def is_symmetric(self) -> bool:
        """K(x,x')_{ij} == K(x',x)_{ji} symbolically."""
        n = self.size
        return all(
            self.entries[i][j] == self.entries[j][i].swap_primed()
            for i in range(n)
            for j in range(n)
        )

    def to_strings(self) -> list[list[str]]:
        return [[str(e) for e in row] for row in self.entries]


def pushforward_covariance(B, base_kernels: list[KernelExpr], shift_step=Fraction(1)) -> MatrixKernel:
    """Covariance of the pushforward process: entry (i,j) is
    sum_c (B_ic on x) (B_jc on x') k_c, for uncorrelated latent kernels k_c.
    """
    is_ore = isinstance(B, OreMatrix)
    ncols = B.ncols
    nrows = B.nrows
    if len(base_kernels) != ncols:
        raise KernelError(
            f"need one base kernel per parametrizing component ({ncols}), got {len(base_kernels)}"
        )
    coords = base_kernels[0].coordinates if base_kernels else ()

    def apply_entry(expr, op, side):
        if is_ore:
            return apply_skew(expr, op, side)
        return apply_operator(expr, op, side, shift_step)
    # apply to unprimed side once per (row, latent), reuse across columns
    left = [
        [apply_entry(base_kernels[c], B[i, c], "unprimed") for c in range(ncols)]
        for i in range(nrows)
    ]
    entries = []
    for i in range(nrows):
        row = []
        for j in range(nrows):
            acc = KernelExpr.zero(coords)
            for c in range(ncols):
                acc = acc + apply_entry(left[i][c], B[j, c], "primed")
            row.append(acc)
        entries.append(row)
    return MatrixKernel(tuple(coords), entries)


def annihilation_check(A, K: MatrixKernel, shift_step=Fraction(1)) -> bool:
    """True iff applying A on the unprimed argument of K gives zero.

    This is the symbolic certificate that all realizations of the prior
    satisfy the constraints.
    """
    is_ore = isinstance(A, OreMatrix)

    def apply_entry(expr, op, side):
        if is_ore:
            return apply_skew(expr, op, side)
        return apply_operator(expr, op, side, shift_step)
    for i in range(A.nrows):
        for j in range(K.size):
            acc = KernelExpr.zero(K.coordinates)
            for k in range(A.ncols):
                acc = acc + apply_entry(K[k, j], A[i, k], "unprimed")
            if not acc.is_zero():
                return False
    return True


# -- compilation to numeric evaluators ----------------------------------------


def _term_source(mono: Mono, ekey: ExpKey, coeff: Fraction) -> str:
    factors = [repr(float(coeff))]
    for i, e in enumerate(mono):
        if e == 1:
            factors.append(f"V[{i}]")
        elif e:
            factors.append(f"V[{i}]**{e}" if e > 0 else f"V[{i}]**({e})")
    if ekey:
        arg_terms = []
        for pm, pc in ekey:
            fs = [repr(float(pc))]
            for i, e in enumerate(pm):
                if e == 1:
                    fs.append(f"V[{i}]")
                elif e:
                    fs.append(f"V[{i}]**{e}")
            arg_terms.append("*".join(fs))
        factors.append(f"_exp({' + '.join(arg_terms)})")
    return "*".join(factors)


def compile_expr(expr: KernelExpr):
    """Compile to a vectorized function f(V) with V a list of 2d arrays."""
    if not expr.terms:
        return lambda V: V[0] * 0.0
    body = " + ".join(
        _term_source(mono, ekey, c) for (mono, ekey), c in expr.terms.items()
    )
    import numpy as np

    namespace = {"_exp": np.exp}
    return eval(f"lambda V: {body}", namespace)  # noqa: S307 - generated from canonical form


class CompiledMatrixKernel:
    """Numeric evaluator for a :class:`MatrixKernel`; pure and thread-safe."""

    def __init__(self, K: MatrixKernel):
        self.coordinates = K.coordinates
        self.size = K.size
        self._fns = [[compile_expr(e) for e in row] for row in K.entries]

    def pairwise(self, i: int, j: int, Xu, Xp):
        """Entry (i,j) at row-aligned point arrays Xu, Xp of shape (n, d)."""
        import numpy as np

        Xu = np.asarray(Xu, dtype=float)
        Xp = np.asarray(Xp, dtype=float)
        V = [Xu[:, k] for k in range(Xu.shape[1])] + [Xp[:, k] for k in range(Xp.shape[1])]
        out = self._fns[i][j](V)
        return np.broadcast_to(out, Xu.shape[:1]).copy() if np.ndim(out) == 0 else out

    def scalar(self, i: int, j: int, xu, xp) -> float:
        import numpy as np

        return float(self.pairwise(i, j, np.atleast_2d(xu), np.atleast_2d(xp))[0])


def compile_evaluator(K: MatrixKernel) -> CompiledMatrixKernel:
    return CompiledMatrixKernel(K)
