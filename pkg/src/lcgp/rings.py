"""Exact commutative operator rings: rationals, multivariate polynomials,
and elements of free modules R^s with module monomial orders.

Coefficients are `fractions.Fraction` throughout, so every computation is
exact.  A :class:`RingContext` fixes the generator names (e.g. ``d1, d2, d3``
for partial derivatives), the action semantics of each generator, and the
names of the coordinates the operators act on.  Contexts are immutable and
polynomials over different contexts never mix.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Iterator

Exponents = tuple[int, ...]

#: Recognised generator action semantics.
DIFF = "diff"        # partial derivative with respect to the paired coordinate
MULT = "mult"        # multiplication by the paired coordinate
SHIFT = "shift"      # translation of the paired coordinate argument
SEMANTICS = (DIFF, MULT, SHIFT)


class RingError(ValueError):
    """Mismatched ring contexts, bad generator data, and similar misuse."""


@dataclass(frozen=True)
class RingContext:
    """A polynomial operator ring with named generators and coordinates.

    ``generators[i]`` acts on ``coordinates[i]`` according to
    ``semantics[i]``.  The ring itself is the commutative polynomial ring
    over Q in the generators; the action only matters when operators are
    applied to covariance expressions.
    """

    generators: tuple[str, ...]
    semantics: tuple[str, ...]
    coordinates: tuple[str, ...]

    def __post_init__(self):
        if len(set(self.generators)) != len(self.generators):
            raise RingError("generator names must be unique")
        if len(self.semantics) != len(self.generators):
            raise RingError("need one semantics entry per generator")
        if len(self.coordinates) != len(self.generators):
            raise RingError("need one coordinate per generator")
        for s in self.semantics:
            if s not in SEMANTICS:
                raise RingError(f"unknown semantics {s!r}")

    @classmethod
    def make(cls, generators, semantics=None, coordinates=None) -> "RingContext":
        gens = tuple(generators)
        if semantics is None:
            semantics = (DIFF,) * len(gens)
        elif isinstance(semantics, str):
            semantics = (semantics,) * len(gens)
        if coordinates is None:
            coordinates = tuple(f"x{i + 1}" for i in range(len(gens)))
        return cls(gens, tuple(semantics), tuple(coordinates))

    @property
    def ngens(self) -> int:
        return len(self.generators)

    @property
    def zero_mono(self) -> Exponents:
        return (0,) * self.ngens

    def gen_index(self, name: str) -> int:
        try:
            return self.generators.index(name)
        except ValueError:
            raise RingError(f"unknown generator {name!r}") from None

    def gen(self, i: int) -> "Polynomial":
        mono = tuple(1 if j == i else 0 for j in range(self.ngens))
        return Polynomial(self, {mono: Fraction(1)})

    def gens(self) -> list["Polynomial"]:
        return [self.gen(i) for i in range(self.ngens)]

    def const(self, c) -> "Polynomial":
        c = Fraction(c)
        return Polynomial(self, {self.zero_mono: c} if c else {})

    def one(self) -> "Polynomial":
        return self.const(1)

    def zero(self) -> "Polynomial":
        return Polynomial(self, {})


def mono_mul(a: Exponents, b: Exponents) -> Exponents:
    return tuple(x + y for x, y in zip(a, b))


def mono_div(a: Exponents, b: Exponents) -> Exponents | None:
    """Return a/b as exponents, or None if b does not divide a."""
    q = tuple(x - y for x, y in zip(a, b))
    return q if all(e >= 0 for e in q) else None


def mono_lcm(a: Exponents, b: Exponents) -> Exponents:
    return tuple(max(x, y) for x, y in zip(a, b))


def mono_degree(a: Exponents) -> int:
    return sum(a)


class Polynomial:
    """Multivariate polynomial over Q in a fixed :class:`RingContext`.

    Stored as a map from exponent tuples to nonzero Fractions; the empty
    map is the zero polynomial.  Instances are treated as immutable.
    """

    __slots__ = ("ctx", "terms")

    def __init__(self, ctx: RingContext, terms: dict[Exponents, Fraction]):
        self.ctx = ctx
        self.terms = {m: c for m, c in terms.items() if c}

    # -- construction helpers -------------------------------------------------

    @classmethod
    def term(cls, ctx: RingContext, mono: Exponents, coeff) -> "Polynomial":
        return cls(ctx, {tuple(mono): Fraction(coeff)})

    def _check(self, other: "Polynomial"):
        if self.ctx is not other.ctx and self.ctx != other.ctx:
            raise RingError("polynomials from different ring contexts")

    # -- predicates -----------------------------------------------------------

    def is_zero(self) -> bool:
        return not self.terms

    def is_constant(self) -> bool:
        return all(mono_degree(m) == 0 for m in self.terms)

    def constant_value(self) -> Fraction:
        if not self.is_constant():
            raise RingError("polynomial is not constant")
        return self.terms.get(self.ctx.zero_mono, Fraction(0))

    def total_degree(self) -> int:
        return max((mono_degree(m) for m in self.terms), default=0)

    # -- arithmetic -----------------------------------------------------------

    def __add__(self, other):
        if isinstance(other, (int, Fraction)):
            other = self.ctx.const(other)
        self._check(other)
        terms = dict(self.terms)
        for m, c in other.terms.items():
            s = terms.get(m, Fraction(0)) + c
            if s:
                terms[m] = s
            else:
                terms.pop(m, None)
        return Polynomial(self.ctx, terms)

    __radd__ = __add__

    def __neg__(self):
        return Polynomial(self.ctx, {m: -c for m, c in self.terms.items()})

    def __sub__(self, other):
        if isinstance(other, (int, Fraction)):
            other = self.ctx.const(other)
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            c = Fraction(other)
            return Polynomial(self.ctx, {m: c * v for m, v in self.terms.items()})
        self._check(other)
        terms: dict[Exponents, Fraction] = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                m = mono_mul(m1, m2)
                s = terms.get(m, Fraction(0)) + c1 * c2
                if s:
                    terms[m] = s
                else:
                    terms.pop(m, None)
        return Polynomial(self.ctx, terms)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if n < 0:
            raise RingError("negative polynomial power")
        result = self.ctx.one()
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def __eq__(self, other):
        if not isinstance(other, Polynomial):
            return NotImplemented
        return self.ctx == other.ctx and self.terms == other.terms

    def __hash__(self):
        return hash((self.ctx, frozenset(self.terms.items())))

    def __repr__(self):
        from .parsing import poly_to_string

        return f"Polynomial({poly_to_string(self)!r})"

    def __str__(self):
        from .parsing import poly_to_string

        return poly_to_string(self)

    def leading_term(self, order: "MonomialOrder") -> tuple[Exponents, Fraction]:
        if not self.terms:
            raise RingError("zero polynomial has no leading term")
        m = max(self.terms, key=order.mono_key)
        return m, self.terms[m]


@dataclass(frozen=True)
class MonomialOrder:
    """Monomial order on R and its extension to free modules R^s.

    ``base`` is ``degrevlex`` or ``lex``.  The module extension is either
    term-over-position (``TOP``, compare monomials first) or
    position-over-term (``POT``, compare components first).  ``priority``
    maps a component index to its rank; rank 0 is the greatest component.
    When ``priority`` is None components rank by index, 0 greatest.
    """

    base: str = "degrevlex"
    module: str = "TOP"
    priority: tuple[int, ...] | None = None

    def __post_init__(self):
        if self.base not in ("degrevlex", "lex"):
            raise RingError(f"unknown base order {self.base!r}")
        if self.module not in ("TOP", "POT"):
            raise RingError(f"unknown module extension {self.module!r}")

    def mono_key(self, m: Exponents):
        """Sort key; larger key = larger monomial."""
        if self.base == "degrevlex":
            return (sum(m), tuple(-e for e in reversed(m)))
        return m

    def _comp_key(self, comp: int):
        rank = self.priority[comp] if self.priority is not None else comp
        return -rank

    def term_key(self, term: tuple[int, Exponents]):
        comp, m = term
        if self.module == "TOP":
            return (self.mono_key(m), self._comp_key(comp))
        return (self._comp_key(comp), self.mono_key(m))


DEFAULT_ORDER = MonomialOrder()


ModTerm = tuple[int, Exponents]


class ModuleElement:
    """Element of the free module R^s over a :class:`RingContext`.

    Terms map (component index, monomial) to a nonzero Fraction; the zero
    element has no terms.
    """

    __slots__ = ("ctx", "rank", "terms")

    def __init__(self, ctx: RingContext, rank: int, terms: dict[ModTerm, Fraction]):
        self.ctx = ctx
        self.rank = rank
        self.terms = {}
        for (comp, m), c in terms.items():
            if not c:
                continue
            if not 0 <= comp < rank:
                raise RingError(f"component {comp} out of range for R^{rank}")
            self.terms[(comp, m)] = c

    @classmethod
    def zero(cls, ctx: RingContext, rank: int) -> "ModuleElement":
        return cls(ctx, rank, {})

    @classmethod
    def unit(cls, ctx: RingContext, rank: int, comp: int) -> "ModuleElement":
        return cls(ctx, rank, {(comp, ctx.zero_mono): Fraction(1)})

    @classmethod
    def from_poly(cls, p: Polynomial, comp: int, rank: int) -> "ModuleElement":
        return cls(p.ctx, rank, {(comp, m): c for m, c in p.terms.items()})

    @classmethod
    def from_polys(cls, polys: Iterable[Polynomial], rank: int | None = None) -> "ModuleElement":
        polys = list(polys)
        if rank is None:
            rank = len(polys)
        ctx = polys[0].ctx
        terms: dict[ModTerm, Fraction] = {}
        for comp, p in enumerate(polys):
            for m, c in p.terms.items():
                terms[(comp, m)] = c
        return cls(ctx, rank, terms)

    def component(self, comp: int) -> Polynomial:
        return Polynomial(
            self.ctx, {m: c for (cc, m), c in self.terms.items() if cc == comp}
        )

    def components(self) -> list[Polynomial]:
        return [self.component(i) for i in range(self.rank)]

    def is_zero(self) -> bool:
        return not self.terms

    def _check(self, other: "ModuleElement"):
        if self.ctx != other.ctx or self.rank != other.rank:
            raise RingError("module elements from different free modules")

    def __add__(self, other: "ModuleElement"):
        self._check(other)
        terms = dict(self.terms)
        for t, c in other.terms.items():
            s = terms.get(t, Fraction(0)) + c
            if s:
                terms[t] = s
            else:
                terms.pop(t, None)
        return ModuleElement(self.ctx, self.rank, terms)

    def __neg__(self):
        return ModuleElement(self.ctx, self.rank, {t: -c for t, c in self.terms.items()})

    def __sub__(self, other: "ModuleElement"):
        return self + (-other)

    def scale(self, mono: Exponents, coeff) -> "ModuleElement":
        """Multiply by the single ring term coeff * mono."""
        coeff = Fraction(coeff)
        if not coeff:
            return ModuleElement.zero(self.ctx, self.rank)
        return ModuleElement(
            self.ctx,
            self.rank,
            {(comp, mono_mul(m, mono)): c * coeff for (comp, m), c in self.terms.items()},
        )

    def __mul__(self, p):
        if isinstance(p, (int, Fraction)):
            c = Fraction(p)
            return ModuleElement(self.ctx, self.rank, {t: c * v for t, v in self.terms.items()})
        out = ModuleElement.zero(self.ctx, self.rank)
        for m, c in p.terms.items():
            out = out + self.scale(m, c)
        return out

    __rmul__ = __mul__

    def leading_term(self, order: MonomialOrder) -> tuple[int, Exponents, Fraction]:
        if not self.terms:
            raise RingError("zero module element has no leading term")
        comp, m = max(self.terms, key=order.term_key)
        return comp, m, self.terms[(comp, m)]

    def monic(self, order: MonomialOrder) -> "ModuleElement":
        _, _, c = self.leading_term(order)
        return self * (Fraction(1) / c)

    def __eq__(self, other):
        if not isinstance(other, ModuleElement):
            return NotImplemented
        return self.ctx == other.ctx and self.rank == other.rank and self.terms == other.terms

    def __hash__(self):
        return hash((self.ctx, self.rank, frozenset(self.terms.items())))

    def __repr__(self):
        parts = " + ".join(f"({p})*e{i}" for i, p in enumerate(self.components()) if not p.is_zero())
        return f"ModuleElement<{parts or '0'}>"
