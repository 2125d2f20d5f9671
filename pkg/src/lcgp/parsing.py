"""Text grammar for polynomials and the extended covariance expressions.

The grammar is a small algebraic expression language:

    expr   := term (('+' | '-') term)*
    term   := power (('*' | '/') power)*
    power  := factor ('^' INT)?
    factor := '-' factor | INT | NAME | '(' expr ')' | 'exp' '(' expr ')'

Whitespace is insignificant.  Names may contain a trailing apostrophe
(primed covariance variables such as ``x'``).  A single recursive-descent
parser feeds a builder object, so the same grammar serves plain
polynomials, skew polynomials, and kernel expressions.  Printing produces
canonical forms that re-parse to the identical value.
"""

from __future__ import annotations

from fractions import Fraction

from .rings import Polynomial, RingContext, mono_degree


class ParseError(ValueError):
    """Syntax or semantic error, carrying a character position."""

    def __init__(self, message: str, pos: int):
        super().__init__(f"{message} (at position {pos})")
        self.pos = pos


_SYMBOLS = "+-*/^()"


def tokenize(text: str) -> list[tuple[str, str, int]]:
    """Return (kind, value, pos) triples; kinds are INT, NAME, OP, END."""
    tokens = []
    i, n = 0, len(text)
    while i < n:
        ch = text[i]
        if ch.isspace():
            i += 1
        elif ch.isdigit():
            j = i
            while j < n and text[j].isdigit():
                j += 1
            tokens.append(("INT", text[i:j], i))
            i = j
        elif ch.isalpha() or ch == "_":
            j = i
            while j < n and (text[j].isalnum() or text[j] in "_'"):
                j += 1
            tokens.append(("NAME", text[i:j], i))
            i = j
        elif ch in _SYMBOLS:
            tokens.append(("OP", ch, i))
            i += 1
        else:
            raise ParseError(f"unexpected character {ch!r}", i)
    tokens.append(("END", "", n))
    return tokens


class ExprParser:
    """Recursive-descent parser driving a builder.

    The builder supplies ``const``, ``var``, ``add``, ``sub``, ``mul``,
    ``div``, ``pow``, ``neg``, and ``exp``; each may raise ParseError-style
    messages via ``self.error``.
    """

    def __init__(self, text: str, builder):
        self.text = text
        self.tokens = tokenize(text)
        self.i = 0
        self.builder = builder

    def peek(self):
        return self.tokens[self.i]

    def next(self):
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def error(self, message: str):
        raise ParseError(message, self.peek()[2])

    def expect(self, value: str):
        kind, val, pos = self.next()
        if val != value:
            raise ParseError(f"expected {value!r}, found {val or 'end of input'!r}", pos)

    def parse(self):
        value = self.expr()
        kind, val, pos = self.peek()
        if kind != "END":
            raise ParseError(f"unexpected trailing {val!r}", pos)
        return value

    def expr(self):
        value = self.term()
        while self.peek()[1] in ("+", "-"):
            op = self.next()[1]
            rhs = self.term()
            value = self.builder.add(value, rhs) if op == "+" else self.builder.sub(value, rhs)
        return value

    def term(self):
        value = self.power()
        while self.peek()[1] in ("*", "/"):
            _, op, pos = self.next()
            rhs = self.power()
            if op == "*":
                value = self.builder.mul(value, rhs)
            else:
                value = self.builder.div(value, rhs, pos)
        return value

    def power(self):
        value = self.factor()
        if self.peek()[1] == "^":
            self.next()
            kind, val, pos = self.next()
            if kind != "INT":
                raise ParseError("expected integer exponent after '^'", pos)
            value = self.builder.pow(value, int(val), pos)
        return value

    def factor(self):
        kind, val, pos = self.peek()
        if val == "-":
            # unary minus binds looser than '^': -d^2 means -(d^2)
            self.next()
            return self.builder.neg(self.power())
        if val == "+":
            self.next()
            return self.power()
        if kind == "INT":
            self.next()
            return self.builder.const(int(val))
        if kind == "NAME":
            self.next()
            if val == "exp":
                self.expect("(")
                arg = self.expr()
                self.expect(")")
                return self.builder.exp(arg, pos)
            return self.builder.var(val, pos)
        if val == "(":
            self.next()
            value = self.expr()
            self.expect(")")
            return value
        raise ParseError(f"expected a term, found {val or 'end of input'!r}", pos)


class PolynomialBuilder:
    """Builds :class:`Polynomial` values; rejects exp and non-constant division."""

    def __init__(self, ctx: RingContext):
        self.ctx = ctx

    def const(self, n):
        return self.ctx.const(n)

    def var(self, name, pos):
        try:
            idx = self.ctx.generators.index(name)
        except ValueError:
            raise ParseError(f"unknown generator {name!r}", pos) from None
        return self.ctx.gen(idx)

    def add(self, a, b):
        return a + b

    def sub(self, a, b):
        return a - b

    def mul(self, a, b):
        return a * b

    def div(self, a, b, pos):
        if not b.is_constant() or b.is_zero():
            raise ParseError("polynomial division only by nonzero constants", pos)
        return a * (Fraction(1) / b.constant_value())

    def pow(self, a, n, pos):
        if n < 0:
            raise ParseError("negative exponent in polynomial", pos)
        return a**n

    def neg(self, a):
        return -a

    def exp(self, a, pos):
        raise ParseError("exp(...) not allowed in polynomials", pos)


def parse_polynomial(text: str, ctx: RingContext) -> Polynomial:
    return ExprParser(text, PolynomialBuilder(ctx)).parse()


def format_coeff(c: Fraction) -> str:
    return str(c.numerator) if c.denominator == 1 else f"{c.numerator}/{c.denominator}"


def _mono_factors(names, mono) -> list[str]:
    out = []
    for name, e in zip(names, mono):
        if e == 1:
            out.append(name)
        elif e > 1:
            out.append(f"{name}^{e}")
    return out


def poly_to_string(p: Polynomial, order=None) -> str:
    """Canonical text form: terms in descending monomial order."""
    from .rings import DEFAULT_ORDER

    if p.is_zero():
        return "0"
    order = order or DEFAULT_ORDER
    parts = []
    for mono in sorted(p.terms, key=order.mono_key, reverse=True):
        c = p.terms[mono]
        factors = _mono_factors(p.ctx.generators, mono)
        mag = abs(c)
        if not factors:
            body = format_coeff(mag)
        elif mag == 1:
            body = "*".join(factors)
        else:
            body = "*".join([format_coeff(mag)] + factors)
        if not parts:
            parts.append(body if c > 0 else f"-{body}")
        else:
            parts.append(f"+ {body}" if c > 0 else f"- {body}")
    return " ".join(parts)


def parse_matrix(rows: list[list[str]], ctx: RingContext) -> list[list[Polynomial]]:
    """Parse a grid of polynomial strings, reporting matrix coordinates on error."""
    out = []
    width = None
    for i, row in enumerate(rows):
        if width is None:
            width = len(row)
        elif len(row) != width:
            raise ParseError(f"row {i} has {len(row)} entries, expected {width}", 0)
        out_row = []
        for j, entry in enumerate(row):
            try:
                out_row.append(parse_polynomial(entry, ctx))
            except ParseError as exc:
                raise ParseError(f"matrix entry ({i},{j}): {exc}", exc.pos) from None
        out.append(out_row)
    return out
