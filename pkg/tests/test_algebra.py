"""Ring arithmetic, monomial orders, the text grammar, and matrix algebra."""

import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from lcgp.matrices import OperatorMatrix
from lcgp.parsing import ParseError, parse_polynomial, poly_to_string
from lcgp.rings import (
    MonomialOrder,
    Polynomial,
    RingContext,
    mono_div,
    mono_lcm,
    mono_mul,
)

from conftest import random_polynomial

CTX = RingContext.make(["d1", "d2", "d3"], coordinates=["x", "y", "z"])

monomials = st.tuples(*(st.integers(0, 4) for _ in range(3)))
coeffs = st.fractions(min_value=-9, max_value=9, max_denominator=7)
polys = st.dictionaries(monomials, coeffs, max_size=4).map(
    lambda d: Polynomial(CTX, {m: c for m, c in d.items() if c})
)


class TestPolynomialArithmetic:
    @given(polys, polys, polys)
    def test_ring_axioms(self, a, b, c):
        assert a + b == b + a
        assert a * b == b * a
        assert (a + b) + c == a + (b + c)
        assert (a * b) * c == a * (b * c)
        assert a * (b + c) == a * b + a * c
        assert a + CTX.zero() == a
        assert a * CTX.one() == a
        assert (a - a).is_zero()

    @given(polys, st.integers(0, 4))
    def test_power_is_repeated_product(self, a, n):
        prod = CTX.one()
        for _ in range(n):
            prod = prod * a
        assert a**n == prod

    @given(polys)
    def test_scalar_embedding(self, a):
        assert a * 2 == a + a
        assert a * Fraction(1, 2) + a * Fraction(1, 2) == a


class TestMonomialOps:
    @given(monomials, monomials)
    def test_mul_div_inverse(self, a, b):
        assert mono_div(mono_mul(a, b), b) == a

    @given(monomials, monomials)
    def test_lcm_divisible_by_both(self, a, b):
        l = mono_lcm(a, b)
        assert mono_div(l, a) is not None
        assert mono_div(l, b) is not None

    def test_div_failure(self):
        assert mono_div((1, 0, 0), (0, 1, 0)) is None


class TestMonomialOrders:
    degrevlex = MonomialOrder()
    lex = MonomialOrder(base="lex")

    @given(monomials, monomials)
    def test_degrevlex_graded(self, a, b):
        if sum(a) < sum(b):
            assert self.degrevlex.mono_key(a) < self.degrevlex.mono_key(b)

    @given(monomials, monomials, monomials)
    def test_multiplicative_compatibility(self, a, b, c):
        for order in (self.degrevlex, self.lex):
            if order.mono_key(a) < order.mono_key(b):
                assert order.mono_key(mono_mul(a, c)) < order.mono_key(mono_mul(b, c))

    def test_lex_ignores_degree(self):
        # d1 beats any power of d2 under lex
        assert self.lex.mono_key((1, 0, 0)) > self.lex.mono_key((0, 4, 0))

    def test_leading_terms_differ_between_orders(self):
        p = parse_polynomial("d1 + d2^2", CTX)
        assert p.leading_term(self.degrevlex)[0] == (0, 2, 0)
        assert p.leading_term(self.lex)[0] == (1, 0, 0)


class TestGrammar:
    @pytest.mark.parametrize(
        "text,expected",
        [
            ("3", "3"),
            ("-1/2*d1", "-1/2*d1"),
            ("d1^2*d2", "d1^2*d2"),
            ("d1 + d2 - d1", "d2"),
            ("(d1 + d2)^2", "d1^2 + 2*d1*d2 + d2^2"),
            ("2*d1 - d1 - d1", "0"),
            ("d1*(d2 + 1) - d1*d2", "d1"),
        ],
    )
    def test_parse_print(self, text, expected):
        assert poly_to_string(parse_polynomial(text, CTX)) == expected

    @given(polys)
    @settings(max_examples=200)
    def test_round_trip_identity(self, p):
        s = poly_to_string(p)
        assert parse_polynomial(s, CTX) == p
        assert poly_to_string(parse_polynomial(s, CTX)) == s

    def test_malformed_power_reports_caret_position(self):
        with pytest.raises(ParseError) as err:
            parse_polynomial("d1^", CTX)
        assert err.value.pos == 3

    @pytest.mark.parametrize("bad", ["d1 +", "* d2", "d9", "(d1", "d1^d2", "1/0"])
    def test_rejects_malformed(self, bad):
        with pytest.raises(ParseError):
            parse_polynomial(bad, CTX)

    def test_whitespace_insignificant(self):
        a = parse_polynomial("d1^2*d2+3", CTX)
        b = parse_polynomial("  d1 ^ 2 * d2 + 3 ", CTX)
        assert a == b


class TestOperatorMatrix:
    def test_divergence_of_curl_vanishes(self, divergence, curl):
        assert (divergence * curl).is_zero()

    def test_known_parametrization_annihilated(self, maxwell_A, maxwell_B_known):
        assert (maxwell_A * maxwell_B_known).is_zero()

    def test_identity_neutral(self, curl, ctx3):
        I = OperatorMatrix.identity(ctx3, 3)
        assert curl * I == curl
        assert I * curl == curl

    def test_transpose_involution(self, maxwell_A):
        assert maxwell_A.transpose().transpose() == maxwell_A

    def test_product_transpose(self, divergence, curl):
        lhs = (divergence * curl).transpose()
        rhs = curl.transpose() * divergence.transpose()
        assert lhs == rhs

    def test_shape_mismatch_rejected(self, divergence, maxwell_A):
        with pytest.raises(ValueError):
            divergence * maxwell_A

    def test_random_distributivity(self, ctx3):
        rng = random.Random(11)
        for _ in range(20):
            A = OperatorMatrix(
                ctx3, [[random_polynomial(ctx3, rng) for _ in range(2)] for _ in range(2)]
            )
            B = OperatorMatrix(
                ctx3, [[random_polynomial(ctx3, rng) for _ in range(2)] for _ in range(2)]
            )
            C = OperatorMatrix(
                ctx3, [[random_polynomial(ctx3, rng) for _ in range(2)] for _ in range(2)]
            )
            assert A * (B + C) == A * B + A * C
            assert (A * B) * C == A * (B * C)
