"""Right/left kernels and the parametrizability decision."""

import random

import pytest

from lcgp.groebner import submodule_membership
from lcgp.matrices import (
    OperatorMatrix,
    check_parametrizable,
    column_module_equal,
    controllable_part,
    left_kernel,
    right_kernel,
    row_module_equal,
)
from lcgp.rings import MonomialOrder, RingContext

from conftest import build, random_polynomial


class TestDivergenceExample:
    def test_right_kernel_is_curl_module(self, divergence, curl):
        B = right_kernel(divergence)
        assert (divergence * B).is_zero()
        assert column_module_equal(B, curl)

    def test_left_kernel_recovers_divergence(self, divergence, curl):
        A1 = left_kernel(curl)
        assert row_module_equal(A1, divergence)

    def test_parametrizable(self, divergence):
        report = check_parametrizable(divergence)
        assert report.parametrizable
        assert row_module_equal(report.A_prime, divergence)

    def test_certificates_express_a_prime_rows(self, divergence):
        report = check_parametrizable(divergence)
        rows_A = report.A.rows_as_elements()
        for row, cof in zip(report.A_prime.rows_as_elements(), report.certificates):
            acc = None
            for g, c in zip(rows_A, cof):
                term = g * c
                acc = term if acc is None else acc + term
            assert acc == row


class TestMaxwellExample:
    def test_kernel_annihilates(self, maxwell_A):
        B = right_kernel(maxwell_A)
        assert (maxwell_A * B).is_zero()

    def test_matches_known_parametrization(self, maxwell_A, maxwell_B_known):
        B = right_kernel(maxwell_A)
        assert column_module_equal(B, maxwell_B_known)

    def test_parametrizable(self, maxwell_A):
        report = check_parametrizable(maxwell_A)
        assert report.parametrizable


class TestNonParametrizable:
    def test_gradient_pair(self, ctx3):
        A = build([["d1"], ["d2"]], ctx3)
        report = check_parametrizable(A)
        assert not report.parametrizable
        assert report.B.shape == (1, 0)
        assert report.A_prime.to_strings() == [["1"]]

    def test_controllable_part_is_parametrizable(self, ctx3):
        A = build([["d1"], ["d2"]], ctx3)
        A1 = controllable_part(A)
        again = check_parametrizable(A1)
        assert again.parametrizable

    def test_rows_of_a_contained_in_a_prime(self, ctx3):
        # the corrected system always implies the original constraints
        A = build([["d1"], ["d2"]], ctx3)
        report = check_parametrizable(A)
        prime_rows = report.A_prime.rows_as_elements()
        for row in A.rows_as_elements():
            ok, _ = submodule_membership(row, prime_rows)
            assert ok


class TestRandomMatrices:
    def test_right_kernel_always_annihilates(self, ctx3):
        rng = random.Random(21)
        for _ in range(15):
            s, ell = rng.randint(1, 2), rng.randint(1, 3)
            A = OperatorMatrix(
                ctx3,
                [[random_polynomial(ctx3, rng) for _ in range(ell)] for _ in range(s)],
                ncols=ell,
            )
            B = right_kernel(A)
            assert (A * B).is_zero()
            assert (left_kernel(B) * B).is_zero()

    def test_check_idempotent_on_corrected_system(self, ctx3):
        rng = random.Random(22)
        for _ in range(8):
            A = OperatorMatrix(
                ctx3,
                [[random_polynomial(ctx3, rng) for _ in range(2)] for _ in range(2)],
                ncols=2,
            )
            A1 = controllable_part(A)
            assert check_parametrizable(A1).parametrizable

    def test_order_independence_of_verdict(self, divergence, ctx3):
        lex = MonomialOrder(base="lex")
        assert check_parametrizable(divergence, lex).parametrizable
        A = build([["d1"], ["d2"]], ctx3)
        assert not check_parametrizable(A, lex).parametrizable


class TestEdgeShapes:
    def test_zero_rows_full_kernel(self, ctx3):
        A = OperatorMatrix(ctx3, [], ncols=3)
        B = right_kernel(A)
        assert B.shape == (3, 3)
        assert column_module_equal(B, OperatorMatrix.identity(ctx3, 3))

    def test_identity_has_trivial_kernel(self, ctx3):
        I = OperatorMatrix.identity(ctx3, 2)
        assert right_kernel(I).shape == (2, 0)
