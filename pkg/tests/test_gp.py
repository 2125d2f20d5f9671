"""Multi-output GP regression on matrix covariances."""

import math

import numpy as np
import pytest

from lcgp.gp import (
    Dataset,
    FactorizationError,
    GPModel,
    cross_covariance,
    fit_hyperparameters,
    gram,
    log_marginal_likelihood,
    posterior,
    posterior_mean_function,
)
from lcgp.symbolic import MatrixKernel, pushforward_covariance, se_kernel
from lcgp.matrices import right_kernel


def se_matrix(coords=("t",), lengthscale=1, variance=1) -> MatrixKernel:
    k = se_kernel(coords, lengthscale, variance)
    return MatrixKernel(tuple(coords), [[k]])


def sample_se(rng, ts, lengthscale=1.0):
    diff = ts[:, None] - ts[None, :]
    K = np.exp(-0.5 * (diff / lengthscale) ** 2) + 1e-10 * np.eye(len(ts))
    return np.linalg.cholesky(K) @ rng.standard_normal(len(ts))


class TestGram:
    def test_single_point_diag_is_variance(self):
        model = GPModel(se_matrix(variance=3), noise_var=0.0, jitter=0.0)
        data = Dataset.from_triples([((0.0,), 0, 1.0)])
        assert np.allclose(gram(model, data), [[3.0]])

    def test_duplicate_points_off_diagonal(self):
        model = GPModel(se_matrix(variance=2), noise_var=0.0, jitter=0.0)
        data = Dataset.from_triples([((1.0,), 0, 0.0), ((1.0,), 0, 0.0)])
        G = gram(model, data)
        assert np.allclose(G, [[2.0, 2.0], [2.0, 2.0]])

    def test_noise_on_diagonal(self):
        model = GPModel(se_matrix(), noise_var=0.5)
        data = Dataset.from_triples([((0.0,), 0, 0.0), ((3.0,), 0, 0.0)])
        G = gram(model, data)
        assert G[0, 0] == pytest.approx(1.5)
        assert G[0, 1] < 0.1

    def test_jitter_rescue_of_singular_gram(self):
        # duplicate noiseless observations make the Gram exactly singular
        model = GPModel(se_matrix(), noise_var=0.0)
        data = Dataset.from_triples([((1.0,), 0, 1.0), ((1.0,), 0, 1.0)])
        mean, _ = posterior(model, data, [((1.0,), 0)])
        assert mean[0] == pytest.approx(1.0, abs=1e-5)

    def test_factorization_error_reported(self):
        bad = MatrixKernel(
            ("t",), [[se_kernel(("t",)) * -1]]
        )  # negative definite "covariance"
        model = GPModel(bad, noise_var=0.0, jitter=0.0)
        data = Dataset.from_triples([((0.0,), 0, 1.0)])
        with pytest.raises(FactorizationError):
            posterior(model, data, [((0.0,), 0)])


class TestLogMarginalLikelihood:
    def test_unit_gram_zero_observation(self):
        model = GPModel(se_matrix(), noise_var=0.0, jitter=0.0)
        data = Dataset.from_triples([((0.0,), 0, 0.0)])
        assert log_marginal_likelihood(model, data) == pytest.approx(-0.5 * math.log(2 * math.pi))

    def test_unit_gram_unit_observation(self):
        model = GPModel(se_matrix(), noise_var=0.0, jitter=0.0)
        data = Dataset.from_triples([((0.0,), 0, 1.0)])
        expected = -0.5 - 0.5 * math.log(2 * math.pi)
        assert log_marginal_likelihood(model, data) == pytest.approx(expected)

    def test_noise_direction_depends_on_fit(self):
        rng = np.random.default_rng(0)
        ts = np.linspace(0, 4, 25)
        well_fit = sample_se(rng, ts)
        mismatched = rng.standard_normal(len(ts)) * 3.0
        for values, expect_increase in [(mismatched, True), (well_fit, False)]:
            data = Dataset.from_triples([((t,), 0, v) for t, v in zip(ts, values)])
            low = log_marginal_likelihood(GPModel(se_matrix(), noise_var=0.05), data)
            high = log_marginal_likelihood(GPModel(se_matrix(), noise_var=0.1), data)
            assert (high > low) == expect_increase


class TestPosterior:
    def test_reproduces_training_values(self):
        rng = np.random.default_rng(1)
        ts = np.linspace(-1, 1, 7)
        values = sample_se(rng, ts)
        data = Dataset.from_triples([((t,), 0, v) for t, v in zip(ts, values)])
        model = GPModel(se_matrix(), noise_var=0.0, jitter=1e-12)
        mean, _ = posterior(model, data, [((t,), 0) for t in ts])
        assert np.max(np.abs(mean - values)) <= 1e-8 * max(1.0, np.max(np.abs(values)))

    def test_posterior_covariance_symmetric_psd(self):
        data = Dataset.from_triples([((0.0,), 0, 1.0), ((1.0,), 0, -1.0)])
        model = GPModel(se_matrix())
        _, cov = posterior(model, data, [((t,), 0) for t in np.linspace(-1, 2, 8)])
        assert np.allclose(cov, cov.T)
        assert np.min(np.linalg.eigvalsh(cov)) >= -1e-9

    def test_variance_reduction_at_training_points(self):
        data = Dataset.from_triples([((0.5,), 0, 0.3)])
        model = GPModel(se_matrix())
        _, cov = posterior(model, data, [((0.5,), 0)])
        assert cov[0, 0] <= 1.0

    def test_duplicate_observation_never_increases_variance(self):
        base = [((0.0,), 0, 1.0), ((1.0,), 0, 0.0)]
        model = GPModel(se_matrix())
        queries = [((t,), 0) for t in np.linspace(-1, 2, 9)]
        _, cov1 = posterior(model, Dataset.from_triples(base), queries)
        _, cov2 = posterior(model, Dataset.from_triples(base + [base[0]]), queries)
        assert np.all(np.diag(cov2) <= np.diag(cov1) + 1e-9)

    def test_empty_data_returns_prior(self):
        model = GPModel(se_matrix(variance=2))
        mean, cov = posterior(model, Dataset.from_triples([]), [((0.0,), 0)])
        assert mean[0] == 0.0
        assert cov[0, 0] == pytest.approx(2.0)

    def test_mean_function_matches_posterior(self):
        data = Dataset.from_triples([((0.0,), 0, 1.0), ((2.0,), 0, -0.5)])
        model = GPModel(se_matrix())
        fn = posterior_mean_function(model, data)
        ts = np.linspace(-1, 3, 6)
        mean, _ = posterior(model, data, [((t,), 0) for t in ts])
        assert fn(ts[:, None], 0) == pytest.approx(mean)

    def test_multi_output_cross_block(self, divergence):
        B = right_kernel(divergence)
        K = pushforward_covariance(B, [se_kernel(("x", "y", "z"))] * B.ncols)
        model = GPModel(K)
        data = Dataset.from_triples([((0.0, 0.0, 0.0), 0, 1.0)])
        mean, _ = posterior(
            model, data, [((0.0, 0.0, 0.0), c) for c in range(3)]
        )
        assert mean[0] > 0.5  # conditioned component
        assert abs(mean[1]) < 1e-8 and abs(mean[2]) < 1e-8  # uncorrelated at same point


class TestCrossCovariance:
    def test_component_blocks(self, divergence):
        B = right_kernel(divergence)
        K = pushforward_covariance(B, [se_kernel(("x", "y", "z"))] * B.ncols)
        from lcgp.symbolic import compile_evaluator

        compiled = compile_evaluator(K)
        P = np.array([[0.0, 0.0, 0.0], [0.5, -0.5, 0.2]])
        comps = np.array([0, 2])
        M = cross_covariance(compiled, P, comps, P, comps)
        assert M[0, 1] == pytest.approx(compiled.scalar(0, 2, P[0], P[1]))
        assert np.allclose(M, M.T)


class TestFit:
    def test_single_candidate_returned(self):
        data = Dataset.from_triples([((0.0,), 0, 1.0)])
        model = fit_hyperparameters(
            lambda ls, var: se_matrix(lengthscale=ls, variance=var), data, ["2"], ["3"]
        )
        assert model.hyperparameters["lengthscale"] == "2"
        assert model.hyperparameters["variance"] == "3"
        assert "log_marginal_likelihood" in model.hyperparameters

    def test_empty_data_ties_break_to_first(self):
        model = fit_hyperparameters(
            lambda ls, var: se_matrix(lengthscale=ls, variance=var),
            Dataset.from_triples([]),
            ["1/4", "1", "4"],
        )
        assert model.hyperparameters["lengthscale"] == "1/4"

    def test_recovers_lengthscale_from_simulation(self):
        from fractions import Fraction

        grid = [Fraction(1, 4), Fraction(1, 2), Fraction(1), Fraction(2), Fraction(4)]
        selected = []
        for seed in range(20):
            rng = np.random.default_rng(seed)
            ts = np.linspace(0, 6, 30)
            values = sample_se(rng, ts, lengthscale=1.0)
            data = Dataset.from_triples([((t,), 0, v) for t, v in zip(ts, values)])
            model = fit_hyperparameters(
                lambda ls, var: se_matrix(lengthscale=ls, variance=var),
                data,
                grid,
                noise_vars=[1e-6],
            )
            selected.append(float(model.hyperparameters["lengthscale"]))
        median = sorted(selected)[len(selected) // 2]
        assert 0.5 <= median <= 2.0  # within one grid step of the true value 1
