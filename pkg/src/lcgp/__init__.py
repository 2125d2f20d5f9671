"""Gaussian process priors constrained to the solution sets of linear
operator equations.

Given a matrix A of linear operators (partial derivatives, coordinate
multiplications, shifts, or skew polynomials in d/dt over Q(t)), the
package computes a parametrizing matrix B with A B = 0, decides whether B
captures *all* solutions, pushes a squared-exponential prior through B
symbolically, and runs multi-output GP regression whose posterior means
satisfy A f = 0 exactly.
"""

from .gp import Dataset, GPModel, fit_hyperparameters, log_marginal_likelihood, posterior
from .matrices import OperatorMatrix, check_parametrizable, left_kernel, right_kernel
from .ore import OreMatrix, SkewPoly, ore_left_kernel, ore_right_kernel
from .parsing import ParseError, parse_matrix, parse_polynomial
from .problem import parse_problem, problem_to_text
from .rings import MonomialOrder, Polynomial, RingContext
from .schemas import KernelSpec, ProblemSpec, RingSpec
from .symbolic import (
    KernelExpr,
    MatrixKernel,
    annihilation_check,
    pushforward_covariance,
    se_kernel,
)

__version__ = "0.1.0"

__all__ = [
    "Dataset",
    "GPModel",
    "KernelExpr",
    "KernelSpec",
    "MatrixKernel",
    "MonomialOrder",
    "OperatorMatrix",
    "OreMatrix",
    "ParseError",
    "Polynomial",
    "ProblemSpec",
    "RingContext",
    "RingSpec",
    "SkewPoly",
    "annihilation_check",
    "check_parametrizable",
    "fit_hyperparameters",
    "left_kernel",
    "log_marginal_likelihood",
    "ore_left_kernel",
    "ore_right_kernel",
    "parse_matrix",
    "parse_polynomial",
    "parse_problem",
    "posterior",
    "problem_to_text",
    "pushforward_covariance",
    "right_kernel",
    "se_kernel",
    "__version__",
]
