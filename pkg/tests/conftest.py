import random
from fractions import Fraction

import pytest

from lcgp.matrices import OperatorMatrix
from lcgp.parsing import parse_matrix
from lcgp.rings import Polynomial, RingContext

# Electromagnetic field constraints: components 0-2 electric field,
# 3-5 magnetic field, 6-8 current density, 9 charge density.
MAXWELL_A_ROWS = [
    ["0", "-dz", "dy", "dt", "0", "0", "0", "0", "0", "0"],
    ["dz", "0", "-dx", "0", "dt", "0", "0", "0", "0", "0"],
    ["-dy", "dx", "0", "0", "0", "dt", "0", "0", "0", "0"],
    ["0", "0", "0", "dx", "dy", "dz", "0", "0", "0", "0"],
    ["-dt", "0", "0", "0", "-dz", "dy", "-1", "0", "0", "0"],
    ["0", "-dt", "0", "dz", "0", "-dx", "0", "-1", "0", "0"],
    ["0", "0", "-dt", "-dy", "dx", "0", "0", "0", "-1", "0"],
    ["dx", "dy", "dz", "0", "0", "0", "0", "0", "0", "-1"],
]

# Known four-column parametrization of the above (given column-per-row here).
MAXWELL_B_COLS = [
    ["dx", "dy", "dz", "0", "0", "0", "-dt*dx", "-dt*dy", "-dt*dz",
     "dx^2+dy^2+dz^2"],
    ["dt", "0", "0", "0", "-dz", "dy", "dy^2+dz^2-dt^2", "-dy*dx", "-dz*dx",
     "dt*dx"],
    ["0", "dt", "0", "dz", "0", "-dx", "-dy*dx", "dx^2+dz^2-dt^2", "-dz*dy",
     "dt*dy"],
    ["0", "0", "dt", "-dy", "dx", "0", "-dz*dx", "-dz*dy", "dx^2+dy^2-dt^2",
     "dt*dz"],
]

CURL_ROWS = [
    ["0", "-d3", "d2"],
    ["d3", "0", "-d1"],
    ["-d2", "d1", "0"],
]


@pytest.fixture(scope="session")
def ctx3():
    return RingContext.make(["d1", "d2", "d3"], coordinates=["x", "y", "z"])


@pytest.fixture(scope="session")
def ctx_maxwell():
    return RingContext.make(["dx", "dy", "dz", "dt"], coordinates=["x", "y", "z", "t"])


def build(rows, ctx) -> OperatorMatrix:
    return OperatorMatrix(ctx, parse_matrix(rows, ctx))


@pytest.fixture(scope="session")
def divergence(ctx3):
    return build([["d1", "d2", "d3"]], ctx3)


@pytest.fixture(scope="session")
def curl(ctx3):
    return build(CURL_ROWS, ctx3)


@pytest.fixture(scope="session")
def maxwell_A(ctx_maxwell):
    return build(MAXWELL_A_ROWS, ctx_maxwell)


@pytest.fixture(scope="session")
def maxwell_B_known(ctx_maxwell):
    return build(MAXWELL_B_COLS, ctx_maxwell).transpose()


def random_polynomial(ctx, rng: random.Random, max_terms=3, max_degree=1) -> Polynomial:
    terms = {}
    for _ in range(rng.randint(0, max_terms)):
        m = [0] * ctx.ngens
        for _ in range(rng.randint(0, max_degree)):
            m[rng.randrange(ctx.ngens)] += 1
        key = tuple(m)
        terms[key] = terms.get(key, Fraction(0)) + Fraction(rng.randint(-3, 3))
    return Polynomial(ctx, {k: v for k, v in terms.items() if v})
