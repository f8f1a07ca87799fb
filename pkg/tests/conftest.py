import pytest

from epsmult.ideals import maximal_ideal, minimalize
from epsmult.rings import polynomial_ring, semigroup_ring

EX3_SGENS = ((1, 0), (0, 2), (0, 3))


@pytest.fixture(scope="session")
def ex3():
    """k[x, y^2, y^3] localized at its monomial maximal ideal."""
    return semigroup_ring(EX3_SGENS, ("x", "y"))


@pytest.fixture(scope="session")
def kxy():
    return polynomial_ring(("x", "y"))


@pytest.fixture(scope="session")
def ex3_ideal(ex3):
    """I = (x^2, x*y^2), the running non-normal example."""
    return minimalize(ex3, [(2, 0), (1, 2)])


@pytest.fixture(scope="session")
def ex3_max(ex3):
    return maximal_ideal(ex3)


@pytest.fixture(scope="session")
def ex3_base(ex3):
    """J = (x, y^2), with I = x*J."""
    return minimalize(ex3, [(1, 0), (0, 2)])
