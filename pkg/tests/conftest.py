import pytest

from probdigits import Distribution


@pytest.fixture
def geo():
    return Distribution.geometric(0.5)


@pytest.fixture
def poi():
    return Distribution.poisson(1.0)


@pytest.fixture
def zet():
    return Distribution.zeta(2.0)


@pytest.fixture(params=["geometric", "poisson", "zeta"])
def family_dist(request):
    return {
        "geometric": Distribution.geometric(0.5),
        "poisson": Distribution.poisson(1.0),
        "zeta": Distribution.zeta(2.0),
    }[request.param]
