import numpy as np
import pytest

from selberg_afe.datum import builtin, builtin_labels


@pytest.fixture(scope="session")
def zeta():
    return builtin("zeta")


@pytest.fixture(scope="session")
def delta():
    return builtin("delta")


@pytest.fixture(scope="session")
def rs():
    return builtin("rankin_selberg_delta")


@pytest.fixture(params=builtin_labels())
def any_datum(request):
    return builtin(request.param)


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)
