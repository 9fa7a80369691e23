import numpy as np
import pytest

from hhbounds.cheb import make_system
from hhbounds.functions import Interval, make_function


@pytest.fixture
def t2():
    return make_function("poly", (0, 0, 1))


@pytest.fixture
def one():
    return make_function("const", (1,))


@pytest.fixture
def lin01():
    return make_system("linear", domain=Interval(0.0, 1.0))


@pytest.fixture
def exp_sys():
    return make_system("exp")


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)
