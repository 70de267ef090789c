import numpy as np
import pytest

from sknormalform.nilpotent_algebra import NilpotentSpec


@pytest.fixture
def rng():
    return np.random.default_rng(1234)


@pytest.fixture(scope='session')
def spec2():
    return NilpotentSpec((2, ))


@pytest.fixture(scope='session')
def spec3():
    return NilpotentSpec((3, ))


@pytest.fixture(scope='session')
def spec23():
    return NilpotentSpec((2, 3))


@pytest.fixture(scope='session')
def conjugated_spec():
    return NilpotentSpec((2, ), [[1, 0], [1, 1]])
