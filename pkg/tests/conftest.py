import numpy as np
import pytest

from riemannqc.zeros import embedded_zeros, first_zeros


@pytest.fixture(scope="session")
def zeros100():
    return embedded_zeros()


@pytest.fixture(scope="session")
def zeros16k():
    return first_zeros(1 << 14)


@pytest.fixture
def rng():
    return np.random.default_rng(1234)


@pytest.fixture(scope="session")
def zeros64k():
    return first_zeros(1 << 16)
