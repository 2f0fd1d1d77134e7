import numpy as np
import pytest
from hypothesis import HealthCheck, settings

from rbfourier.fourier import fourier_transform
from rbfourier.reps import builtin_irreps, ideal_qubit_gateset
from rbfourier.scenarios import proctor_gateset

settings.register_profile("default", max_examples=25, deadline=None,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")


@pytest.fixture(scope="session")
def s4():
    return builtin_irreps("S4")


@pytest.fixture(scope="session")
def csu23():
    return builtin_irreps("CSU23")


@pytest.fixture(scope="session")
def ideal(s4):
    return ideal_qubit_gateset(s4.table)


@pytest.fixture(scope="session")
def ideal_spec(s4, ideal):
    return fourier_transform(ideal, s4)


@pytest.fixture(scope="session")
def proctor(s4):
    phi, ideal, reg = proctor_gateset(0.1)
    return phi


@pytest.fixture
def rng():
    return np.random.default_rng(12345)
