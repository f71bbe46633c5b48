import numpy as np
import pytest

from cdvpoly import cdv_matrix, cube, spectrum, suite_instances


@pytest.fixture(scope="session", autouse=True)
def warm_jit():
    # compile both numba kernels once so timed tests measure steady state
    spectrum(cdv_matrix(cube(3)))


@pytest.fixture(scope="session")
def suite():
    return suite_instances(seed=0, count=100)


@pytest.fixture
def rng():
    return np.random.default_rng(12345)
