import os
import sys

import numpy as np
import pytest

sys.path.insert(0, os.path.join(os.path.dirname(__file__), '..', 'scripts'))

import instances  # noqa: E402
from uea_hopf import UEA  # noqa: E402

SPECS = os.path.join(os.path.dirname(__file__), '..', 'specs')


@pytest.fixture
def rng():
    return np.random.default_rng(2024)


@pytest.fixture
def heisenberg():
    return instances.heisenberg()


@pytest.fixture
def H_heis(heisenberg):
    return UEA(heisenberg)


@pytest.fixture
def std_sd():
    return instances.standard_symplectic()


@pytest.fixture
def borel_sd():
    return instances.borel_symplectic()


@pytest.fixture
def heis_line_sd():
    return instances.heisenberg_line_symplectic()


@pytest.fixture
def specs_dir():
    return SPECS
