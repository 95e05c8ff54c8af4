import numpy as np
import pytest

from factorymimo import ChannelModelParams, HallGeometry


@pytest.fixture(scope="session")
def hall():
    return HallGeometry(100.0, 100.0, 6.0, 1.5)


@pytest.fixture(scope="session")
def params():
    return ChannelModelParams(3.5, 3.19, 7.56)


@pytest.fixture
def rng():
    return np.random.default_rng(20240901)
