import numpy as np
import pytest

from projprod import Tol
from projprod.ensembles import fixture_pair


@pytest.fixture(scope="session")
def tol():
    return Tol()


@pytest.fixture()
def fx():
    """The 0.6/0.8 rank-one reference pair."""
    return fixture_pair()


@pytest.fixture()
def rng():
    return np.random.default_rng(20240817)
