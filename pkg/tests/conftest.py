import numpy as np
import pytest

from annealswarm import MkpInstance, bundled_mknap1_path, load_orlib


@pytest.fixture(scope="session")
def mknap1():
    return load_orlib(bundled_mknap1_path())


@pytest.fixture(scope="session")
def mkp6(mknap1):
    return mknap1.problems[5]


@pytest.fixture(scope="session")
def mkp7(mknap1):
    return mknap1.problems[6]


@pytest.fixture
def tiny_pair():
    """Two items, one shared unit constraint: only single-item picks fit."""
    return MkpInstance(profits=[3.0, 4.0], weights=[[1.0, 1.0]], capacities=[1.0])


@pytest.fixture
def rng():
    return np.random.default_rng(12345)
