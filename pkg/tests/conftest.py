import numpy as np
import pytest

from submodstream.core import as_points
from submodstream.objectives import Coverage, LogDet, RbfKernel


@pytest.fixture
def rng():
    return np.random.default_rng(1234)


def clustered(n, d, seed, centers=4, scale=0.1):
    r = np.random.default_rng(seed)
    mu = r.uniform(0, 1, size=(centers, d))
    X = mu[r.integers(0, centers, size=n)] + scale * r.standard_normal((n, d))
    return as_points(X)


@pytest.fixture
def small_points():
    return clustered(60, 3, seed=7)


@pytest.fixture
def logdet3():
    return LogDet(RbfKernel.for_stream(3), 1.0)


def coverage_points(n, universe, seed, p=0.3):
    r = np.random.default_rng(seed)
    X = (r.random((n, universe)) < p).astype(float)
    X[X.sum(axis=1) == 0, 0] = 1.0
    w = r.uniform(0.1, 1.0, size=universe)
    return as_points(X), Coverage(w)
