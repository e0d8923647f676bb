# coding=utf-8
import numpy as np
import pytest

from pygmreduce import GaussianComponent, GaussianMixture, QuadSpec
from pygmreduce import _fixtures


def random_component(rng, dim, weight=None, spread=1.5):
    """A component with covariance eigenvalues of at least ``0.5``.
    """
    a = rng.normal(size=(dim, dim))
    cov = 0.3 * a.dot(a.T) + 0.5 * np.eye(dim)
    mean = rng.uniform(-spread, spread, size=dim)
    if weight is None:
        weight = rng.uniform(0.1, 1.0)
    return GaussianComponent(weight, mean, cov)


def random_pair(rng, dim):
    """Two components whose weights sum to one.
    """
    a = rng.uniform(0.1, 0.9)
    return random_component(rng, dim, a), random_component(rng, dim, 1.0 - a)


def mixture(*components):
    """Builds a mixture from ``(weight, mean, cov)`` tuples.
    """
    return GaussianMixture(
        GaussianComponent(w, mean, cov) for w, mean, cov in components)


@pytest.fixture
def table1():
    return _fixtures.table1()


@pytest.fixture
def table3():
    return _fixtures.table3()


@pytest.fixture
def table1_quad(table1):
    return QuadSpec.for_mixture(table1)


@pytest.fixture
def table3_quad(table3):
    return QuadSpec.for_mixture(table3)


@pytest.fixture
def rng():
    return np.random.default_rng(20211)


@pytest.fixture
def standard_normal():
    return mixture((1.0, [0.0], [[1.0]]))
