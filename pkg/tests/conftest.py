import numpy as np
import pytest

from nrurn.config import ExperimentConfig
from nrurn.replacement import validate_replacement_matrix
from nrurn.weights import make_weight_function


def random_doubly_stochastic(k, rng, terms=4):
    """Convex combination of random permutation matrices"""
    weights = rng.dirichlet(np.ones(terms))
    R = np.zeros((k, k))
    for c in weights:
        R += c * np.eye(k)[rng.permutation(k)]
    return R


def make_config(weight, R, n_max, **kwargs):
    R = validate_replacement_matrix(R)
    U0 = kwargs.pop("U0", np.ones(R.k) / R.k)
    return ExperimentConfig(weight, R, U0, n_max, **kwargs)


@pytest.fixture
def rng():
    return np.random.default_rng(20190521)


@pytest.fixture
def polya_weight():
    return make_weight_function("linear", theta=1)


@pytest.fixture
def fixed_point_weight():
    #w(y) = 3 - y
    return make_weight_function("linear", theta=3)


@pytest.fixture
def lower_triangular():
    return validate_replacement_matrix([[1, 0], [0.5, 0.5]])


@pytest.fixture
def anti_diagonal():
    return validate_replacement_matrix(np.eye(4)[::-1])


@pytest.fixture
def doubly_stochastic(rng):
    return lambda k: random_doubly_stochastic(k, rng)


@pytest.fixture
def config_factory():
    return make_config
