import numpy as np
from numpy.testing import assert_allclose, assert_array_equal

import pytest

from nrurn.analysis.spectral import compute_b
from nrurn.errors import ConfigError
from nrurn.regions import region_grid
from nrurn.weights import make_weight_function


def test_linear_boundary_on_grid_nodes():
    #rho = 1/2 exactly where 2p - 1 = (1 - 2 theta)/2
    grid = region_grid("linear", 2, (1.0, 1.5), (0.0, 1.0), resolution=(3, 9), axis="p")

    expected = [2, 1, 0]
    for i, j in enumerate(expected):
        assert_array_equal(np.flatnonzero(grid.boundary[i]), [j])
        assert_allclose(grid.rho[i, j], 0.5, atol=1e-12)
        assert grid.regime[i, j] == "clt_sqrt_n_over_log"

    assert_allclose(grid.polyline, [(1.0, 0.25), (1.25, 0.125), (1.5, 0.0)], atol=1e-12)


def test_linear_boundary_cell():
    grid = region_grid("linear", 2, (1.0, 1.0), (-1.0, 1.0), resolution=(1, 5))
    assert_allclose(grid.x[1], -0.5)
    assert_allclose(grid.rho[0, 1], 0.5)
    assert grid.boundary[0, 1]


def test_near_boundary_cell_labelled_consistently():
    #theta = 1, k = 2: b = -1 and rho = 1 + lambda = 1/2 + 1e-10
    grid = region_grid("linear", 2, (1.0, 1.0), (-0.5 + 1e-10, -0.5 + 1e-10), resolution=1)
    assert_allclose(grid.rho[0, 0], 0.5 + 1e-10, rtol=1e-14)
    assert not grid.boundary[0, 0]
    assert grid.regime[0, 0] == "clt_sqrt_n"


def test_boundary_regime_only_on_boundary_cells():
    grid = region_grid("linear", 2, (1.0, 3.0), (-1.0, 1.0), resolution=(41, 161))
    assert_array_equal(grid.boundary[grid.regime == "clt_sqrt_n_over_log"], True)


def test_grid_is_composition_of_b_and_rho():
    grid = region_grid("inverse_power", 3, (0.5, 2.0), (-1.0, 1.0), resolution=(7, 11), alpha=1.0)
    for i, theta in enumerate(grid.theta):
        b = compute_b(make_weight_function("inverse_power", theta=theta, alpha=1.0), 3)
        assert_allclose(grid.rho[i], np.maximum(0, 1 - b * grid.x), atol=1e-12)
        assert_allclose(grid.rho[i], np.maximum(0, 1 + grid.x / (3 * theta + 1)), atol=1e-12)


def test_exponential_boundary():
    grid = region_grid("exponential", 2, (0.5, 0.5), (-1.0, 0.0), resolution=(1, 5))
    assert_allclose(grid.x[2], -0.5)
    assert_allclose(grid.rho[0, 2], 0.5, atol=1e-12)


def test_grid_tables():
    grid = region_grid("linear", 2, (1.0, 2.0), (0.0, 1.0), resolution=(3, 5), axis="p")
    df = grid.to_dataframe()
    assert list(df.columns) == ['theta', 'p', 'rho', 'regime', 'boundary']
    assert len(df) == 15

    record = grid.to_dict()
    assert record['axis'] == "p"
    assert len(record['rho']) == 3


@pytest.mark.parametrize("kwargs", [
    {'theta_range': (2.0, 1.0), 'spectrum_range': (-1.0, 1.0)},
    {'theta_range': (1.0, 2.0), 'spectrum_range': (0.5, 0.5)},
    {'theta_range': (1.0, 2.0), 'spectrum_range': (-2.0, 1.0)},
])
def test_invalid_ranges(kwargs):
    with pytest.raises(ConfigError):
        region_grid("linear", 2, resolution=(5, 5), **kwargs)


def test_linear_theta_domain():
    with pytest.raises(ConfigError, match=u"θ ≥ 1"):
        region_grid("linear", 2, (0.5, 2.0), (-1.0, 1.0))


def test_p_axis_needs_two_colours():
    with pytest.raises(ConfigError):
        region_grid("linear", 3, (1.0, 2.0), (0.0, 1.0), axis="p")
