import numpy as np
from numpy.testing import assert_allclose

from nrurn.algorithm.fixed_point import picardIteration, solve_fixed_point
from nrurn.algorithm.ode import integrate_ode
from nrurn.weights import make_weight_function


def test_fixed_point_doubly_stochastic(doubly_stochastic):
    w = make_weight_function("exponential", theta=0.3)
    for k in (2, 3, 6):
        result = solve_fixed_point(w, doubly_stochastic(k))
        assert result['converged']
        assert_allclose(result['y_star'], np.ones(k) / k, atol=1e-12)


def test_fixed_point_lower_triangular(fixed_point_weight, lower_triangular):
    result = solve_fixed_point(fixed_point_weight, lower_triangular, tol=1e-12)
    assert result['converged']
    assert result['ret']['code'] == 0
    assert_allclose(result['y_star'], [8 / 11., 3 / 11.], atol=1e-12)
    assert_allclose(result['y_tilde_star'], [5 / 11., 6 / 11.], atol=1e-12)
    assert_allclose(result['y_tilde_star'].dot(lower_triangular.entries), result['y_star'], atol=1e-12)


def test_fixed_point_contraction_rate(fixed_point_weight):
    q = 2 * 1.0 / (np.sqrt(2) * 2.0)
    result = solve_fixed_point(fixed_point_weight, np.eye(2), tol=1e-12)
    assert result['converged']
    assert result['iterations'] <= np.ceil(np.log(1e-12) / np.log(q))


def test_fixed_point_max_iterations(fixed_point_weight, lower_triangular):
    result = solve_fixed_point(fixed_point_weight, lower_triangular, tol=0.0, max_iter=3)
    assert not result['converged']
    assert result['ret']['code'] == 2
    assert np.isfinite(result['residual'])


def test_picard_damping_keeps_simplex():
    #the undamped map leaves the simplex
    solver = picardIteration(maxit=200, epsilon=1e-10, damping=0.5)
    y, ret = solver.minimize(lambda y: np.array([1.5 - 2 * y[0], 2 * y[0] - 0.5]), np.array([0.8, 0.2]))
    assert ret["code"] == 2
    assert np.all(y >= 0)
    assert abs(y.sum() - 1) < 1e-12
    assert 'damping' in solver.get_parameters()


def test_ode_reaches_fixed_point(fixed_point_weight, lower_triangular):
    result = integrate_ode(fixed_point_weight, lower_triangular, [0.5, 0.5])
    assert result['converged']
    assert_allclose(result['y_end'], [8 / 11., 3 / 11.], atol=1e-7)
    assert result['y'].shape == (201, 2)
    assert_allclose(result['y'].sum(1), 1.0, atol=1e-8)


def test_ode_stable_uniform(doubly_stochastic):
    w = make_weight_function("inverse_power", theta=1, alpha=1)
    result = integrate_ode(w, doubly_stochastic(3), [0.6, 0.3, 0.1])
    assert_allclose(result['y_end'], np.ones(3) / 3, atol=1e-7)
