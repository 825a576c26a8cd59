import numpy as np
from numpy.testing import assert_allclose, assert_array_equal

import pytest
import scipy.stats

from nrurn.dynamics import UrnState, initial_state, selection_distribution, step, run_trajectory
from nrurn.dynamics.kernel import draw_colours, replica_generator
from nrurn.errors import DegenerateWeightError
from nrurn.sanity_check import verify_accounting
from nrurn.weights import make_weight_function


def test_selection_symmetric():
    w = make_weight_function("exponential", theta=0.7)
    assert_allclose(selection_distribution([0.5, 0.5], w), [0.5, 0.5])


def test_selection_linear(polya_weight):
    assert_allclose(selection_distribution([0.25, 0.75], polya_weight), [0.75, 0.25])


def test_selection_constant_is_uniform(rng):
    w = make_weight_function("constant", c=2)
    Y = rng.dirichlet(np.ones(5), size=10)
    assert_allclose(selection_distribution(Y, w), np.full((10, 5), 0.2))


def test_selection_degenerate():
    #w(1) = 0 for theta = 1; (1, 1) lies off the simplex and sums to zero weight
    w = make_weight_function("linear", theta=1)
    with pytest.raises(DegenerateWeightError, match="degenerate weight"):
        selection_distribution([1.0, 1.0], w)


def test_step_polya_increment(polya_weight):
    state = initial_state([0.5, 0.5])
    new = step(state, polya_weight, np.eye(2), draw=0)
    assert_array_equal(new.U, [1.5, 0.5])
    assert_array_equal(new.N, [1, 0])
    assert new.n == 1
    assert new.last_draw == 0


def test_step_hand_accounting(polya_weight):
    R = np.array([[1, 0], [0.5, 0.5]])
    state = UrnState(1, np.array([1.5, 0.5]), np.array([1, 0]), 0)
    new = step(state, polya_weight, R, draw=1)
    assert_array_equal(new.U, [2.0, 1.0])
    assert new.U.sum() == 3
    assert_array_equal(new.N, [1, 1])


def test_step_uniform_replacement_is_deterministic():
    k = 3
    w = make_weight_function("inverse_power", theta=1, alpha=2)
    U0 = np.array([0.2, 0.3, 0.5])
    state = initial_state(U0)
    rng = np.random.default_rng(1)
    for _ in range(10):
        state = step(state, w, np.ones((k, k)) / k, rng=rng)
    assert_allclose(state.U, U0 + 10.0 / k, rtol=1e-14)


def test_state_proportions():
    state = UrnState(3, np.array([3.0, 1.0]), np.array([2, 1]), 1)
    assert_allclose(state.Y, [0.75, 0.25])
    assert_allclose(state.Y_tilde, [2 / 3., 1 / 3.])
    assert np.all(np.isnan(initial_state([0.5, 0.5]).Y_tilde))


def test_draw_frequencies():
    Y = np.array([0.1, 0.2, 0.3, 0.4])
    p = selection_distribution(Y, make_weight_function("inverse_power", theta=0.25, alpha=2))
    assert np.all(np.diff(p) < 0)

    m = 10 ** 6
    z = draw_colours(p, replica_generator(42, 0).random(m))
    observed = np.bincount(z, minlength=4)
    assert observed.sum() == m
    assert scipy.stats.chisquare(observed, m * p).pvalue > 1e-3


def test_generator_streams():
    a = replica_generator(7, 3).random(5)
    assert_array_equal(a, replica_generator(7, 3).random(5))
    assert not np.array_equal(a, replica_generator(7, 4).random(5))
    assert not np.array_equal(a, replica_generator(8, 3).random(5))


def test_trajectory_uniform_replacement_exact(config_factory):
    w = make_weight_function("exponential", theta=1)
    config = config_factory(w, np.ones((4, 4)) / 4, 100)
    traj = run_trajectory(config)
    assert_array_equal(traj.final.Y, np.full(4, 0.25))
    assert_array_equal(traj.Y[-1], np.full(4, 0.25))


def test_trajectory_n_max_zero(config_factory, polya_weight):
    config = config_factory(polya_weight, np.eye(2), 0)
    traj = run_trajectory(config)
    assert len(traj.checkpoints) == 1
    n, Y, Y_tilde = traj.checkpoints[0]
    assert n == 0
    assert_array_equal(Y, [0.5, 0.5])
    assert np.all(np.isnan(Y_tilde))
    assert traj.final.last_draw is None


def test_trajectory_deterministic(config_factory, fixed_point_weight, lower_triangular):
    config = config_factory(fixed_point_weight, lower_triangular.entries, 2000, seed=11)
    a = run_trajectory(config, replica=5)
    b = run_trajectory(config, replica=5)
    assert_array_equal(a.Y, b.Y)
    assert_array_equal(a.N, b.N)
    assert a.final.last_draw == b.final.last_draw

    c = run_trajectory(config, replica=6)
    assert not np.array_equal(a.N[-1], c.N[-1])


def test_trajectory_accounting_random_config(config_factory, rng):
    k = 3
    R = rng.dirichlet(np.ones(k), size=k)
    U0 = rng.dirichlet(np.ones(k))
    config = config_factory(make_weight_function("linear", theta=2), R, 10000, U0=U0, seed=3)

    traj = run_trajectory(config)
    result = verify_accounting(traj)

    assert result['passed']
    assert result['checks']['linear']['max_residual'] <= 1e-6
    assert traj.martingale_max <= k * (1 + k)


def test_trajectory_dataframe(config_factory, polya_weight):
    config = config_factory(polya_weight, np.eye(2), 50)
    df = run_trajectory(config).to_dataframe()
    assert list(df.columns) == ['n', 'Y_1', 'Y_2', 'Ytilde_1', 'Ytilde_2']
    assert df['n'].iloc[-1] == 50
    assert_allclose(df[['Y_1', 'Y_2']].sum(1), 1.0, atol=1e-12)
