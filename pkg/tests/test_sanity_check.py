import numpy as np

from nrurn.dynamics import run_trajectory
from nrurn.sanity_check import check_accounting, verify_accounting
from nrurn.weights import make_weight_function


def _trajectory(config_factory):
    w = make_weight_function("inverse_power", theta=1, alpha=1)
    R = [[0.2, 0.3, 0.5], [0.5, 0.2, 0.3], [0.3, 0.5, 0.2]]
    return run_trajectory(config_factory(w, R, 500, seed=5))


def test_valid_trajectory_passes(config_factory):
    result = verify_accounting(_trajectory(config_factory))
    assert result['passed']
    assert set(result['checks']) == {'mass', 'counts', 'linear', 'martingale', 'simplex_Y', 'simplex_Y_tilde'}
    assert all(c['location'] is None for c in result['checks'].values())


def test_corrupted_masses_are_located(config_factory):
    traj = _trajectory(config_factory)
    traj.U[4, 2] += 0.5

    result = verify_accounting(traj)

    assert not result['passed']
    linear = result['checks']['linear']
    assert not linear['passed']
    assert linear['location'] == {'n': int(traj.n[4]), 'colour': 2}
    assert abs(linear['max_residual'] - 0.5) < 1e-9
    assert not result['checks']['mass']['passed']
    assert result['checks']['counts']['passed']


def test_corrupted_counts(config_factory):
    traj = _trajectory(config_factory)
    traj.N[-1, 0] += 1

    result = verify_accounting(traj)

    assert not result['checks']['counts']['passed']
    assert result['checks']['counts']['location']['n'] == int(traj.n[-1])


def test_martingale_bound(config_factory):
    traj = _trajectory(config_factory)
    traj.martingale_max = 13.0
    assert not verify_accounting(traj)['checks']['martingale']['passed']


def test_replica_axis_located():
    n = np.array([0, 1, 2])
    U0 = np.array([0.5, 0.5])
    R = np.eye(2)
    N = np.array([[[0, 0], [1, 0], [1, 1]], [[0, 0], [0, 1], [0, 2]]])
    U = U0 + N.astype(np.float64)
    U[1, 2, 0] -= 1e-3

    result = check_accounting(n, U, N, U0, R, np.zeros(2))

    assert result['checks']['linear']['location'] == {'n': 2, 'colour': 0, 'replica': 1}
