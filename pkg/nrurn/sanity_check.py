import numpy as np

#accumulated rounding allowed per step in the accounting identities
RESIDUAL_PER_STEP = 1e-9

SIMPLEX_TOLERANCE = 1e-12


def _check(residual, threshold, n, per_colour):
    """Largest residual and, if the identity fails, where the worst violation occurs"""

    residual = np.nan_to_num(np.abs(residual), nan=np.inf)
    excess = residual - threshold
    passed = bool(np.all(excess <= 0))

    location = None
    if not passed:
        index = np.unravel_index(np.argmax(excess), excess.shape)
        location = {'n': int(n[index[-2]])}
        if per_colour:
            location['colour'] = int(index[-1])
        if len(index) > 2:
            location['replica'] = int(index[0])

    return {'passed': passed, 'max_residual': float(np.max(residual)), 'location': location}


def check_accounting(n, U, N, U0, R, martingale_max, Y=None, Y_tilde=None, verbose=0):
    """
    Check the bookkeeping identities of urn realisations

    sum(U_n) = n+1, sum(N_n) = n, U_n = U_0 + N_n R and ||M_m R||^2 <= k(1+k).
    U and N have shape (..., checkpoints, k), optionally with a leading replica axis.

    :param n:       checkpoint times (checkpoints,)
    :param U:       colour masses at the checkpoints
    :param N:       colour counts at the checkpoints
    :param U0:      initial composition
    :param R:       k x k row stochastic ndarray
    :param martingale_max: realised maximum of ||M_m R||^2 per replica
    :param Y:       Y_n at the same checkpoints (optional, checked to be on the simplex)
    :param Y_tilde: Y~_n at the same checkpoints (optional, ignored at n=0)
    :return: dict with pass/fail and maximal residual per identity
    """

    n = np.asarray(n, dtype=np.int64)
    U = np.asarray(U, dtype=np.float64)
    N = np.asarray(N, dtype=np.int64)
    R = np.asarray(R, dtype=np.float64)
    k = R.shape[0]

    threshold = RESIDUAL_PER_STEP * np.maximum(n, 1)[:, None]

    checks = {}
    checks['mass'] = _check(U.sum(-1, keepdims=True) - (n + 1)[:, None], threshold, n, False)
    checks['counts'] = _check((N.sum(-1, keepdims=True) - n[:, None]).astype(np.float64), 0.0, n, False)
    checks['linear'] = _check(U - U0 - N.dot(R), threshold, n, True)

    bound = k * (1 + k)
    mm = np.atleast_1d(np.asarray(martingale_max, dtype=np.float64))
    checks['martingale'] = {
        'passed': bool(np.all(mm <= bound)),
        'max_residual': float(np.max(mm)),
        'location': {'replica': int(np.argmax(mm))} if np.any(mm > bound) else None
    }

    for name, Z, mask in (('simplex_Y', Y, n >= 0), ('simplex_Y_tilde', Y_tilde, n > 0)):
        if Z is None or not np.any(mask):
            continue
        Z = np.asarray(Z, dtype=np.float64)[..., mask, :]
        nz = n[mask]
        tol = SIMPLEX_TOLERANCE + RESIDUAL_PER_STEP * (np.maximum(nz, 1) / (nz + 1.0))[:, None]
        outside = np.maximum(-Z, Z - 1).max(-1, keepdims=True)
        off_sum = np.abs(Z.sum(-1, keepdims=True) - 1)
        checks[name] = _check(np.maximum(off_sum, outside), tol, nz, False)

    passed = all(c['passed'] for c in checks.values())

    if not passed:
        for name, c in sorted(checks.items()):
            if not c['passed']:
                print("Warning: accounting identity '{0}' violated (max residual={1:g} at {2}).".format(
                    name, c['max_residual'], c['location']))
    elif verbose:
        print("All accounting identities hold (max linear residual={0:g}).".format(checks['linear']['max_residual']))

    return {'passed': passed, 'checks': checks}


def verify_accounting(traj, verbose=0):
    """
    Check the accounting identities on every checkpoint and the final state of a trajectory

    :param traj: Trajectory
    :return: dict {'passed': bool, 'checks': {identity: {passed, max_residual, location}}}
    """

    final = traj.final
    n = np.append(traj.n, final.n)
    U = np.vstack([traj.U, final.U])
    N = np.vstack([traj.N, final.N])
    Y = np.vstack([traj.Y, final.Y])
    Y_tilde = np.vstack([traj.Y_tilde, final.Y_tilde])

    return check_accounting(n, U, N, traj.config.U0, traj.config.R.entries, traj.martingale_max,
                            Y=Y, Y_tilde=Y_tilde, verbose=verbose)
