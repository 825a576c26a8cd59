import numpy as np
import scipy.integrate

from nrurn.analysis.drift import drift_h


def integrate_ode(w, R, y0, t_max=100.0, tol=1e-8, method="RK45", n_eval=201):
    """
    Integrate the mean field ODE dy/dt = h(y) from y0

    :param w:      WeightFunction
    :param R:      ReplacementMatrix or row stochastic ndarray
    :param y0:     starting composition
    :param t_max:  integration horizon
    :param tol:    ||h(y_end)|| below which the endpoint counts as an equilibrium
    :param method: solve_ivp method
    :return: dict with t, y(t), y_end, converged and the status dict
    """

    y0 = np.asarray(y0, dtype=np.float64)
    t_eval = np.linspace(0, t_max, n_eval)

    sol = scipy.integrate.solve_ivp(lambda t, y: drift_h(y, w, R), (0, t_max), y0,
                                    method=method, t_eval=t_eval, rtol=1e-10, atol=1e-12)

    if not sol.success:
        ret = {"code": -1, "message": sol.message, "num_iterations": int(sol.nfev)}
        return {'t': sol.t, 'y': sol.y.T, 'y_end': sol.y[:, -1] if sol.y.size else y0,
                'converged': False, 'residual': np.nan, 'ret': ret}

    y_end = sol.y[:, -1]
    residual = float(np.linalg.norm(drift_h(y_end, w, R)))
    converged = residual <= tol

    ret = {
        "code": 0 if converged else 2,
        "message": "Reached equilibrium (||h(y)|| <= {0}).".format(tol) if converged
        else "Reached t_max before equilibrium.",
        "num_iterations": int(sol.nfev)
    }

    return {'t': sol.t, 'y': sol.y.T, 'y_end': y_end, 'converged': converged, 'residual': residual, 'ret': ret}
