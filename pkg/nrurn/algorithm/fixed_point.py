import numpy as np

import nrurn.monitor.progress as pr
from nrurn.analysis.drift import F_map
from nrurn.dynamics.kernel import selection_probabilities


class picardIteration():
    """Find a fixed point of a map on the simplex by iterating y <- F(y)"""

    def __init__(self, maxit=10000, epsilon=1e-12, damping=0.5, verbose=False):

        self.maxit = maxit
        self.epsilon = epsilon
        self.damping = damping
        self.progress = pr.Progress("Picard iteration", verbose=verbose)

    def __repr__(self):
        rep_str = "Picard iteration (damping={0} when leaving the simplex)\n".format(self.damping)
        rep_str += "convergence criteria: maxit={0} epsilon={1}\n".format(self.maxit, self.epsilon)
        return rep_str

    def minimize(self, F, y):
        """
        Iterate F starting from y until ||F(y) - y|| <= epsilon

        :param F: map from the simplex into itself
        :param y: starting point
        :return: last iterate and status dict
        """

        ret = {
            "code": 2,
            "message": "Reached maximum number of iterations",
            "num_iterations": self.maxit
        }

        y = np.array(y, dtype=np.float64)
        for i in range(self.maxit):

            Fy = F(y)
            residual = np.linalg.norm(Fy - y)

            if not np.all(np.isfinite(Fy)):
                ret = {
                    "code": -1,
                    "message": "Iterate is not finite.",
                    "num_iterations": i
                }
                return y, ret

            self.progress.log_progress(i + 1, residual=residual)

            if residual <= self.epsilon:
                ret = {
                    "code": 0,
                    "message": "Stopping condition (||F(y)-y|| <= {0}) successfull.".format(self.epsilon),
                    "num_iterations": i
                }
                return y, ret

            if np.any(Fy < 0) or np.abs(Fy.sum() - 1) > 1e-12:
                Fy = (1 - self.damping) * y + self.damping * Fy
                Fy = np.clip(Fy, 0, None)
                Fy /= Fy.sum()

            y = Fy

        return y, ret

    def get_parameters(self):
        parameters = {}

        parameters['convergence'] = {}
        parameters['convergence']['maxit'] = self.maxit
        parameters['convergence']['epsilon'] = self.epsilon
        parameters['damping'] = self.damping

        return parameters


def solve_fixed_point(w, R, tol=1e-12, max_iter=10000, damping=0.5, verbose=False):
    """
    Fixed point y* = F(y*) by Picard iteration from the uniform point,
    and the matching count proportion y~* = w(y*)/S_w(y*).

    :param w: WeightFunction
    :param R: ReplacementMatrix or row stochastic ndarray
    :return: dict with y_star, y_tilde_star, converged, iterations, residual and the status dict
    """

    k = getattr(R, "k", None) or np.asarray(R).shape[0]
    solver = picardIteration(maxit=max_iter, epsilon=tol, damping=damping, verbose=verbose)

    y, ret = solver.minimize(lambda y: F_map(y, w, R), np.ones(k) / k)

    residual = float(np.linalg.norm(F_map(y, w, R) - y))
    if verbose:
        print(ret['message'])

    return {
        'y_star': y,
        'y_tilde_star': selection_probabilities(y, w),
        'converged': ret['code'] == 0,
        'iterations': ret['num_iterations'],
        'residual': residual,
        'ret': ret
    }
