import numpy as np


class numDiff():
    """Debug Jacobians with numerical differentiation"""

    def __init__(self, epsilon=1e-6, verbose=False):
        self.epsilon = epsilon
        self.verbose = verbose

    def jacobian(self, fun, y):
        """
        Central difference Jacobian of fun at y in the row convention D[i,j] = dfun_j/dy_i

        :param fun: map R^k -> R^k
        :param y:   point of evaluation
        :return: k x k ndarray
        """

        y = np.asarray(y, dtype=np.float64)
        k = len(y)
        D = np.empty((k, len(fun(y))))

        for i in range(k):
            yA = np.copy(y)
            yB = np.copy(y)
            yA[i] -= self.epsilon
            yB[i] += self.epsilon
            D[i] = (fun(yB) - fun(yA)) / (2 * self.epsilon)

        return D

    def compare(self, analytic, fun, y):
        """
        Compare an analytic Jacobian to the numerical one

        :return: maximal absolute deviation
        """

        numeric = self.jacobian(fun, y)
        delta = np.abs(numeric - np.asarray(analytic))

        if self.verbose:
            print("Comparing analytical Jacobian to numerical Jacobian with stepsize 2 * {0}".format(self.epsilon))
            print("Pos                 D             numD            DeltaD")
            for i, j in zip(*np.unravel_index(np.argsort(-delta, axis=None)[:10], delta.shape)):
                print("i={0:<3} j={1:<3} {2:15g} {3:15g} {4:15g}".format(i, j, analytic[i, j], numeric[i, j], delta[i, j]))

        return float(np.max(delta))
