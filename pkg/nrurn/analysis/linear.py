import numpy as np
import scipy.linalg

from nrurn.errors import WeightFunctionError


def linear_drift_matrix(theta, k):
    """
    For w(y) = theta - y the selection distribution on the simplex is linear, w(y)/S_w(y) = yA
    with A = (theta J - I)/(k theta - 1), so that h(y) = y(AR - I).

    :param theta: parameter of the linear weight function (theta >= 1)
    :param k:     number of colours
    :return: k x k row stochastic matrix A
    """

    if theta < 1:
        raise WeightFunctionError(u"θ ≥ 1 required for family 'linear' (got {0})".format(theta), "weight.theta")

    return (theta * np.ones((k, k)) - np.eye(k)) / (k * theta - 1.0)


def linear_equilibrium(theta, R):
    """
    Equilibrium of the linear drift: the stationary distribution of the stochastic matrix AR

    :param theta: parameter of the linear weight function
    :param R:     ReplacementMatrix or row stochastic ndarray
    :return: y* on the simplex with y* A R = y*
    """

    R = np.asarray(getattr(R, "entries", R), dtype=np.float64)
    k = R.shape[0]
    P = linear_drift_matrix(theta, k).dot(R)

    #y (P - I) = 0 together with sum(y) = 1
    lhs = np.vstack([(P - np.eye(k)).T, np.ones((1, k))])
    rhs = np.zeros(k + 1)
    rhs[-1] = 1.0
    y, _, _, _ = scipy.linalg.lstsq(lhs, rhs)

    return y
