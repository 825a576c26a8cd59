import numpy as np

from nrurn.analysis.spectral import compute_b
from nrurn.dynamics.kernel import selection_probabilities


def _entries(R):
    return np.asarray(getattr(R, "entries", R), dtype=np.float64)


def F_map(y, w, R):
    """F(y) = w(y) R / S_w(y), the mean composition added by the next draw"""
    return selection_probabilities(np.asarray(y, dtype=np.float64), w).dot(_entries(R))


def drift_h(y, w, R):
    """
    Mean field drift of the colour proportions Y_n

    :param y: composition (k,) or stack of compositions (m, k)
    :param w: WeightFunction
    :param R: ReplacementMatrix or row stochastic ndarray
    :return: h(y) = F(y) - y
    """
    return F_map(y, w, R) - np.asarray(y, dtype=np.float64)


def drift_h_tilde(y_tilde, w, R):
    """
    Mean field drift of the colour count proportions: w(yR)/S_w(yR) - y
    """
    y_tilde = np.asarray(y_tilde, dtype=np.float64)
    return selection_probabilities(y_tilde.dot(_entries(R)), w) - y_tilde


def jacobian(y, w, R):
    """
    Analytic Jacobian of drift_h at y in the row convention D[i,j] = dh_j/dy_i

    dF_j/dy_i = w'(y_i)/S_w(y) * (R_ij - F_j(y))
    """
    y = np.asarray(y, dtype=np.float64)
    R = _entries(R)
    k = len(y)

    S = np.sum(w(y))
    F = F_map(y, w, R)
    return (w.deriv1(y) / S)[:, None] * (R - F[None, :]) - np.eye(k)


def jacobian_uniform(w, R, b=None):
    """Jacobian at the uniform point of a doubly stochastic R: bR - (b/k)J - I"""
    R = _entries(R)
    k = R.shape[0]
    if b is None:
        b = compute_b(w, k)
    return b * R - (b / k) * np.ones((k, k)) - np.eye(k)
