import numpy as np
import pandas as pd

from nrurn.analysis.spectral import compute_b
from nrurn.asymptotics.regime import regime_of
from nrurn.errors import ConfigError
from nrurn.weights import make_weight_function

REGION_FAMILIES = ("linear", "inverse_power", "exponential")

#cells with |rho - 1/2| below this lie on the boundary
BOUNDARY_TOLERANCE = 1e-12


class RegionGrid():
    """
    rho and regime on a (theta, spectrum) grid for one weight family.

    The spectrum axis is Re(lambda_s) of R, or p for the k=2 matrix [[p, 1-p], [1-p, p]]
    whose second eigenvalue is 2p-1. rho has shape (len(theta), len(x)).
    """

    def __init__(self, family, k, params, axis, theta, x, rho, b):
        self.family = family
        self.k = k
        self.params = params
        self.axis = axis
        self.theta = theta
        self.x = x
        self.rho = rho
        self.b = b

        self.regime = np.array([[regime_of(r, BOUNDARY_TOLERANCE) for r in row] for row in rho])
        self.boundary = self._boundary_cells()
        self.polyline = self._boundary_polyline()

    def __repr__(self):
        return "region grid: {0} k={1} {2}x{3} ({4} axis)".format(
            self.family, self.k, len(self.theta), len(self.x), self.axis)

    def _boundary_cells(self):
        """Per theta the cells closest to rho = 1/2, if rho crosses 1/2 within the row"""

        boundary = np.zeros(self.rho.shape, dtype=bool)
        for i, row in enumerate(self.rho):
            d = row - 0.5
            if np.min(np.abs(d)) <= BOUNDARY_TOLERANCE or (np.min(d) < 0 < np.max(d)):
                boundary[i] = np.abs(np.abs(d) - np.min(np.abs(d))) <= BOUNDARY_TOLERANCE
        return boundary

    def _boundary_polyline(self):
        """(theta, x) where rho = 1/2, interpolated linearly along the spectrum axis"""

        points = []
        for i, row in enumerate(self.rho):
            d = row - 0.5
            for j in range(len(d)):
                if abs(d[j]) <= BOUNDARY_TOLERANCE:
                    points.append((float(self.theta[i]), float(self.x[j])))
                    break
                if j + 1 < len(d) and d[j] * d[j + 1] < 0 and abs(d[j + 1]) > BOUNDARY_TOLERANCE:
                    t = d[j] / (d[j] - d[j + 1])
                    points.append((float(self.theta[i]), float(self.x[j] + t * (self.x[j + 1] - self.x[j]))))
                    break
        return points

    def to_dataframe(self):
        T, X = np.meshgrid(self.theta, self.x, indexing="ij")
        return pd.DataFrame({
            'theta': T.ravel(),
            self.axis: X.ravel(),
            'rho': self.rho.ravel(),
            'regime': self.regime.ravel(),
            'boundary': self.boundary.ravel()
        })

    def to_dict(self):
        return {
            'family': self.family,
            'k': self.k,
            'params': dict(self.params),
            'axis': self.axis,
            'theta': self.theta.tolist(),
            self.axis: self.x.tolist(),
            'b': self.b.tolist(),
            'rho': self.rho.tolist(),
            'regime': self.regime.tolist(),
            'boundary': self.boundary.tolist(),
            'polyline': [list(p) for p in self.polyline]
        }


def region_grid(family, k, theta_range, spectrum_range, resolution=(101, 101), alpha=1.0, axis="lambda"):
    """
    Tabulate rho = max(0, 1 - b x) with b = compute_b(w_theta, k) over a grid

    :param family:         linear, inverse_power or exponential
    :param k:              number of colours
    :param theta_range:    (min, max) of theta
    :param spectrum_range: (min, max) of Re(lambda_s), or of p with axis='p'
    :param resolution:     number of grid points (theta, spectrum), or one int for both
    :param alpha:          exponent of the inverse power family
    :param axis:           'lambda' or 'p' (k=2 only, lambda = 2p-1)
    :return: RegionGrid
    """

    if family not in REGION_FAMILIES:
        raise ConfigError("region grids need a built-in family ({0})".format(", ".join(REGION_FAMILIES)), "family")
    if axis not in ("lambda", "p"):
        raise ConfigError("axis must be 'lambda' or 'p'", "axis")
    if axis == "p" and k != 2:
        raise ConfigError("the p axis is only defined for k=2", "axis")
    if k < 2:
        raise ConfigError("at least k=2 colours required", "k")

    if np.isscalar(resolution):
        resolution = (resolution, resolution)
    n_theta, n_x = int(resolution[0]), int(resolution[1])

    theta_lo, theta_hi = float(theta_range[0]), float(theta_range[1])
    x_lo, x_hi = float(spectrum_range[0]), float(spectrum_range[1])

    if n_theta < 1 or n_x < 1 or theta_lo > theta_hi or x_lo > x_hi:
        raise ConfigError("empty range", "range")
    if (theta_lo == theta_hi and n_theta > 1) or (x_lo == x_hi and n_x > 1):
        raise ConfigError("empty range: a degenerate interval needs resolution 1", "range")

    if axis == "p" and (x_lo < 0 or x_hi > 1):
        raise ConfigError("p must lie in [0, 1]", "range")
    if axis == "lambda" and (x_lo < -1 or x_hi > 1):
        raise ConfigError("Re(lambda) of a stochastic matrix lies in [-1, 1]", "range")

    theta = np.linspace(theta_lo, theta_hi, n_theta)
    x = np.linspace(x_lo, x_hi, n_x)
    lam = 2 * x - 1 if axis == "p" else x

    params = {'alpha': alpha} if family == "inverse_power" else {}

    #weight functions validate the theta range of the family
    b = np.array([compute_b(make_weight_function(family, theta=t, **params), k) for t in theta])
    rho = np.maximum(0.0, 1.0 - b[:, None] * lam[None, :])

    return RegionGrid(family, k, params, axis, theta, x, rho, b)
