import numpy as np

from nrurn.errors import WeightFunctionError

FAMILIES = ("linear", "inverse_power", "exponential", "constant", "custom")

#number of points of the validation grid on [0,1]
GRID_SIZE = 1024

#step of the central finite difference used when no analytic derivative is available
FD_STEP = 1e-6


class WeightFunction(object):
    """
    Non-increasing weight function w on [0,1] driving the colour selection.

    Outside of [0,1] w is extended constantly: w(x)=w(0) for x<=0 and w(x)=w(1) for x>=1,
    and the derivatives vanish there. All methods are vectorised over numpy arrays.

    Instances are immutable and picklable (no closures for the built-in families and
    tabulated custom functions), so they can be shipped to worker processes.
    """

    def __init__(self, family, params, fun=None, deriv1=None, deriv2=None):
        self.family = family
        self.params = dict(params)

        self._fun = fun
        self._deriv1 = deriv1
        self._deriv2 = deriv2

        if family == "custom" and "x" in self.params:
            self._table_x = np.asarray(self.params["x"], dtype=np.float64)
            self._table_w = np.asarray(self.params["w"], dtype=np.float64)

        #derivative from finite differences for custom functions without analytic derivative
        self.approximate = family == "custom" and deriv1 is None

        grid = np.linspace(0, 1, GRID_SIZE)
        self.lipschitz = self._lipschitz_bound(grid)
        self.convex = self._is_convex(grid)

    def __repr__(self):
        par = " ".join("{0}={1}".format(k, v) for k, v in sorted(self.params.items()) if k not in ("x", "w"))
        return "w: {0}({1}) M={2:g} convex={3}".format(self.family, par, self.lipschitz, self.convex)

    def __call__(self, x):
        return self._value(np.clip(np.asarray(x, dtype=np.float64), 0.0, 1.0))

    def deriv1(self, x):
        x = np.asarray(x, dtype=np.float64)
        inside = (x >= 0) & (x <= 1)
        return np.where(inside, self._slope(np.clip(x, 0.0, 1.0)), 0.0)

    def deriv2(self, x):
        x = np.asarray(x, dtype=np.float64)
        xc = np.clip(x, 0.0, 1.0)
        inside = (x >= 0) & (x <= 1)

        if self.family == "linear" or self.family == "constant":
            d2 = np.zeros_like(xc)
        elif self.family == "inverse_power":
            theta, alpha = self.params["theta"], self.params["alpha"]
            d2 = alpha * (alpha + 1) * np.power(theta + xc, -alpha - 2)
        elif self.family == "exponential":
            theta = self.params["theta"]
            d2 = np.exp(-xc / theta) / theta ** 2
        elif self._deriv2 is not None:
            d2 = np.asarray(self._deriv2(xc), dtype=np.float64)
        else:
            return None

        return np.where(inside, d2, 0.0)

    def _value(self, x):
        if self.family == "linear":
            return self.params["theta"] - x
        if self.family == "inverse_power":
            return np.power(self.params["theta"] + x, -self.params["alpha"])
        if self.family == "exponential":
            return np.exp(-x / self.params["theta"])
        if self.family == "constant":
            return np.full_like(x, self.params["c"])
        if self._fun is not None:
            return np.asarray(self._fun(x), dtype=np.float64)
        return np.interp(x, self._table_x, self._table_w)

    def _slope(self, x):
        if self.family == "linear":
            return np.full_like(x, -1.0)
        if self.family == "inverse_power":
            theta, alpha = self.params["theta"], self.params["alpha"]
            return -alpha * np.power(theta + x, -alpha - 1)
        if self.family == "exponential":
            theta = self.params["theta"]
            return -np.exp(-x / theta) / theta
        if self.family == "constant":
            return np.zeros_like(x)
        if self._deriv1 is not None:
            return np.asarray(self._deriv1(x), dtype=np.float64)

        #one-sided at the ends of [0,1]
        lo = np.clip(x - FD_STEP, 0.0, 1.0)
        hi = np.clip(x + FD_STEP, 0.0, 1.0)
        return (self._value(hi) - self._value(lo)) / (hi - lo)

    def _lipschitz_bound(self, grid):
        if self.family == "linear":
            return 1.0
        if self.family == "inverse_power":
            return self.params["alpha"] * self.params["theta"] ** (-self.params["alpha"] - 1)
        if self.family == "exponential":
            return 1.0 / self.params["theta"]
        if self.family == "constant":
            return 0.0
        if "lipschitz" in self.params:
            return float(self.params["lipschitz"])
        return float(np.max(np.abs(self._slope(grid))))

    def _is_convex(self, grid):
        if self.family != "custom":
            return True
        values = self._value(grid)
        second_diff = values[2:] - 2 * values[1:-1] + values[:-2]
        return bool(np.all(second_diff >= -1e-12 * max(1.0, np.max(np.abs(values)))))

    def get_parameters(self):
        parameters = {'family': self.family}
        for key, value in self.params.items():
            if key in ("x", "w"):
                parameters[key] = [float(v) for v in value]
            else:
                parameters[key] = value
        return parameters


def _require_positive(name, value, family):
    if value is None:
        raise WeightFunctionError("parameter {0} required for family '{1}'".format(name, family), "weight." + name)
    if not np.isfinite(value) or value <= 0:
        raise WeightFunctionError("{0} > 0 required for family '{1}'".format(name, family), "weight." + name)


def make_weight_function(family, theta=None, alpha=None, c=None, x=None, w=None,
                         fun=None, deriv1=None, deriv2=None, lipschitz=None):
    """
    Build a validated weight function

    :param family:  one of linear, inverse_power, exponential, constant, custom
    :param theta:   linear: w(y)=theta-y (theta>=1); inverse_power: (theta+x)^-alpha; exponential: exp(-x/theta)
    :param alpha:   exponent of the inverse power law
    :param c:       value of the constant weight function
    :param x, w:    tabulated custom weight function (piecewise linear interpolation)
    :param fun:     custom weight function as a vectorised callable
    :param deriv1:  analytic first derivative of a custom callable
    :param deriv2:  analytic second derivative of a custom callable
    :param lipschitz: Lipschitz bound of a custom function (estimated on the grid otherwise)
    :return: WeightFunction
    """

    if family not in FAMILIES:
        raise WeightFunctionError("unknown weight family '{0}' (choose from {1})".format(
            family, ", ".join(FAMILIES)), "weight.family")

    if family == "linear":
        if theta is None:
            raise WeightFunctionError("parameter theta required for family 'linear'", "weight.theta")
        if not np.isfinite(theta) or theta < 1:
            raise WeightFunctionError(u"θ ≥ 1 required for family 'linear' (got {0})".format(theta),
                                      "weight.theta")
        return WeightFunction(family, {'theta': float(theta)})

    if family == "inverse_power":
        _require_positive("theta", theta, family)
        _require_positive("alpha", alpha, family)
        return WeightFunction(family, {'theta': float(theta), 'alpha': float(alpha)})

    if family == "exponential":
        _require_positive("theta", theta, family)
        return WeightFunction(family, {'theta': float(theta)})

    if family == "constant":
        _require_positive("c", c, family)
        return WeightFunction(family, {'c': float(c)})

    #custom
    params = {}
    if fun is None:
        if x is None or w is None:
            raise WeightFunctionError("custom weight needs tabulated 'x' and 'w' or a callable", "weight")
        x = np.asarray(x, dtype=np.float64)
        w = np.asarray(w, dtype=np.float64)
        if x.ndim != 1 or x.shape != w.shape or x.size < 2:
            raise WeightFunctionError("'x' and 'w' must be arrays of equal length >= 2", "weight")
        if np.any(np.diff(x) <= 0):
            raise WeightFunctionError("'x' must be strictly increasing", "weight.x")
        if x[0] > 0 or x[-1] < 1:
            raise WeightFunctionError("'x' must cover [0,1]", "weight.x")
        params['x'] = x
        params['w'] = w
    if lipschitz is not None:
        params['lipschitz'] = float(lipschitz)

    weight = WeightFunction(family, params, fun=fun, deriv1=deriv1, deriv2=deriv2)
    check_weight_function(weight)

    return weight


def check_weight_function(weight, grid_size=GRID_SIZE):
    """
    Reject weight functions that increase somewhere on [0,1] or vanish on [0,1).
    w(1)=0 is allowed (e.g. linear with theta=1): a coordinate equal to 1 forces all
    others to 0 where w(0)>0, so S_w cannot vanish on the simplex.
    """

    grid = np.linspace(0, 1, grid_size)
    values = weight(grid)

    if not np.all(np.isfinite(values)):
        raise WeightFunctionError("weight function is not finite on [0,1]", "weight")

    tol = 1e-12 * max(1.0, float(np.max(np.abs(values))))
    increasing = np.where(np.diff(values) > tol)[0]
    if len(increasing) > 0:
        i = increasing[0]
        raise WeightFunctionError("weight function is increasing on [{0:g}, {1:g}]".format(grid[i], grid[i + 1]),
                                  "weight")

    if np.any(values[:-1] <= 0) or values[-1] < 0:
        raise WeightFunctionError("weight function must be > 0 on [0,1)", "weight")

    return True
