import numpy as np

from nrurn.algorithm.fixed_point import solve_fixed_point
from nrurn.algorithm.ode import integrate_ode
from nrurn.analysis.spectral import spectral_summary, check_stability, check_contraction, complex_to_dict
from nrurn.asymptotics.covariance import sigma1, lambda2_quadrature, noise_covariance

REGIMES = ("clt_sqrt_n", "clt_sqrt_n_over_log", "slow_regime", "degenerate")


def regime_of(rho, tol=1e-9):
    """Scaling regime of rho: > 1/2, = 1/2, in (0, 1/2) or 0"""
    if rho <= tol:
        return "degenerate"
    if abs(rho - 0.5) <= tol:
        return "clt_sqrt_n_over_log"
    if rho > 0.5:
        return "clt_sqrt_n"
    return "slow_regime"


class Scaling():
    """
    Factor s(n) by which deviations from the limit are multiplied:

        clt_sqrt_n            sqrt(n)
        clt_sqrt_n_over_log   sqrt(n) / (log n)^(nu - 1/2)
        slow_regime           n^rho / (log n)^(nu - 1)
        degenerate            as slow_regime with rho = 0

    NaN where the factor is undefined (n = 0, or log n = 0 with a positive log exponent).
    """

    def __init__(self, regime, rho, nu):
        self.regime = regime
        self.rho = float(rho)
        self.nu = int(nu)

    def __repr__(self):
        return "scaling: {0}".format(self.describe())

    def exponents(self):
        """(power of n, power of log n in the denominator)"""
        if self.regime == "clt_sqrt_n":
            return 0.5, 0.0
        if self.regime == "clt_sqrt_n_over_log":
            return 0.5, self.nu - 0.5
        return self.rho, self.nu - 1.0

    def describe(self):
        a, c = self.exponents()
        text = "n^{0:g}".format(a)
        if c != 0:
            text += "/(log n)^{0:g}".format(c)
        return text

    def __call__(self, n):
        n = np.asarray(n, dtype=np.float64)
        a, c = self.exponents()

        with np.errstate(divide="ignore", invalid="ignore"):
            log_n = np.log(np.where(n > 0, n, np.nan))
            factor = np.power(n, a)
            if c != 0:
                factor = factor / np.power(np.where(log_n > 0, log_n, np.nan), c)

        return np.where(n > 0, factor, np.nan)


class AsymptoticReport():
    """
    Everything the mean field analysis predicts about an urn: spectrum, b, rho, nu,
    stability and contraction verdicts, the fixed point, the scaling regime and the
    limiting covariances of the two Gaussian regimes.
    """

    def __init__(self, summary, stability, contraction, fixed_point, regime, scaling, covariances,
                 gamma1, gamma1_tilde, y_limit, clt_applicable, flags, notes, ode=None):

        self.summary = summary
        self.stability = stability
        self.contraction = contraction
        self.fixed_point = fixed_point
        self.regime = regime
        self.scaling = scaling
        self.covariances = covariances
        self.gamma1 = gamma1
        self.gamma1_tilde = gamma1_tilde
        self.y_limit = y_limit
        self.clt_applicable = clt_applicable
        self.flags = flags
        self.notes = notes
        self.ode = ode

    def __repr__(self):
        return "{0}\n{1}\n{2}\nregime: {3} ({4})".format(
            self.summary, self.stability, self.contraction, self.regime, self.scaling.describe())

    @property
    def b(self):
        return self.summary.b

    @property
    def rho(self):
        return self.summary.rho

    @property
    def nu(self):
        return self.summary.nu

    @property
    def sigma_pred(self):
        """Predicted (Sigma, Sigma~) for Y_n and Y~_n, None outside the Gaussian regimes"""
        if not self.clt_applicable:
            return None
        if self.regime == "clt_sqrt_n":
            return self.covariances['Sigma1'], self.covariances['Sigma1_tilde']
        return self.covariances['Sigma2'], self.covariances['Sigma2_tilde']

    def to_dict(self):

        report = self.summary.to_dict()
        report['stable'] = self.stability.stable
        report['stability'] = self.stability.to_dict()
        report['contraction'] = self.contraction.to_dict()['contraction']
        report['contraction_detail'] = self.contraction.to_dict()
        report['fixed_point'] = {
            'y_star': self.fixed_point['y_star'].tolist(),
            'y_tilde_star': self.fixed_point['y_tilde_star'].tolist(),
            'converged': self.fixed_point['converged'],
            'iterations': self.fixed_point['iterations'],
            'residual': self.fixed_point['residual']
        }
        report['regime'] = self.regime
        report['scaling'] = self.scaling.describe()
        report['clt_applicable'] = self.clt_applicable
        report['y_limit'] = None if self.y_limit is None else np.asarray(self.y_limit).tolist()
        report['R_flags'] = dict(self.flags)
        report['Gamma1'] = self.gamma1.tolist()
        report['Gamma1_tilde'] = self.gamma1_tilde.tolist()
        report['notes'] = list(self.notes)

        for name, value in sorted(self.covariances.items()):
            if isinstance(value, np.ndarray):
                report[name] = value.tolist()
            else:
                report[name] = value

        if self.ode is not None:
            report['ode'] = {
                'y_end': self.ode['y_end'].tolist(),
                'converged': self.ode['converged'],
                'residual': self.ode['residual']
            }

        return report


def classify_regime(w, R, y0=None, method="kronecker", T_grid=None, verbose=False):
    """
    Full asymptotic analysis of the urn with weight w and replacement matrix R

    :param w:      WeightFunction
    :param R:      ReplacementMatrix
    :param y0:     starting composition of the mean field ODE (skipped if None)
    :param method: Lyapunov solver
    :param T_grid: quadrature horizons for rho = 1/2
    :return: AsymptoticReport
    """

    entries = np.asarray(getattr(R, "entries", R), dtype=np.float64)
    k = entries.shape[0]
    flags = getattr(R, "flags", {})
    doubly_stochastic = flags.get('doubly_stochastic', bool(np.all(np.abs(entries.sum(0) - 1) <= 1e-12)))

    summary = spectral_summary(w, R)
    stability = check_stability(w, R, summary=summary)
    contraction = check_contraction(w, R)
    fixed_point = solve_fixed_point(w, R)

    regime = regime_of(summary.rho, summary.rho_tolerance)
    scaling = Scaling(regime, summary.rho, summary.nu)
    gamma1, gamma1_tilde = noise_covariance(entries)

    notes = []
    if summary.approximate:
        notes.append("w' from finite differences: rho tolerance widened to {0:g}".format(summary.rho_tolerance))

    if doubly_stochastic:
        y_limit = np.ones(k) / k
    elif fixed_point['converged']:
        y_limit = fixed_point['y_star']
    else:
        y_limit = None
        notes.append("no limit: uniform point is not an equilibrium and the Picard iteration did not converge")

    clt_applicable = False
    covariances = {}
    if regime in ("clt_sqrt_n", "clt_sqrt_n_over_log"):
        if not doubly_stochastic:
            notes.append("R is not doubly stochastic: the uniform point is not an equilibrium, no Gaussian limit computed")
        else:
            clt_applicable = True
            if regime == "clt_sqrt_n":
                covariances = sigma1(w, R, method=method, summary=summary)
            else:
                covariances = lambda2_quadrature(w, R, T_grid=T_grid, summary=summary)
            if not stability.stable:
                notes.append("A2 unverified: the uniform equilibrium is not linearly stable")
    else:
        notes.append("no Gaussian limit computed in regime {0}".format(regime))

    ode = None
    if y0 is not None:
        ode = integrate_ode(w, R, y0)

    report = AsymptoticReport(summary, stability, contraction, fixed_point, regime, scaling, covariances,
                              gamma1, gamma1_tilde, y_limit, clt_applicable, flags, notes, ode=ode)

    if verbose:
        print(report)

    return report
