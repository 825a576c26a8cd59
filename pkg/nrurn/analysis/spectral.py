import numpy as np
import scipy.linalg

from nrurn.errors import DegenerateWeightError, SpectralError
from nrurn.replacement import ReplacementMatrix

#eigenvalues whose real parts differ by less than this belong to the same cluster
CLUSTER_TOLERANCE = 1e-8

#tolerance of rho comparisons, widened when w' is a finite difference
RHO_TOLERANCE = 1e-9
RHO_TOLERANCE_APPROXIMATE = 1e-5


def complex_to_dict(z):
    return {'re': float(np.real(z)), 'im': float(np.imag(z))}


def _entries(R):
    return np.asarray(getattr(R, "entries", R), dtype=np.float64)


def compute_b(w, k):
    """
    Slope parameter b = w'(1/k) / (k w(1/k)); every Jacobian eigenvalue at the
    uniform point reads b*lambda - 1.

    :param w: WeightFunction
    :param k: number of colours
    :return: b <= 0
    """

    x = 1.0 / k
    wx = float(w(x))
    if not wx > 0:
        raise DegenerateWeightError("b undefined: w(1/k)={0:g} (zero denominator)".format(wx))

    return float(w.deriv1(x)) / (k * wx)


class SpectralSummary():
    """
    Eigen structure of R together with b, rho and nu.

    eigenvalues holds all eigenvalues of R; maximal is the removed copy of the
    Perron eigenvalue 1 and others the remaining k-1 values.
    """

    def __init__(self, eigenvalues, maximal, others, b, approximate=False):

        self.eigenvalues = np.asarray(eigenvalues)
        self.maximal = maximal
        self.others = np.asarray(others)
        self.b = b
        self.approximate = approximate
        self.rho_tolerance = RHO_TOLERANCE_APPROXIMATE if approximate else RHO_TOLERANCE

        re = np.real(self.others)
        min_re = np.min(re)
        cluster = np.abs(re - min_re) <= CLUSTER_TOLERANCE
        self.nu = int(np.sum(cluster))

        #representative of the cluster: smallest real part, nonnegative imaginary part first
        candidates = self.others[cluster]
        self.lambda_s = complex(sorted(candidates, key=lambda z: (np.real(z), -np.imag(z)))[0])

        self.rho = max(0.0, 1.0 - b * self.lambda_s.real)
        self.jacobian_eigenvalues = np.concatenate([[-1.0 + 0j], b * self.others - 1])
        self.rho_jac = float(np.min(-np.real(b * self.others - 1)))

    def __repr__(self):
        return "spectrum: b={0:g} lambda_s={1} nu={2} rho={3:g}".format(
            self.b, np.round(self.lambda_s, decimals=8), self.nu, self.rho)

    def to_dict(self):
        return {
            'eigenvalues': [complex_to_dict(z) for z in self.eigenvalues],
            'lambda_s': complex_to_dict(self.lambda_s),
            'nu': self.nu,
            'b': self.b,
            'rho': self.rho,
            'rho_jac': self.rho_jac,
            'jacobian_eigenvalues': [complex_to_dict(z) for z in self.jacobian_eigenvalues],
            'approximate_derivative': self.approximate
        }


def spectral_summary(w, R):
    """
    Dense nonsymmetric eigen decomposition of R and the quantities derived from it

    :param w: WeightFunction
    :param R: ReplacementMatrix or row stochastic ndarray
    :return: SpectralSummary
    """

    entries = _entries(R)
    k = entries.shape[0]

    try:
        eigenvalues = scipy.linalg.eigvals(entries)
    except (np.linalg.LinAlgError, ValueError) as e:
        raise SpectralError("eigenvalue computation failed: {0}".format(e))

    if not np.all(np.isfinite(eigenvalues)):
        raise SpectralError("eigenvalue computation returned non finite values")

    #R 1^T = 1^T, remove one copy of the eigenvalue closest to 1
    i_max = int(np.argmin(np.abs(eigenvalues - 1)))
    maximal = complex(eigenvalues[i_max])
    others = np.delete(eigenvalues, i_max)

    return SpectralSummary(eigenvalues, maximal, others, compute_b(w, k), approximate=w.approximate)


class StabilityVerdict():
    """
    Linear stability of the uniform equilibrium.

    stable is decided by the eigenvalue condition Re(b lambda_i - 1) < 0.
    condition_1: Re(lambda_i) > k w(1/k)/w'(1/k) for all non maximal lambda_i.
    condition_2: k > -w'(1/k)/w(1/k), which suffices for every stochastic R.
    """

    def __init__(self, stable, condition_1, condition_2, margin):
        self.stable = stable
        self.condition_1 = condition_1
        self.condition_2 = condition_2
        self.margin = margin
        self.binding = "condition_2" if condition_2 else "condition_1"

    def __repr__(self):
        return "stability: stable={0} binding={1} margin={2:g}".format(self.stable, self.binding, self.margin)

    def to_dict(self):
        return {
            'stable': self.stable,
            'binding_condition': self.binding,
            'condition_1': self.condition_1,
            'condition_2': self.condition_2,
            'margin': self.margin
        }


def check_stability(w, R, summary=None):
    """
    Stability of (1/k)1 as an equilibrium of the mean field ODE

    :param w: WeightFunction
    :param R: ReplacementMatrix or row stochastic ndarray
    :param summary: precomputed SpectralSummary
    :return: StabilityVerdict
    """

    if summary is None:
        summary = spectral_summary(w, R)

    b = summary.b
    re = np.real(summary.others)

    stable = bool(np.all(np.real(b * summary.others - 1) < 0))

    if b < 0:
        margin = float(np.min(re) - 1.0 / b)
    else:
        margin = np.inf

    condition_1 = bool(margin > 0)
    condition_2 = bool(b > -1)

    return StabilityVerdict(stable, condition_1, condition_2, margin)


class ContractionVerdict():
    """
    Sufficient conditions for F to be a contraction on the simplex.

    contraction is True if a case applies and the factor is below 1, None (inconclusive) otherwise.
    """

    def __init__(self, contraction, case, factor, cases):
        self.contraction = contraction
        self.case = case
        self.factor = factor
        self.cases = cases

    def __repr__(self):
        return "contraction: {0} case={1} factor={2}".format(self.contraction, self.case, self.factor)

    @property
    def inconclusive(self):
        return self.contraction is None

    def to_dict(self):
        return {
            'contraction': "inconclusive" if self.contraction is None else self.contraction,
            'case': self.case,
            'factor': self.factor,
            'cases': dict(self.cases)
        }


def check_contraction(w, R):
    """
    Check the sufficient contraction conditions

    (i)   sqrt(k) > 2M/w(1)
    (ii)  w convex and sqrt(k) w(1/k) > 2M
    (iii) w convex, w(1/k) > w(0)/2 and sqrt(k) > 4M/w(0) (implies ii)

    The reported factor is ||R||_2 M (1+sqrt(k)) / (k w_floor) with w_floor = w(1)
    in case (i) and w(1/k) otherwise.

    :param w: WeightFunction
    :param R: ReplacementMatrix or row stochastic ndarray
    :return: ContractionVerdict
    """

    entries = _entries(R)
    k = entries.shape[0]
    sk = np.sqrt(k)
    M = w.lipschitz
    norm_R = R.spectral_norm if isinstance(R, ReplacementMatrix) else float(np.linalg.norm(entries, 2))

    w0, w1, wk = float(w(0.0)), float(w(1.0)), float(w(1.0 / k))

    cases = {
        'i': bool(w1 > 0 and sk * w1 > 2 * M),
        'ii': bool(w.convex and sk * wk > 2 * M),
        'iii': bool(w.convex and wk > w0 / 2 and sk * w0 > 4 * M)
    }

    floors = {'i': w1, 'ii': wk, 'iii': wk}
    factors = dict((c, norm_R * M * (1 + sk) / (k * floors[c])) for c in cases if cases[c])

    if not factors:
        return ContractionVerdict(None, None, None, cases)

    case = min(sorted(factors), key=lambda c: factors[c])
    factor = float(factors[case])
    contraction = True if factor < 1 else None

    return ContractionVerdict(contraction, case, factor, cases)
