import numpy as np
import scipy.integrate
import scipy.linalg

from nrurn.analysis.spectral import spectral_summary
from nrurn.errors import LyapunovError, MatrixExponentialError, RegimeError

LYAPUNOV_METHODS = ("kronecker", "bartels_stewart")

#accepted residual of a Lyapunov solve
LYAPUNOV_RESIDUAL = 1e-10

#log n of the default quadrature horizons
DEFAULT_N_GRID = (1e4, 1e6, 1e8, 1e12)

#successive estimates may grow by at most this much before the grid counts as non monotone
MONOTONE_TOLERANCE = 1e-3

QUADRATURE_TOLERANCE = 1e-10


def _entries(R):
    return np.asarray(getattr(R, "entries", R), dtype=np.float64)


def noise_covariance(R):
    """
    Gamma_1 = R^T [(1/k)I - (1/k^2)J] R and Gamma~_1 = (1/k)I - (1/k^2)J,
    the covariance of the draw noise at the uniform point
    """
    R = _entries(R)
    k = R.shape[0]
    gamma_tilde = np.eye(k) / k - np.ones((k, k)) / k ** 2
    return R.T.dot(gamma_tilde).dot(R), gamma_tilde


def solve_lyapunov(A, method="kronecker"):
    """
    Solve A L + L A^T = I

    :param A:      k x k real matrix with spectrum in the open right half plane
    :param method: 'kronecker' (dense k^2 x k^2 solve) or 'bartels_stewart'
    :return: symmetric solution L
    """

    A = np.asarray(A, dtype=np.float64)
    k = A.shape[0]

    if np.min(np.real(scipy.linalg.eigvals(A))) <= 0:
        raise LyapunovError("Lyapunov unstable: rho <= 1/2 (spectrum of A not in the right half plane)")

    identity = np.eye(k)
    if method == "kronecker":
        #row major vectorisation: vec(A L) = (A x I) vec(L), vec(L A^T) = (I x A) vec(L)
        K = np.kron(A, identity) + np.kron(identity, A)
        L = scipy.linalg.solve(K, identity.ravel()).reshape(k, k)
    elif method == "bartels_stewart":
        L = scipy.linalg.solve_continuous_lyapunov(A, identity)
    else:
        raise ValueError("unknown Lyapunov method '{0}' (choose from {1})".format(method, ", ".join(LYAPUNOV_METHODS)))

    L = (L + L.T) / 2

    #accepted residual grows with |L|, which diverges as rho approaches 1/2
    bound = LYAPUNOV_RESIDUAL * max(1.0, float(np.max(np.abs(L))))
    residual = lyapunov_residual(A, L)
    if not residual <= bound:
        raise LyapunovError("Lyapunov residual {0:g} exceeds {1:g} ({2} solve)".format(residual, bound, method))

    return L


def lyapunov_residual(A, L):
    return float(np.max(np.abs(A.dot(L) + L.dot(A.T) - np.eye(A.shape[0]))))


def sigma1(w, R, method="kronecker", summary=None):
    """
    Limiting covariances in the sqrt(n) regime (rho > 1/2)

    Sigma~_1 = (1/k)[L - J/(k(1-2b))] and Sigma_1 = R^T Sigma~_1 R with
    A L + L A^T = I for A = I/2 - b R^T. For normal R the closed form
    L = (I - b(R + R^T))^-1 is used and compared with the Lyapunov solve.

    :param w: WeightFunction
    :param R: ReplacementMatrix or row stochastic ndarray
    :return: dict with Sigma1, Sigma1_tilde, Lambda1 and diagnostics
    """

    if summary is None:
        summary = spectral_summary(w, R)
    if not summary.rho > 0.5 + summary.rho_tolerance:
        raise RegimeError("Sigma_1 requires rho > 1/2 (rho={0:g})".format(summary.rho))

    normal = getattr(R, "normal", None)
    R = _entries(R)
    k = R.shape[0]
    b = summary.b
    identity = np.eye(k)
    J = np.ones((k, k))

    A = identity / 2 - b * R.T
    L = solve_lyapunov(A, method=method)
    residual = lyapunov_residual(A, L)

    if normal is None:
        normal = bool(np.max(np.abs(R.T.dot(R) - R.dot(R.T))) <= 1e-12)

    closed_form_error = None
    if normal:
        closed = scipy.linalg.inv(identity - b * (R + R.T))
        closed = (closed + closed.T) / 2
        closed_form_error = float(np.max(np.abs(closed - L)))
        L = closed

    sigma_tilde = (L - J / (k * (1 - 2 * b))) / k
    sigma_tilde = (sigma_tilde + sigma_tilde.T) / 2
    sigma = R.T.dot(sigma_tilde).dot(R)
    sigma = (sigma + sigma.T) / 2

    return {
        'Sigma1': sigma,
        'Sigma1_tilde': sigma_tilde,
        'Lambda1': L,
        'lyapunov_residual': residual,
        'closed_form_error': closed_form_error,
        'method': method
    }


def matrix_exponential(A):
    """
    e^A by scaling and squaring

    :param A: k x k matrix with finite entries
    :return: k x k matrix
    """

    A = np.asarray(A)
    if not np.all(np.isfinite(A)):
        raise ValueError("matrix exponential requires finite entries")

    with np.errstate(over="ignore", invalid="ignore"):
        E = scipy.linalg.expm(A)

    if not np.all(np.isfinite(E)):
        raise MatrixExponentialError("matrix exponential overflows (||A||_1={0:g})".format(np.linalg.norm(A, 1)))

    return E


def _lambda2_integrand(b, R):
    def integrand(u):
        E = matrix_exponential(b * u * R)
        return np.exp(-u) * E.T.dot(E)
    return integrand


def lambda2_quadrature(w, R, T_grid=None, summary=None):
    """
    Limiting covariances in the sqrt(n)/(log n)^(nu-1/2) regime (rho = 1/2)

    Lambda_2 is the T -> infinity limit of T^-(2nu-1) int_0^T e^-u e^(buR^T) e^(buR) du,
    evaluated by adaptive quadrature on every T of the grid and extrapolated from the
    two largest T assuming an error of order 1/T.

    :param w:      WeightFunction
    :param R:      ReplacementMatrix or row stochastic ndarray
    :param T_grid: horizons T (default log n for n in 1e4, 1e6, 1e8, 1e12)
    :return: dict with Lambda2, Sigma2, Sigma2_tilde, per-T estimates and diagnostics
    """

    if summary is None:
        summary = spectral_summary(w, R)
    if abs(summary.rho - 0.5) > summary.rho_tolerance:
        raise RegimeError("Lambda_2 requires rho = 1/2 (rho={0:g})".format(summary.rho))

    R = _entries(R)
    k = R.shape[0]
    b = summary.b
    nu = summary.nu

    if T_grid is None:
        T_grid = np.log(DEFAULT_N_GRID)
    T_grid = np.sort(np.asarray(T_grid, dtype=np.float64))
    if len(T_grid) < 2:
        raise ValueError("lambda2_quadrature needs at least two horizons")

    integrand = _lambda2_integrand(b, R)

    estimates = []
    errors = []
    quadrature_converged = True
    lower, integral = 0.0, np.zeros((k, k))
    for T in T_grid:
        #integrate piecewise so every horizon reuses the previous integral
        piece, err, info = scipy.integrate.quad_vec(integrand, lower, T, epsabs=QUADRATURE_TOLERANCE,
                                                    epsrel=QUADRATURE_TOLERANCE, full_output=True)
        integral = integral + piece
        lower = T
        quadrature_converged = quadrature_converged and bool(info.success)
        estimates.append(integral / T ** (2 * nu - 1))
        errors.append(float(err))

    estimates = np.array(estimates)
    differences = [float(np.max(np.abs(estimates[i + 1] - estimates[i]))) for i in range(len(estimates) - 1)]
    monotone = all(differences[i + 1] <= differences[i] + MONOTONE_TOLERANCE for i in range(len(differences) - 1))

    Ta, Tb = T_grid[-2], T_grid[-1]
    L = (Tb * estimates[-1] - Ta * estimates[-2]) / (Tb - Ta)
    L = (L + L.T) / 2
    gap = float(np.max(np.abs(L - estimates[-1])))

    if not quadrature_converged:
        print("Warning: quadrature for Lambda_2 did not converge on every horizon.")

    sigma_tilde = L / k
    sigma = R.T.dot(sigma_tilde).dot(R)
    sigma = (sigma + sigma.T) / 2

    return {
        'Lambda2': L,
        'Sigma2': sigma,
        'Sigma2_tilde': sigma_tilde,
        'T_grid': T_grid,
        'estimates': estimates,
        'differences': differences,
        'monotone': monotone,
        'convergence_gap': gap,
        'quadrature_errors': errors,
        'quadrature_converged': quadrature_converged
    }
