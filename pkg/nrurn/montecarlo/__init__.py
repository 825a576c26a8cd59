import multiprocessing

import numpy as np
import scipy.linalg
import scipy.stats
import pandas as pd

import nrurn.monitor.progress as pr
from nrurn.dynamics.kernel import simulate_block
from nrurn.errors import DegenerateWeightError, ReplicaError, RegimeError
from nrurn.sanity_check import check_accounting

#replicas simulated together; fixed so that results do not depend on the number of workers
CHUNK_SIZE = 256

#tail levels of the Mahalanobis check
CHI2_LEVELS = (0.9, 0.95, 0.99)


def _simulate_chunk(args):
    weight, R, U0, checkpoints, seed, replicas = args
    try:
        return simulate_block(weight, R, U0, checkpoints, seed, replicas)
    except DegenerateWeightError as e:
        raise ReplicaError(str(e), seed=seed, replica=int(replicas[e.rows[0]]))


def tangent_basis(k):
    """Orthonormal basis (k, k-1) of the vectors summing to zero"""
    return scipy.linalg.null_space(np.ones((1, k)))


def sample_covariance(X):
    """Covariance over the replica axis of (replicas, k) samples; zero for a single replica"""
    if X.shape[0] < 2:
        return np.zeros((X.shape[1], X.shape[1]))
    C = np.cov(X, rowvar=False, ddof=1)
    return (C + C.T) / 2


def ks_distances(X, sigma):
    """Kolmogorov-Smirnov distance of every standardised coordinate of X against N(0,1)"""
    ks = np.full(X.shape[1], np.nan)
    for j in range(X.shape[1]):
        if sigma[j, j] > 0 and np.all(np.isfinite(X[:, j])):
            ks[j] = scipy.stats.kstest(X[:, j] / np.sqrt(sigma[j, j]), 'norm').statistic
    return ks


def mahalanobis_tails(X, sigma, levels=CHI2_LEVELS):
    """
    Fraction of samples whose squared Mahalanobis distance on the tangent space exceeds
    the chi-square quantile of each level, next to the expected fraction 1-level
    """

    V = tangent_basis(X.shape[1])
    S = V.T.dot(sigma).dot(V)
    df = int(np.linalg.matrix_rank(S, tol=1e-10))
    if df == 0:
        return {}

    Z = X.dot(V)
    d2 = np.einsum('mi,ij,mj->m', Z, scipy.linalg.pinv(S), Z)

    return dict(("{0:g}".format(level), {
        'observed': float(np.mean(d2 > scipy.stats.chi2.ppf(level, df))),
        'expected': float(1 - level),
        'df': df
    }) for level in levels)


class EnsembleSummary():
    """
    Cross replica statistics of an ensemble at every checkpoint.

    Y, Y_tilde, U, N are kept per replica as (replicas, checkpoints, k) arrays;
    the remaining per checkpoint statistics are derived from them.
    """

    def __init__(self, config, report, replicas, Y, Y_tilde, U, N, martingale_max, noise_covariance):

        self.config = config
        self.report = report
        self.replicas = replicas
        self.seed = config.seed
        self.n = np.array(config.checkpoints)
        self.k = config.k

        self.Y = Y
        self.Y_tilde = Y_tilde
        self.U = U
        self.N = N
        self.martingale_max = martingale_max
        self.noise_covariance = noise_covariance

        nan = np.full(self.k, np.nan)
        self.y_limit = nan if report.y_limit is None else np.asarray(report.y_limit, dtype=np.float64)
        if config.R.doubly_stochastic:
            self.y_tilde_limit = np.ones(self.k) / self.k
        elif report.fixed_point['converged']:
            self.y_tilde_limit = report.fixed_point['y_tilde_star']
        else:
            self.y_tilde_limit = nan

        self.scaling = report.scaling(self.n)
        self.sigma_pred = report.sigma_pred

        self.mean_Y = Y.mean(0)
        self.mean_Y_tilde = Y_tilde.mean(0)
        self.distance = np.linalg.norm(Y - self.y_limit, axis=-1).mean(0)
        self.distance_tilde = np.linalg.norm(Y_tilde - self.y_tilde_limit, axis=-1).mean(0)

        self.scaled = self.scaling[None, :, None] * (Y - self.y_limit)
        self.scaled_tilde = self.scaling[None, :, None] * (Y_tilde - self.y_tilde_limit)
        self.mean_scaled = self.scaled.mean(0)
        self.covariance = np.array([sample_covariance(self.scaled[:, c]) for c in range(len(self.n))])
        self.covariance_tilde = np.array([sample_covariance(self.scaled_tilde[:, c]) for c in range(len(self.n))])

        self.ks = np.full((len(self.n), self.k), np.nan)
        self.ks_tilde = np.full((len(self.n), self.k), np.nan)
        self.mahalanobis = {}
        if self.sigma_pred is not None:
            sigma, sigma_tilde = self.sigma_pred
            for c in range(len(self.n)):
                self.ks[c] = ks_distances(self.scaled[:, c], sigma)
                self.ks_tilde[c] = ks_distances(self.scaled_tilde[:, c], sigma_tilde)
            if np.all(np.isfinite(self.scaled[:, -1])):
                self.mahalanobis = mahalanobis_tails(self.scaled[:, -1], sigma)

        self.mean_noise_covariance = noise_covariance.mean(0)
        self.noise_relative_error = float(np.linalg.norm(self.mean_noise_covariance - report.gamma1) /
                                          np.linalg.norm(report.gamma1)) if np.any(report.gamma1) else np.nan

        self.accounting = check_accounting(self.n, U, N, config.U0, config.R.entries, martingale_max,
                                           Y=Y, Y_tilde=Y_tilde)

    def __repr__(self):
        return "ensemble: replicas={0} seed={1} n={2} final mean distance={3:g}".format(
            self.replicas, self.seed, self.n[-1], self.distance[-1])

    def to_dataframe(self):
        """Per checkpoint statistics: n, mean_Y_j, dist, cov_ij, ks_j"""

        df = pd.DataFrame({'n': self.n})
        for j in range(self.k):
            df["mean_Y_{0}".format(j + 1)] = self.mean_Y[:, j]
        df['dist'] = self.distance
        for i in range(self.k):
            for j in range(self.k):
                df["cov_{0}{1}".format(i + 1, j + 1)] = self.covariance[:, i, j]
        for j in range(self.k):
            df["ks_{0}".format(j + 1)] = self.ks[:, j]
        return df

    def to_dict(self):
        return {
            'replicas': self.replicas,
            'seed': self.seed,
            'n': self.n.tolist(),
            'y_limit': self.y_limit.tolist(),
            'y_tilde_limit': self.y_tilde_limit.tolist(),
            'scaling': self.report.scaling.describe(),
            'mean_Y': self.mean_Y.tolist(),
            'mean_Y_tilde': self.mean_Y_tilde.tolist(),
            'distance': self.distance.tolist(),
            'distance_tilde': self.distance_tilde.tolist(),
            'mean_scaled': self.mean_scaled.tolist(),
            'covariance': self.covariance.tolist(),
            'covariance_tilde': self.covariance_tilde.tolist(),
            'ks': self.ks.tolist(),
            'ks_tilde': self.ks_tilde.tolist(),
            'mahalanobis': self.mahalanobis,
            'noise_covariance': self.mean_noise_covariance.tolist(),
            'noise_relative_error': self.noise_relative_error,
            'martingale_max': float(np.max(self.martingale_max)),
            'accounting': self.accounting
        }


def run_ensemble(config, report, chunk_size=CHUNK_SIZE, verbose=True):
    """
    Simulate config.replicas independent replicas and aggregate them

    Replica i uses the stream (config.seed, i). Chunks of replicas run on
    config.threads worker processes and are collected in replica order.

    :param config: ExperimentConfig
    :param report: AsymptoticReport supplying the limit, the scaling and Sigma
    :return: EnsembleSummary
    """

    replicas = np.arange(config.replicas)
    chunks = [replicas[i:i + chunk_size] for i in range(0, len(replicas), chunk_size)]
    tasks = [(config.weight, config.R.entries, config.U0, config.checkpoints, config.seed, chunk)
             for chunk in chunks]

    if verbose:
        print("Simulating {0} replicas of k={1} colours up to n={2} ({3} chunks on {4} threads).".format(
            config.replicas, config.k, config.n_max, len(chunks), config.threads))

    progress = pr.Progress(verbose=verbose, index_name="chunk")
    blocks = []

    if config.threads > 1 and len(chunks) > 1:
        pool = multiprocessing.Pool(min(config.threads, len(chunks)))
        try:
            for i, block in enumerate(pool.imap(_simulate_chunk, tasks)):
                blocks.append(block)
                progress.log_progress(i + 1, replicas=sum(len(c) for c in chunks[:i + 1]),
                                      max_martingale=float(np.max(block['martingale_max'])))
        finally:
            pool.terminate()
            pool.join()
    else:
        for i, task in enumerate(tasks):
            block = _simulate_chunk(task)
            blocks.append(block)
            progress.log_progress(i + 1, replicas=sum(len(c) for c in chunks[:i + 1]),
                                  max_martingale=float(np.max(block['martingale_max'])))

    def stack(name):
        return np.concatenate([block[name] for block in blocks], axis=0)

    return EnsembleSummary(config, report, config.replicas, stack('Y'), stack('Y_tilde'), stack('U'), stack('N'),
                           stack('martingale_max'), stack('noise_covariance'))


def convergence_diagnostic(summary, y_limit=None, epsilon=0.05, tilde=False):
    """
    Almost sure convergence proxies

    :param summary: EnsembleSummary with at least 3 checkpoints
    :param y_limit: predicted limit (the summary's limit if None)
    :param epsilon: radius of the ball around the limit
    :param tilde:   use Y~_n instead of Y_n
    :return: dict with mean distances, final fraction within epsilon and monotonicity
    """

    if len(summary.n) < 3:
        raise ValueError("convergence diagnostic needs at least 3 checkpoints (got {0})".format(len(summary.n)))

    Y = summary.Y_tilde if tilde else summary.Y
    if y_limit is None:
        y_limit = summary.y_tilde_limit if tilde else summary.y_limit
    y_limit = np.asarray(y_limit, dtype=np.float64)

    distances = np.linalg.norm(Y - y_limit, axis=-1)
    mean_distance = distances.mean(0)
    fraction_within = float(np.mean(distances[:, -1] < epsilon))

    finite = mean_distance[np.isfinite(mean_distance)]
    steps = np.diff(finite)
    monotonicity = float(np.mean(steps < 0)) if len(steps) else np.nan

    #last decade of checkpoints
    decade = summary.n >= summary.n[-1] / 10.0
    last = mean_distance[decade]
    last = last[np.isfinite(last)]
    decade_ratio = float(last[-1] / last[0]) if len(last) > 1 and last[0] > 0 else np.nan
    decade_non_decreasing = bool(len(last) > 1 and np.all(np.diff(last) >= 0))

    return {
        'n': summary.n.tolist(),
        'mean_distance': mean_distance.tolist(),
        'final_mean_distance': float(mean_distance[-1]),
        'epsilon': epsilon,
        'fraction_within': fraction_within,
        'monotonicity': monotonicity,
        'last_decade_ratio': decade_ratio,
        'last_decade_non_decreasing': decade_non_decreasing
    }


def clt_diagnostic(summary, sigma_pred=None, thresholds=None, allow_rank_deficient=None, tilde=False):
    """
    Compare the scaled deviations at the final checkpoint with the predicted Gaussian limit

    Covariances are compared on the tangent space (the 1 direction projected out).

    :param summary:    EnsembleSummary
    :param sigma_pred: predicted covariance (the report's Sigma, or Sigma~ with tilde=True, if None)
    :param thresholds: dict with 'covariance' and 'ks' limits
    :param allow_rank_deficient: accept Sigma singular beyond the 1 direction (default: rho = 1/2)
    :return: dict with relative covariance error, KS distances and pass/fail
    """

    regime = summary.report.regime
    if regime not in ("clt_sqrt_n", "clt_sqrt_n_over_log"):
        raise RegimeError("CLT diagnostic requires a Gaussian regime (regime={0})".format(regime))

    if sigma_pred is None:
        if summary.sigma_pred is None:
            raise RegimeError("no predicted covariance available")
        sigma_pred = summary.sigma_pred[1 if tilde else 0]
    sigma_pred = np.asarray(sigma_pred, dtype=np.float64)

    if allow_rank_deficient is None:
        allow_rank_deficient = regime == "clt_sqrt_n_over_log"

    limits = dict(summary.config.thresholds)
    if regime == "clt_sqrt_n_over_log":
        limits['covariance'] = limits['covariance_half']
    limits.update(thresholds or {})

    k = summary.k
    V = tangent_basis(k)
    S = V.T.dot(sigma_pred).dot(V)
    rank = int(np.linalg.matrix_rank(S, tol=1e-10))
    if rank < k - 1 and not allow_rank_deficient:
        raise RegimeError("predicted covariance is singular beyond the 1 direction (rank {0} < {1})".format(rank, k - 1))
    if rank == 0:
        raise RegimeError("predicted covariance vanishes on the tangent space")

    scaled = (summary.scaled_tilde if tilde else summary.scaled)[:, -1]
    C = sample_covariance(scaled)
    Ct = V.T.dot(C).dot(V)
    covariance_error = float(np.linalg.norm(Ct - S) / np.linalg.norm(S))

    ks = ks_distances(scaled, sigma_pred)
    ks_max = float(np.nanmax(ks)) if np.any(np.isfinite(ks)) else np.nan

    mean_bound = 4 * np.sqrt(np.trace(sigma_pred) / summary.replicas)
    mean_norm = float(np.linalg.norm(scaled.mean(0)))

    covariance_pass = covariance_error <= limits['covariance']
    #KS gates only the sqrt(n) regime
    ks_pass = bool(ks_max <= limits['ks']) or regime == "clt_sqrt_n_over_log"

    return {
        'n': int(summary.n[-1]),
        'regime': regime,
        'covariance': C.tolist(),
        'covariance_error': covariance_error,
        'covariance_threshold': limits['covariance'],
        'covariance_pass': bool(covariance_pass),
        'ks': ks.tolist(),
        'ks_max': ks_max,
        'ks_threshold': limits['ks'],
        'ks_pass': ks_pass,
        'mahalanobis': mahalanobis_tails(scaled, sigma_pred),
        'mean_norm': mean_norm,
        'mean_bound': float(mean_bound),
        'mean_pass': bool(mean_norm <= mean_bound),
        'rank': rank,
        'passed': bool(covariance_pass and ks_pass)
    }
