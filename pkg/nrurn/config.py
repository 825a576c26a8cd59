import hashlib
import json

import numpy as np

from nrurn.errors import ConfigError

DEFAULT_REPLICAS = 1000
DEFAULT_SEED = 42

#geometric checkpoint grid: n = ceil(10^(j/CHECKPOINTS_PER_DECADE))
CHECKPOINTS_PER_DECADE = 8

DEFAULT_THRESHOLDS = {
    'covariance': 0.15,         # relative Frobenius error, rho > 1/2
    'covariance_half': 0.25,    # relative Frobenius error, rho = 1/2
    'ks': 0.05,                 # per-coordinate Kolmogorov-Smirnov distance
    'epsilon': 0.05,            # radius of the ball around the limit
    'nonconvergence_fraction': 0.10,
    'convergence_fraction': 0.90
}


def geometric_checkpoints(n_max, per_decade=CHECKPOINTS_PER_DECADE):
    """Time points {0} u {ceil(10^(j/8)) <= n_max} u {n_max}"""

    points = {0, int(n_max)}
    j = 0
    while True:
        n = int(np.ceil(10 ** (j / float(per_decade))))
        if n > n_max:
            break
        points.add(n)
        j += 1

    return np.array(sorted(points), dtype=np.int64)


class ExperimentConfig(object):
    """
    A validated experiment: weight function, replacement matrix, initial composition,
    horizon, checkpoint schedule, ensemble size and seed.
    """

    def __init__(self, weight, R, U0, n_max, checkpoints=None, replicas=DEFAULT_REPLICAS,
                 seed=DEFAULT_SEED, threads=1, outputs=None, thresholds=None):

        self.weight = weight
        self.R = R
        self.k = R.k

        U0 = np.array(U0, dtype=np.float64)
        U0.setflags(write=False)
        self.U0 = U0

        self.n_max = int(n_max)
        if self.n_max < 0:
            raise ConfigError("n_max must be >= 0", "n_max")
        if checkpoints is None:
            checkpoints = geometric_checkpoints(self.n_max)
        checkpoints = np.array(checkpoints, dtype=np.int64).reshape(-1)
        if np.any(checkpoints < 0) or np.any(checkpoints > self.n_max):
            raise ConfigError("checkpoints must lie in [0, n_max]", "checkpoints")
        checkpoints = np.union1d(checkpoints, [self.n_max]).astype(np.int64)
        checkpoints.setflags(write=False)
        self.checkpoints = checkpoints

        self.replicas = int(replicas)
        self.seed = int(seed)
        self.threads = int(threads)
        self.outputs = dict(outputs or {})

        self.thresholds = dict(DEFAULT_THRESHOLDS)
        self.thresholds.update(thresholds or {})

        if self.replicas < 1:
            raise ConfigError("replicas must be >= 1", "replicas")
        if self.threads < 1:
            raise ConfigError("threads must be >= 1", "threads")
        if self.U0.shape != (self.k,):
            raise ConfigError("U0 must have k={0} entries".format(self.k), "U0")
        if np.any(self.U0 <= 0) or abs(self.U0.sum() - 1) > 1e-12:
            raise ConfigError("U0 not on simplex (entries must be > 0 and sum to 1)", "U0")

    def __repr__(self):
        return "experiment: k={0} n_max={1} replicas={2} seed={3} {4} {5}".format(
            self.k, self.n_max, self.replicas, self.seed, self.weight, self.R)

    def __eq__(self, other):
        return isinstance(other, ExperimentConfig) and self.to_dict() == other.to_dict()

    def __ne__(self, other):
        return not self.__eq__(other)

    def replace(self, **kwargs):
        """Copy of this config with some fields replaced (used for CLI overrides)"""

        fields = {
            'weight': self.weight, 'R': self.R, 'U0': self.U0, 'n_max': self.n_max,
            'checkpoints': self.checkpoints, 'replicas': self.replicas, 'seed': self.seed,
            'threads': self.threads, 'outputs': self.outputs, 'thresholds': self.thresholds
        }
        if 'n_max' in kwargs and 'checkpoints' not in kwargs:
            fields['checkpoints'] = None
        fields.update(kwargs)
        return ExperimentConfig(**fields)

    def to_dict(self):
        return {
            'weight': self.weight.get_parameters(),
            'R': self.R.tolist(),
            'U0': self.U0.tolist(),
            'n_max': self.n_max,
            'checkpoints': [int(n) for n in self.checkpoints],
            'replicas': self.replicas,
            'seed': self.seed,
            'threads': self.threads,
            'outputs': dict(self.outputs),
            'thresholds': dict(self.thresholds)
        }

    def config_hash(self):
        canonical = json.dumps(self.to_dict(), sort_keys=True, separators=(",", ":"))
        return hashlib.sha256(canonical.encode("utf-8")).hexdigest()
