import collections

import numpy as np
import pandas as pd

from nrurn.dynamics.kernel import simulate_block, selection_probabilities, draw_colours


class UrnState(collections.namedtuple("UrnState", ["n", "U", "N", "last_draw"])):
    """
    Urn composition at time n: colour masses U (sum n+1), colour counts N (sum n)
    and the colour drawn in the previous step (None at n=0).
    """
    __slots__ = ()

    @property
    def k(self):
        return len(self.U)

    @property
    def Y(self):
        return np.asarray(self.U, dtype=np.float64) / (self.n + 1)

    @property
    def Y_tilde(self):
        if self.n == 0:
            return np.full(self.k, np.nan)
        return np.asarray(self.N, dtype=np.float64) / self.n


def initial_state(U0):
    U0 = np.array(U0, dtype=np.float64)
    return UrnState(0, U0, np.zeros(len(U0), dtype=np.int64), None)


def selection_distribution(Y, w):
    """
    Probability of drawing each colour from composition Y

    :param Y: composition on the simplex (k,) or a stack of compositions (m, k)
    :param w: WeightFunction
    :return: (w(Y_j) / S_w(Y))_j
    """
    return selection_probabilities(np.asarray(Y, dtype=np.float64), w)


def step(state, w, R, rng=None, draw=None):
    """
    Advance the urn by one draw.

    :param state: UrnState at time n
    :param w:     WeightFunction
    :param R:     ReplacementMatrix or k x k ndarray
    :param rng:   numpy Generator supplying the uniform variate
    :param draw:  force the drawn colour (0-based), no randomness used
    :return: UrnState at time n+1
    """

    R = getattr(R, "entries", R)

    if draw is None:
        if rng is None:
            rng = np.random.default_rng()
        p = selection_distribution(state.Y, w)
        draw = int(draw_colours(p, np.asarray(rng.random())))
    else:
        draw = int(draw)

    U = np.asarray(state.U, dtype=np.float64) + R[draw]
    N = np.array(state.N, dtype=np.int64)
    N[draw] += 1

    return UrnState(state.n + 1, U, N, draw)


class Trajectory():
    """
    One realisation of the urn observed at the checkpoints of an experiment.

    Y, Y_tilde, U and N are (checkpoints, k) arrays; Y_tilde is NaN at n=0.
    """

    def __init__(self, config, seed, replica, n, Y, Y_tilde, U, N, final, martingale_max, noise_covariance):
        self.config = config
        self.seed = seed
        self.replica = replica
        self.n = n
        self.Y = Y
        self.Y_tilde = Y_tilde
        self.U = U
        self.N = N
        self.final = final
        self.martingale_max = martingale_max
        self.noise_covariance = noise_covariance

    def __repr__(self):
        return "trajectory: replica={0} seed={1} n={2} Y={3}".format(
            self.replica, self.seed, self.final.n, np.round(self.final.Y, decimals=6))

    @property
    def checkpoints(self):
        return [(int(n), self.Y[i], self.Y_tilde[i]) for i, n in enumerate(self.n)]

    def to_dataframe(self):
        k = self.Y.shape[1]
        df = pd.DataFrame({'n': self.n})
        for j in range(k):
            df["Y_{0}".format(j + 1)] = self.Y[:, j]
        for j in range(k):
            df["Ytilde_{0}".format(j + 1)] = self.Y_tilde[:, j]
        return df


def trajectory_from_block(config, block, i, seed, replica):
    """Cut replica i out of the arrays returned by simulate_block"""

    last_draw = int(block['last_draw'][i])
    final = UrnState(config.n_max, block['final_U'][i].copy(), block['final_N'][i].copy(),
                     last_draw if last_draw >= 0 else None)

    return Trajectory(
        config, seed, replica, np.array(config.checkpoints),
        block['Y'][i], block['Y_tilde'][i], block['U'][i], block['N'][i],
        final, float(block['martingale_max'][i]), block['noise_covariance'][i]
    )


def run_trajectory(config, seed=None, replica=0):
    """
    Simulate a single replica of an experiment up to n_max

    :param config:  ExperimentConfig
    :param seed:    base seed (config.seed if None)
    :param replica: replica index selecting the random stream
    :return: Trajectory
    """

    if seed is None:
        seed = config.seed

    block = simulate_block(config.weight, config.R.entries, config.U0, config.checkpoints, seed, [replica])
    return trajectory_from_block(config, block, 0, seed, replica)
