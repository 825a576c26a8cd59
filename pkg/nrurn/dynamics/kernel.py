import numpy as np

from nrurn.errors import DegenerateWeightError

#S_w below this floor makes the selection distribution undefined
UNDERFLOW_FLOOR = 1e-300

#uniform variates drawn per generator call
UNIFORM_BLOCK = 1024

#U is re-derived from N as U_0 + N R every REDERIVE_INTERVAL steps
REDERIVE_INTERVAL = 2 ** 20


def replica_generator(seed, replica):
    """
    Counter based generator of one replica.

    The stream depends only on (seed, replica), so results do not change with the
    number of worker processes or the way replicas are grouped into chunks.
    """
    return np.random.Generator(np.random.Philox(np.random.SeedSequence(int(seed), spawn_key=(int(replica),))))


def row_sum(a):
    """Sum over the last axis, always added up left to right"""
    s = a[..., 0].copy()
    for j in range(1, a.shape[-1]):
        s += a[..., j]
    return s


def row_times_matrix(v, R):
    """vR for every row v of a (m, k) array, accumulated in a fixed order"""
    out = v[..., 0, None] * R[0]
    for i in range(1, R.shape[0]):
        out += v[..., i, None] * R[i]
    return out


def selection_probabilities(Y, weight):
    """
    Selection distribution w(Y_j)/S_w(Y) for every row of Y

    :param Y:       (..., k) array of compositions
    :param weight:  WeightFunction
    :return: (..., k) array of probabilities
    """

    wv = weight(Y)
    S = row_sum(wv)

    S_flat = np.reshape(S, -1)
    bad = np.flatnonzero(~(S_flat > UNDERFLOW_FLOOR))
    if len(bad) > 0:
        err = DegenerateWeightError("degenerate weight: S_w(y)={0:g} <= {1:g}".format(
            float(S_flat[bad[0]]), UNDERFLOW_FLOOR))
        err.rows = bad.tolist()
        raise err

    return wv / S[..., None]


def draw_colours(p, u):
    """Inverse CDF draw of one colour per row of p from the uniforms u"""
    cdf = np.cumsum(p, axis=-1)
    return (u[..., None] >= cdf[..., :-1]).sum(-1)


def simulate_block(weight, R, U0, checkpoints, seed, replicas):
    """
    Run a block of independent replicas of the urn up to the last checkpoint.

    All replicas of the block advance together, the replica index is the leading
    axis of every array. Every replica consumes its own stream, one uniform per step.

    :param weight:      WeightFunction
    :param R:           k x k row stochastic ndarray
    :param U0:          initial composition (k,)
    :param checkpoints: sorted int array of time points, last entry is n_max
    :param seed:        base seed
    :param replicas:    replica indices of this block
    :return: dict with checkpoint arrays (replica, checkpoint, colour) and final states
    """

    R = np.asarray(R, dtype=np.float64)
    U0 = np.asarray(U0, dtype=np.float64)
    replicas = np.asarray(replicas, dtype=np.int64)
    checkpoints = np.asarray(checkpoints, dtype=np.int64)

    m = len(replicas)
    k = R.shape[0]
    n_max = int(checkpoints[-1])
    n_ck = len(checkpoints)
    rows = np.arange(m)

    generators = [replica_generator(seed, r) for r in replicas]
    uniforms = np.empty((m, UNIFORM_BLOCK))

    U = np.tile(U0, (m, 1))
    N = np.zeros((m, k), dtype=np.int64)
    last_draw = np.full(m, -1, dtype=np.int64)

    martingale_max = np.zeros(m)
    sum_p = np.zeros((m, k))
    sum_pp = np.zeros((m, k, k))

    Y_ck = np.full((m, n_ck, k), np.nan)
    Y_tilde_ck = np.full((m, n_ck, k), np.nan)
    U_ck = np.full((m, n_ck, k), np.nan)
    N_ck = np.zeros((m, n_ck, k), dtype=np.int64)

    c = 0
    if checkpoints[0] == 0:
        Y_ck[:, 0] = U
        U_ck[:, 0] = U
        c = 1

    for n in range(n_max):

        b = n % UNIFORM_BLOCK
        if b == 0:
            for i, g in enumerate(generators):
                uniforms[i] = g.random(UNIFORM_BLOCK)

        p = selection_probabilities(U / (n + 1), weight)
        z = draw_colours(p, uniforms[:, b])

        #martingale increment (chi - p) R
        chi = -p
        chi[rows, z] += 1
        MR = row_times_matrix(chi, R)
        martingale_max = np.maximum(martingale_max, row_sum(MR * MR))

        sum_p += p
        sum_pp += p[:, :, None] * p[:, None, :]

        U += R[z]
        N[rows, z] += 1
        last_draw = z

        if (n + 1) % REDERIVE_INTERVAL == 0:
            U = U0 + row_times_matrix(N.astype(np.float64), R)

        if c < n_ck and checkpoints[c] == n + 1:
            Y_ck[:, c] = U / (n + 2)
            Y_tilde_ck[:, c] = N / float(n + 1)
            U_ck[:, c] = U
            N_ck[:, c] = N
            c += 1

    #mean conditional covariance of the increments chi R
    noise = np.zeros((m, k, k))
    if n_max > 0:
        p_mean = sum_p / n_max
        chi_cov = -sum_pp / n_max
        chi_cov[:, np.arange(k), np.arange(k)] += p_mean
        noise = np.einsum('ji,mjl,lk->mik', R, chi_cov, R)

    return {
        'Y': Y_ck,
        'Y_tilde': Y_tilde_ck,
        'U': U_ck,
        'N': N_ck,
        'final_U': U,
        'final_N': N,
        'last_draw': last_draw,
        'martingale_max': martingale_max,
        'noise_covariance': noise
    }
