import numpy as np

from nrurn.errors import ReplacementMatrixError

#row/column sum and normality tolerance
TOLERANCE = 1e-12


class ReplacementMatrix(object):
    """
    Balanced replacement matrix normalised to be row stochastic.

    Row i holds the masses added to the urn when colour i is drawn.
    Use validate_replacement_matrix to construct instances from raw entries.
    """

    def __init__(self, entries):
        entries = np.array(entries, dtype=np.float64)
        entries.setflags(write=False)

        self.entries = entries
        self.k = entries.shape[0]

        tol = TOLERANCE
        ones = np.ones(self.k)
        identity = np.eye(self.k)

        self.row_stochastic = bool(np.all(np.abs(entries.sum(1) - ones) <= tol))
        self.doubly_stochastic = self.row_stochastic and bool(np.all(np.abs(entries.sum(0) - ones) <= tol))
        self.normal = bool(np.max(np.abs(entries.T.dot(entries) - entries.dot(entries.T))) <= tol)
        self.identity = bool(np.max(np.abs(entries - identity)) <= tol)
        self.uniform_J_over_k = bool(np.max(np.abs(entries - 1.0 / self.k)) <= tol)
        self.permutation = self.doubly_stochastic and bool(
            np.all((np.abs(entries) <= tol) | (np.abs(entries - 1) <= tol)))

    def __repr__(self):
        return "R ({0}x{0}; {1})".format(self.k, ", ".join(name for name, on in self.flags.items() if on))

    def __eq__(self, other):
        return isinstance(other, ReplacementMatrix) and np.array_equal(self.entries, other.entries)

    def __ne__(self, other):
        return not self.__eq__(other)

    def __hash__(self):
        return hash(self.entries.tobytes())

    @property
    def flags(self):
        return {
            'row_stochastic': self.row_stochastic,
            'doubly_stochastic': self.doubly_stochastic,
            'normal': self.normal,
            'identity': self.identity,
            'uniform_J_over_k': self.uniform_J_over_k,
            'permutation': self.permutation
        }

    @property
    def spectral_norm(self):
        return float(np.linalg.norm(self.entries, 2))

    def tolist(self):
        return self.entries.tolist()


def validate_replacement_matrix(entries, tol=TOLERANCE):
    """
    Validate a balanced replacement matrix and normalise it to be row stochastic

    :param entries: k x k array of nonnegative masses (or a ReplacementMatrix)
    :param tol:     tolerance on the common row sum
    :return: ReplacementMatrix
    """

    if isinstance(entries, ReplacementMatrix):
        entries = entries.entries

    try:
        R = np.array(entries, dtype=np.float64)
    except (TypeError, ValueError):
        raise ReplacementMatrixError("entries must be a numeric k x k array", "R")

    if R.ndim != 2 or R.shape[0] != R.shape[1]:
        raise ReplacementMatrixError("must be a square k x k matrix (got shape {0})".format(R.shape), "R")
    if R.shape[0] < 2:
        raise ReplacementMatrixError("at least k=2 colours required", "R")
    if not np.all(np.isfinite(R)):
        raise ReplacementMatrixError("entries must be finite", "R")

    negative = np.argwhere(R < 0)
    if len(negative) > 0:
        i, j = negative[0]
        raise ReplacementMatrixError("negative entry {0:g}".format(R[i, j]), "R[{0}][{1}]".format(i, j))

    row_sums = R.sum(1)
    common = row_sums[0]
    if common <= 0:
        raise ReplacementMatrixError("row sums must be positive", "R")

    offending = np.where(np.abs(row_sums - common) > tol * max(1.0, common))[0]
    if len(offending) > 0:
        raise ReplacementMatrixError("matrix is not balanced, rows {0} have sums {1} != {2:g}".format(
            offending.tolist(), [float(s) for s in row_sums[offending]], common), "R")

    if np.abs(common - 1) > tol:
        R = R / common

    return ReplacementMatrix(R)
