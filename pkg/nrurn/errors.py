class UrnError(Exception):
    """Base class for all errors raised by nrurn"""


class ConfigError(UrnError, ValueError):
    """Invalid experiment configuration. Messages are prefixed with the offending path."""

    def __init__(self, message, path=None):
        self.reason = message
        self.path = path
        if path:
            message = "{0}: {1}".format(path, message)
        super(ConfigError, self).__init__(message)

    def __reduce__(self):
        return (self.__class__, (self.reason, self.path))


class WeightFunctionError(ConfigError):
    pass


class ReplacementMatrixError(ConfigError):
    pass


class DegenerateWeightError(UrnError, ArithmeticError):
    """S_w(y) vanished, the selection distribution is undefined"""


class RegimeError(UrnError, ValueError):
    """Computation requested outside of the scaling regime it is defined for"""


class LyapunovError(RegimeError):
    pass


class SpectralError(UrnError):
    pass


class ReplicaError(UrnError):
    """A single replica of an ensemble failed. Carries the seed to reproduce it."""

    def __init__(self, message, seed=None, replica=None):
        self.reason = message
        self.seed = seed
        self.replica = replica
        super(ReplicaError, self).__init__(
            "replica {0} (seed={1}): {2}".format(replica, seed, message))

    def __reduce__(self):
        return (ReplicaError, (self.reason, self.seed, self.replica))


class MatrixExponentialError(UrnError, OverflowError):
    pass
