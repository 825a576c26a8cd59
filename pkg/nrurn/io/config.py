import json
import numbers

import numpy as np

from nrurn.config import ExperimentConfig, DEFAULT_REPLICAS, DEFAULT_SEED, DEFAULT_THRESHOLDS
from nrurn.errors import ConfigError
from nrurn.replacement import validate_replacement_matrix
from nrurn.weights import make_weight_function, FAMILIES

TOP_LEVEL_KEYS = ("weight", "R", "U0", "n_max", "checkpoints", "replicas", "seed", "threads", "outputs",
                  "thresholds")

WEIGHT_KEYS = {
    'linear': ("theta",),
    'inverse_power': ("theta", "alpha"),
    'exponential': ("theta",),
    'constant': ("c",),
    'custom': ("x", "w", "lipschitz")
}

OUTPUT_KEYS = ("dir", "emit")
EMIT_CHOICES = ("json", "csv", "both")


def _integer(value, path, minimum=None, maximum=None):
    if isinstance(value, bool) or not isinstance(value, numbers.Integral):
        raise ConfigError("must be an integer (got {0!r})".format(value), path)
    if minimum is not None and value < minimum:
        raise ConfigError("must be >= {0} (got {1})".format(minimum, value), path)
    if maximum is not None and value > maximum:
        raise ConfigError("must be <= {0} (got {1})".format(maximum, value), path)
    return int(value)


def _number(value, path):
    if isinstance(value, bool) or not isinstance(value, numbers.Real):
        raise ConfigError("must be a number (got {0!r})".format(value), path)
    return float(value)


def _numbers(value, path):
    if not isinstance(value, list):
        raise ConfigError("must be an array of numbers", path)
    return [_number(v, "{0}[{1}]".format(path, i)) for i, v in enumerate(value)]


def _object(value, path, allowed):
    if not isinstance(value, dict):
        raise ConfigError("must be an object", path)
    for key in value:
        if key not in allowed:
            raise ConfigError("unknown key", "{0}.{1}".format(path, key) if path else key)
    return value


def parse_weight(spec):
    spec = _object(spec, "weight", ("family",) + tuple(sorted(set(k for v in WEIGHT_KEYS.values() for k in v))))

    family = spec.get("family")
    if family not in FAMILIES:
        raise ConfigError("unknown weight family {0!r} (choose from {1})".format(family, ", ".join(FAMILIES)),
                          "weight.family")

    parameters = {}
    for key, value in spec.items():
        if key == "family":
            continue
        if key not in WEIGHT_KEYS[family]:
            raise ConfigError("unknown key for family '{0}'".format(family), "weight." + key)
        if key in ("x", "w"):
            parameters[key] = _numbers(value, "weight." + key)
        else:
            parameters[key] = _number(value, "weight." + key)

    return make_weight_function(family, **parameters)


def parse_config(text):
    """
    Parse and validate an experiment configuration

    :param text: UTF-8 JSON document (str or bytes)
    :return: ExperimentConfig
    """

    if isinstance(text, bytes):
        try:
            text = text.decode("utf-8")
        except UnicodeDecodeError as e:
            raise ConfigError("not valid UTF-8 ({0})".format(e), "config")

    try:
        doc = json.loads(text)
    except ValueError as e:
        raise ConfigError("not valid JSON ({0})".format(e), "config")

    doc = _object(doc, "", TOP_LEVEL_KEYS)
    for key in ("weight", "R", "n_max"):
        if key not in doc:
            raise ConfigError("missing required key", key)

    weight = parse_weight(doc["weight"])

    if not isinstance(doc["R"], list) or not all(isinstance(row, list) for row in doc["R"]):
        raise ConfigError("must be an array of rows", "R")
    R = validate_replacement_matrix([_numbers(row, "R[{0}]".format(i)) for i, row in enumerate(doc["R"])])

    if "U0" in doc:
        U0 = _numbers(doc["U0"], "U0")
    else:
        U0 = np.ones(R.k) / R.k

    n_max = _integer(doc["n_max"], "n_max", minimum=0)

    checkpoints = None
    if "checkpoints" in doc:
        if not isinstance(doc["checkpoints"], list):
            raise ConfigError("must be an array of integers", "checkpoints")
        checkpoints = [_integer(n, "checkpoints[{0}]".format(i), 0, n_max) for i, n in enumerate(doc["checkpoints"])]

    replicas = _integer(doc.get("replicas", DEFAULT_REPLICAS), "replicas", minimum=1)
    seed = _integer(doc.get("seed", DEFAULT_SEED), "seed", minimum=0, maximum=2 ** 64 - 1)
    threads = _integer(doc.get("threads", 1), "threads", minimum=1)

    outputs = dict(_object(doc.get("outputs", {}), "outputs", OUTPUT_KEYS))
    if "emit" in outputs and outputs["emit"] not in EMIT_CHOICES:
        raise ConfigError("must be one of {0}".format(", ".join(EMIT_CHOICES)), "outputs.emit")
    if "dir" in outputs and not isinstance(outputs["dir"], str):
        raise ConfigError("must be a string", "outputs.dir")

    thresholds = _object(doc.get("thresholds", {}), "thresholds", tuple(DEFAULT_THRESHOLDS))
    thresholds = dict((key, _number(value, "thresholds." + key)) for key, value in thresholds.items())

    return ExperimentConfig(weight, R, U0, n_max, checkpoints=checkpoints, replicas=replicas, seed=seed,
                            threads=threads, outputs=outputs, thresholds=thresholds)


def serialize_config(config):
    """JSON text of a config; parse_config(serialize_config(c)) == c"""

    if config.weight.family == "custom" and "x" not in config.weight.params:
        raise ConfigError("custom weight functions given as callables cannot be serialised", "weight")

    return json.dumps(config.to_dict(), sort_keys=True, indent=2)


def load_config(config_file):
    """Read an experiment configuration from a JSON file"""

    with open(config_file, "rb") as f:
        return parse_config(f.read())
