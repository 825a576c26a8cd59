import json
import pickle

import numpy as np
from numpy.testing import assert_allclose, assert_array_equal

import pytest

import nrurn.io as io
from nrurn.errors import ConfigError, ReplicaError

MINIMAL = '{"weight": {"family": "linear", "theta": 2}, "R": [[1, 0], [0, 1]], "n_max": 1000}'


def _config_text(**changes):
    doc = json.loads(MINIMAL)
    doc.update(changes)
    return json.dumps(doc)


def test_minimal_config_defaults():
    config = io.config.parse_config(MINIMAL)
    assert_array_equal(config.U0, [0.5, 0.5])
    assert config.replicas == 1000
    assert config.seed == 42
    assert config.checkpoints[0] == 0
    assert config.checkpoints[-1] == 1000


def test_config_round_trip():
    text = _config_text(weight={"family": "inverse_power", "theta": 0.25, "alpha": 4},
                        R=[[0, 0, 0, 2], [0, 0, 2, 0], [0, 2, 0, 0], [2, 0, 0, 0]],
                        U0=[0.1, 0.2, 0.3, 0.4], checkpoints=[10, 100], replicas=7, seed=2 ** 64 - 1,
                        outputs={"emit": "csv"}, thresholds={"ks": 0.1})
    config = io.config.parse_config(text)
    assert io.config.parse_config(io.config.serialize_config(config)) == config


def test_custom_weight_round_trip():
    text = _config_text(weight={"family": "custom", "x": [0, 0.5, 1], "w": [2, 1.5, 1]})
    config = io.config.parse_config(text)
    assert config.weight.approximate
    assert io.config.parse_config(io.config.serialize_config(config)) == config


@pytest.mark.parametrize("changes,message", [
    ({'U0': [0.5, 0.6]}, "U0 not on simplex"),
    ({'weight': {"family": "linear", "theta": 0.5}}, u"θ ≥ 1 required"),
    ({'weight': {"family": "linear", "theta": 2, "gamma": 1}}, "weight.gamma: unknown key"),
    ({'weight': {"family": "linear", "alpha": 2}}, "weight.alpha: unknown key for family 'linear'"),
    ({'colour': 3}, "colour: unknown key"),
    ({'n_max': -1}, "n_max: must be >= 0"),
    ({'n_max': 10.5}, "n_max: must be an integer"),
    ({'seed': 2 ** 64}, "seed: must be <="),
    ({'replicas': 0}, "replicas: must be >= 1"),
    ({'R': [[1, 0], [1, 1]]}, "not balanced"),
    ({'checkpoints': [5000]}, "checkpoints"),
    ({'outputs': {"emit": "xml"}}, "outputs.emit"),
])
def test_config_errors(changes, message):
    with pytest.raises(ConfigError, match=message):
        io.config.parse_config(_config_text(**changes))


def test_config_missing_key():
    with pytest.raises(ConfigError, match="n_max: missing required key"):
        io.config.parse_config('{"weight": {"family": "linear", "theta": 2}, "R": [[1, 0], [0, 1]]}')


def test_config_not_json():
    with pytest.raises(ConfigError, match="not valid JSON"):
        io.config.parse_config("{weight: linear}")
    with pytest.raises(ConfigError, match="UTF-8"):
        io.config.parse_config(b"\xff\xfe")


def test_load_config(tmp_path):
    path = tmp_path / "config.json"
    path.write_text(MINIMAL)
    assert io.config.load_config(str(path)).n_max == 1000


def test_errors_survive_pickling():
    e = pickle.loads(pickle.dumps(ConfigError("must be >= 1", "replicas")))
    assert str(e) == "replicas: must be >= 1"
    r = pickle.loads(pickle.dumps(ReplicaError("degenerate weight", seed=3, replica=17)))
    assert (r.seed, r.replica) == (3, 17)


def test_jsonable():
    record = io.report.to_jsonable({'z': 1 + 2j, 'x': np.array([1.0, np.inf]), 'ok': np.bool_(True)})
    assert record == {'z': {'re': 1.0, 'im': 2.0}, 'x': [1.0, None], 'ok': True}


def test_flatten():
    row = io.report.flatten({'b': -1, 'Sigma': [[1, 2], [3, 4]], 'stability': {'stable': True}, 'v': [5, 6]})
    assert row == {'b': -1, 'Sigma_11': 1, 'Sigma_12': 2, 'Sigma_21': 3, 'Sigma_22': 4,
                   'stability.stable': True, 'v_1': 5, 'v_2': 6}


def test_write_table(tmp_path):
    meta = {'version': '1.0.0', 'config_hash': 'abc', 'seed': 42}
    files = io.report.write_table(str(tmp_path / "report"), {'rho': 2.0, 'Sigma1': [[1, -1], [-1, 1]]}, None, meta)
    assert files == [str(tmp_path / "report.json"), str(tmp_path / "report.csv")]

    data, json_meta = io.report.read_json(files[0])
    assert data['rho'] == 2.0
    assert json_meta == meta

    df, csv_meta = io.report.read_csv(files[1])
    assert csv_meta == meta
    assert df['Sigma1_12'].iloc[0] == -1


def test_raw_msgpack(tmp_path):
    Y = np.array([[0.25, 0.75], [0.5, 0.5]])
    N = np.array([[3, 9], [6, 6]])
    raw = io.raw.UrnRaw(Y, Y, N, {'seed': 42, 'rho': np.float64(0.5)})

    path = str(tmp_path / "final.msgpack")
    io.raw.write_msgpack(path, raw)
    back = io.raw.parse_msgpack(path)

    assert back.replicas == 2
    assert_allclose(back.Y, Y)
    assert_array_equal(back.N, N)
    assert back.N.dtype == N.dtype
    assert back.meta == {'seed': 42, 'rho': 0.5}


def test_raw_rejects_foreign_file(tmp_path):
    path = tmp_path / "other.msgpack"
    path.write_bytes(b"\x80")
    with pytest.raises(IOError):
        io.raw.parse_msgpack(str(path))
