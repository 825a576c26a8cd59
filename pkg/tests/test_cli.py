import importlib.util
import json
import os

import pytest

import nrurn.io as io

CLI = os.path.join(os.path.dirname(os.path.dirname(os.path.abspath(__file__))), "nrurn.py")

spec = importlib.util.spec_from_file_location("nrurn_cli", CLI)
cli = importlib.util.module_from_spec(spec)
spec.loader.exec_module(cli)

POLYA = {"weight": {"family": "linear", "theta": 1}, "R": [[1, 0], [0, 1]], "n_max": 0}
FIXED_POINT = {"weight": {"family": "linear", "theta": 3}, "R": [[1, 0], [0.5, 0.5]], "n_max": 2000,
               "replicas": 50, "seed": 1}


def _write(tmp_path, doc, name="config.json"):
    path = tmp_path / name
    path.write_text(json.dumps(doc))
    return str(path)


def test_analyze(tmp_path):
    config = _write(tmp_path, POLYA)
    out = str(tmp_path / "out")

    assert cli.main(["analyze", "--no-logo", "-c", config, "-o", out]) == 0

    data, meta = io.report.read_json(os.path.join(out, "report.json"))
    assert data['rho'] == 2
    assert data['regime'] == "clt_sqrt_n"
    assert set(meta) >= {'version', 'config_hash', 'seed'}

    df, csv_meta = io.report.read_csv(os.path.join(out, "report.csv"))
    assert csv_meta['config_hash'] == meta['config_hash']
    assert df['b'].iloc[0] == -1


def test_analyze_json_only(tmp_path):
    config = _write(tmp_path, POLYA)
    out = str(tmp_path / "out")
    assert cli.main(["analyze", "--no-logo", "-c", config, "-o", out, "--emit", "json"]) == 0
    assert sorted(os.listdir(out)) == ["report.json"]


def test_simulate_initial_checkpoint_only(tmp_path):
    config = _write(tmp_path, POLYA)
    out = str(tmp_path / "out")

    assert cli.main(["simulate", "--no-logo", "-c", config, "-o", out, "--seed", "7"]) == 0

    df, meta = io.report.read_csv(os.path.join(out, "trajectory.csv"))
    assert list(df.columns) == ['n', 'Y_1', 'Y_2', 'Ytilde_1', 'Ytilde_2']
    assert len(df) == 1
    assert df['n'].iloc[0] == 0
    assert meta['seed'] == 7


def test_verify_pass(tmp_path, capsys):
    config = _write(tmp_path, FIXED_POINT)
    out = str(tmp_path / "out")
    raw = str(tmp_path / "final.msgpack")

    assert cli.main(["verify", "--no-logo", "-c", config, "-o", out, "-b", raw]) == 0

    printed = capsys.readouterr().out
    assert "PASS accounting" in printed
    assert "PASS convergence" in printed

    data, _ = io.report.read_json(os.path.join(out, "ensemble.json"))
    assert all(c['passed'] for c in data['criteria'])
    assert io.raw.parse_msgpack(raw).replicas == 50


def test_verify_fail(tmp_path, capsys):
    doc = dict(FIXED_POINT, thresholds={"epsilon": 1e-9})
    config = _write(tmp_path, doc)

    assert cli.main(["verify", "--no-logo", "-c", config, "-o", str(tmp_path / "out"), "--replicas", "10"]) == 1
    assert "FAIL convergence" in capsys.readouterr().out


def test_regions(tmp_path):
    out = str(tmp_path / "out")
    assert cli.main(["regions", "--no-logo", "--family", "linear", "-k", "2", "--p-axis",
                     "--spectrum-range", "0", "1", "--theta-range", "1", "1.5", "--resolution", "3", "9",
                     "-o", out]) == 0

    df, meta = io.report.read_csv(os.path.join(out, "regions.csv"))
    assert len(df) == 27
    assert df['boundary'].sum() == 3


def test_input_errors(tmp_path, capsys):
    bad = _write(tmp_path, dict(POLYA, U0=[0.5, 0.6]))
    assert cli.main(["analyze", "--no-logo", "-c", bad]) == 2
    assert "U0 not on simplex" in capsys.readouterr().err

    assert cli.main(["analyze", "--no-logo", "-c", str(tmp_path / "missing.json")]) == 2
    assert cli.main(["regions", "--no-logo", "--theta-range", "0.5", "1"]) == 2


def test_argument_errors(tmp_path):
    config = _write(tmp_path, POLYA)
    with pytest.raises(SystemExit) as e:
        cli.main(["verify", "--no-logo", "-c", config, "--replicas", "0"])
    assert e.value.code == 2
