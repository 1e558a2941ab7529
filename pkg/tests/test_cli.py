import json
import math

import pytest

from earthquake_lab.cli import main
from earthquake_lab.corpus import example1
from earthquake_lab.experiments import ExperimentConfig, run
from earthquake_lab.errors import ConfigError
from earthquake_lab.laminations import DiscreteLamination
from earthquake_lab.serialize import dump_lamination


@pytest.fixture
def empty_file(tmp_path):
    p = tmp_path / "empty.json"
    dump_lamination(DiscreteLamination([], [], []), p)
    return str(p)


@pytest.fixture
def ex_file(tmp_path):
    p = tmp_path / "ex.json"
    dump_lamination(example1(3), p)
    return str(p)


def test_list(capsys):
    assert main(["list"]) == 0
    names = capsys.readouterr().out.split()
    assert "elementary-teichmuller" in names and len(names) == 7


def test_run_writes_result(tmp_path):
    out = tmp_path / "res"
    assert main(["run", "elementary-teichmuller", "--out", str(out)]) == 0
    data = json.loads((out / "elementary-teichmuller.json").read_text())
    assert data["pass"] and data["schema"] == "eql-1"
    expected = math.log(math.e + 1) - 1
    assert all(abs(r["L"] - expected) <= 1e-9 for r in data["results"]["rows"])


def test_config_file_and_csv(tmp_path, capsys):
    cfg = tmp_path / "c.json"
    cfg.write_text(json.dumps({"experiment": "elementary-teichmuller", "seed": 4, "params": {"ns": [1, 2]}}))
    assert main(["run", "--config", str(cfg), "--format", "csv"]) == 0
    lines = capsys.readouterr().out.strip().splitlines()
    assert lines[0].split(",") == ["n", "L", "distortion", "error"]
    assert len(lines) == 3


@pytest.mark.parametrize("argv", [
    ["run", "no-such-experiment"],
    ["run"],
    ["run", "elementary-teichmuller", "--nu", "0,2"],
])
def test_bad_config_exits_2(argv, capsys):
    assert main(argv) == 2
    assert "input error" in capsys.readouterr().err


def test_bad_thread_cap(monkeypatch, capsys):
    monkeypatch.setenv("EARTHQUAKE_LAB_THREADS", "many")
    assert main(["list"]) == 2
    monkeypatch.setenv("EARTHQUAKE_LAB_THREADS", "0")
    assert main(["list"]) == 2
    monkeypatch.setenv("EARTHQUAKE_LAB_THREADS", "2")
    assert main(["list"]) == 0


def test_bad_input_file(tmp_path, capsys):
    p = tmp_path / "bad.json"
    p.write_text('{"schema": "eql-1", "type": "knot"}')
    assert main(["norms", str(p)]) == 2
    assert main(["norms", str(tmp_path / "missing.json")]) == 2


def test_empty_lamination_commands(empty_file, tmp_path, capsys):
    assert main(["norms", empty_file, "--out", str(tmp_path)]) == 0
    d = json.loads((tmp_path / "norms.json").read_text())
    assert d["thurston"]["lower"] == d["thurston"]["upper"] == 0.0 and d["total_mass"] == 0.0
    assert main(["earthquake", empty_file, "--out", str(tmp_path), "--points", "8"]) == 0
    d = json.loads((tmp_path / "earthquake.json").read_text())
    assert all(abs(t - v) < 1e-12 for t, v in d["samples"])
    assert main(["plot", empty_file, "--out", str(tmp_path)]) == 0
    assert "<path" not in (tmp_path / "plot.svg").read_text()


def test_earthquake_and_plot_on_example(ex_file, tmp_path):
    assert main(["earthquake", ex_file, "--out", str(tmp_path)]) == 0
    samples = json.loads((tmp_path / "earthquake.json").read_text())["samples"]
    assert len(samples) == 16
    for kind in ("lamination", "earthquake", "field"):
        assert main(["plot", ex_file, "--kind", kind, "--reference-box", "--out", str(tmp_path)]) == 0
        assert (tmp_path / "plot.svg").read_text().count("<path") == 1 + 2


def test_run_rejects_unknown_experiment():
    with pytest.raises(ConfigError):
        run(ExperimentConfig("nope"))


def test_config_round_trip():
    c = ExperimentConfig("decay-profile", seed=3, nus=(0.5,))
    d = c.to_dict()
    assert d["experiment"] == "decay-profile" and d["seed"] == 3 and d["nus"] == [0.5]
