from __future__ import annotations

import csv
import json
import subprocess
import sys
from pathlib import Path

import pytest
import yaml
from hypothesis import given
from hypothesis import strategies as st

from lclsim.algorithms import LinialColoring
from lclsim.cli import main
from lclsim.config import ConfigError, ExperimentConfig


def write_config(path: Path, **data) -> Path:
    path.write_text(yaml.safe_dump(data))
    return path


def read_csv(path: Path) -> list[dict[str, str]]:
    with path.open() as fh:
        return list(csv.DictReader(fh))


# config


@given(
    st.integers(0, 2**63 - 1),
    st.integers(1, 10**6),
    st.sampled_from(["run", "sweep", "bridge", "shift", "rotation", "adversary"]),
    st.lists(st.integers(3, 10**6), max_size=6),
    st.floats(0.01, 0.99),
)
def test_config_round_trips_exactly(seed, trials, kind, values, x0):
    cfg = ExperimentConfig(kind=kind, seed=seed, trials=trials, sweep={"param": "n", "values": values})
    cfg.rotation["x0"] = x0
    text = cfg.dumps()
    back = ExperimentConfig.loads(text)
    assert back == cfg and back.dumps() == text


def test_config_merges_nested_defaults():
    cfg = ExperimentConfig.loads("kind: shift\nshift: {samples: 3}\n")
    assert cfg.shift["samples"] == 3 and cfg.shift["W"] == 10_000


@pytest.mark.parametrize(
    "text",
    ["kind: nonsense", "colour: red", "graph: {name: moebius}", "algorithm: {name: oracle}",
     "problem: {name: sat}", "seed: null", "trials: 0", "id_source: quantum", "shift: {rule: magic}", "[1, 2]"],
)
def test_config_rejects_bad_documents(text):
    with pytest.raises(ConfigError):
        ExperimentConfig.loads(text)


def test_config_file_io(tmp_path):
    cfg = ExperimentConfig(kind="bridge", n_nominal=1024)
    cfg.save(tmp_path / "c.yaml")
    assert ExperimentConfig.load(tmp_path / "c.yaml") == cfg
    (tmp_path / "bad.yaml").write_text("kind: [unclosed\n")
    with pytest.raises(ConfigError):
        ExperimentConfig.load(tmp_path / "bad.yaml")


# subcommands


def test_sweep_rounds_are_monotone(tmp_path):
    cfg = write_config(tmp_path / "c.yaml", kind="sweep", graph={"name": "cycle", "n": 8},
                       sweep={"param": "n", "values": [2**8, 2**10, 2**12, 2**16]})
    assert main(["run", "--config", str(cfg), "--out-dir", str(tmp_path / "o")]) == 0
    rows = read_csv(tmp_path / "o" / "sweep.csv")
    assert [int(r["n"]) for r in rows] == [2**8, 2**10, 2**12, 2**16]
    rounds = [int(r["rounds"]) for r in rows]
    assert rounds == sorted(rounds)
    _, c2 = LinialColoring(2).constants()
    assert rounds[-1] <= 4 + c2
    assert all(r["violations"] == "0" for r in rows)
    summary = json.loads((tmp_path / "o" / "sweep.json").read_text())
    assert summary["verdict"] == "ok" and summary["seed"] == 0


def test_empty_sweep_writes_header_only(tmp_path):
    cfg = write_config(tmp_path / "c.yaml", kind="sweep", sweep={"param": "n", "values": []})
    assert main(["run", "--config", str(cfg), "--out-dir", str(tmp_path)]) == 0
    lines = (tmp_path / "sweep.csv").read_text().splitlines()
    assert len(lines) == 1 and lines[0].startswith("graph,param,value,n,")


def test_adversary_against_parity(tmp_path):
    cfg = write_config(tmp_path / "c.yaml", algorithm={"name": "id-parity"}, graph={"name": "path", "n": 1000})
    assert main(["adversary", "--config", str(cfg), "--out-dir", str(tmp_path)]) == 1
    data = json.loads((tmp_path / "adversary.json").read_text())
    assert data["verdict"] == "falsified" and data["verified"]
    cert = json.loads((tmp_path / "certificate.json").read_text())
    assert len(cert["swapped_ids"]) == 1000 and cert["T"] == 0


def test_adversary_inapplicable(tmp_path):
    cfg = write_config(tmp_path / "c.yaml", algorithm={"name": "full-view-path"}, graph={"name": "path", "n": 100})
    assert main(["adversary", "--config", str(cfg), "--out-dir", str(tmp_path)]) == 0
    assert json.loads((tmp_path / "adversary.json").read_text())["status"] == "inapplicable"


def test_gen(tmp_path):
    cfg = write_config(tmp_path / "c.yaml", graph={"name": "torus", "dims": [3, 3]})
    assert main(["gen", "--config", str(cfg), "--out-dir", str(tmp_path)]) == 0
    assert json.loads((tmp_path / "graph.json").read_text())["edges"] == 18
    assert (tmp_path / "graph.txt").read_text().startswith("9 4\n")


def test_bridge(tmp_path):
    cfg = write_config(tmp_path / "c.yaml", graph={"name": "cycle", "n": 3000}, n_nominal=1024)
    assert main(["bridge", "--config", str(cfg), "--out-dir", str(tmp_path)]) == 0
    plan = json.loads((tmp_path / "bridge.json").read_text())["plan"]
    assert plan["n_nominal"] == 1024 and plan["colors_used"] <= 1024


def test_bridge_infeasible_is_an_error(tmp_path):
    cfg = write_config(tmp_path / "c.yaml", graph={"name": "cycle", "n": 3000}, n_nominal=16)
    assert main(["bridge", "--config", str(cfg), "--out-dir", str(tmp_path)]) == 2


def test_bridge_falsifies_parity(tmp_path):
    cfg = write_config(tmp_path / "c.yaml", graph={"name": "cycle", "n": 500}, n_nominal=64,
                       algorithm={"name": "id-parity"}, problem={"name": "coloring", "k": 2})
    assert main(["bridge", "--config", str(cfg), "--out-dir", str(tmp_path)]) == 1
    assert read_csv(tmp_path / "bridge_violations.csv")


def test_shift(tmp_path):
    cfg = write_config(tmp_path / "c.yaml", shift={"samples": 2, "W": 2000, "span": 1000})
    assert main(["shift", "--config", str(cfg), "--out-dir", str(tmp_path)]) == 0
    rows = read_csv(tmp_path / "shift.csv")
    assert [r["violations"] for r in rows] == ["0", "0"]
    assert [r["certificate_failures"] for r in rows] == ["0", "0"]
    assert sum(int(r["count"]) for r in read_csv(tmp_path / "shift_radii.csv")) == 2 * 2001


def test_shift_falsifies_lifted_parity(tmp_path):
    cfg = write_config(tmp_path / "c.yaml", shift={"rule": "lifted", "samples": 1, "W": 1500, "span": 500},
                       algorithm={"name": "id-parity"}, problem={"name": "coloring", "k": 2}, n_nominal=1024)
    assert main(["shift", "--config", str(cfg), "--out-dir", str(tmp_path)]) == 1


def test_shift_cap_errors_exit_two(tmp_path):
    cfg = write_config(tmp_path / "c.yaml", shift={"samples": 1, "W": 200, "span": 200, "p_max": 8})
    assert main(["shift", "--config", str(cfg), "--out-dir", str(tmp_path)]) == 2
    assert json.loads((tmp_path / "shift.json").read_text())["verdict"] == "cap-errors"


def test_rotation(tmp_path):
    cfg = write_config(tmp_path / "c.yaml", rotation={"count": 3, "length": 10_000, "candidates": 50})
    assert main(["rotation", "--config", str(cfg), "--out-dir", str(tmp_path)]) == 0
    rows = read_csv(tmp_path / "rotation.csv")
    assert len(rows) == 3
    assert all(r["orbit_violations"] == "0" and r["candidates_failed"] == "50" for r in rows)


def test_rotation_rejects_rational(tmp_path):
    cfg = write_config(tmp_path / "c.yaml", rotation={"alphas": [0.5]})
    assert main(["rotation", "--config", str(cfg), "--out-dir", str(tmp_path)]) == 2


def test_luby_run_and_parallel_replay(tmp_path):
    cfg = write_config(tmp_path / "c.yaml", algorithm={"name": "luby"}, problem={"name": "mis"},
                       graph={"name": "cycle", "n": 500}, seed=7)
    assert main(["run", "--config", str(cfg), "--trials", "40", "--out-dir", str(tmp_path / "a")]) == 0
    assert main(["run", "--config", str(cfg), "--trials", "40", "--jobs", "2", "--out-dir", str(tmp_path / "b")]) == 0
    assert (tmp_path / "a" / "run.csv").read_bytes() == (tmp_path / "b" / "run.csv").read_bytes()
    rows = read_csv(tmp_path / "a" / "run.csv")
    assert len(rows) == 40 and {r["seed"] for r in rows} == {"7"}


def test_coin_flip_is_falsified(tmp_path):
    cfg = write_config(tmp_path / "c.yaml", algorithm={"name": "coin-flip"}, problem={"name": "coloring", "k": 2},
                       graph={"name": "path", "n": 20})
    assert main(["run", "--config", str(cfg), "--trials", "200", "--out-dir", str(tmp_path)]) == 1


def test_replay_is_byte_identical(tmp_path):
    cfg = write_config(tmp_path / "c.yaml", graph={"name": "cycle", "n": 300}, id_source="random", n_nominal=300)
    for d in ("a", "b"):
        assert main(["run", "--config", str(cfg), "--trials", "20", "--seed", "5", "--out-dir", str(tmp_path / d)]) == 0
    assert (tmp_path / "a" / "run.csv").read_bytes() == (tmp_path / "b" / "run.csv").read_bytes()
    saved = ExperimentConfig.load(tmp_path / "a" / "run.config.yaml")
    assert saved.seed == 5 and saved.trials == 20


def test_errors_exit_two(tmp_path, capsys):
    assert main(["run", "--config", str(tmp_path / "missing.yaml")]) == 2
    bad = write_config(tmp_path / "bad.yaml", kind="run", graph={"name": "cycle", "n": 2})
    assert main(["run", "--config", str(bad), "--out-dir", str(tmp_path)]) == 2
    wrong = write_config(tmp_path / "w.yaml", kind="rotation")
    assert main(["run", "--config", str(wrong), "--out-dir", str(tmp_path)]) == 2
    assert main(["report", "--out-dir", str(tmp_path / "empty")]) == 2
    assert "error" in capsys.readouterr().err


def test_report(tmp_path):
    out = str(tmp_path)
    sweep = write_config(tmp_path / "s.yaml", kind="sweep", sweep={"param": "n", "values": [64, 256]})
    main(["run", "--config", str(sweep), "--out-dir", out])
    main(["adversary", "--config", str(write_config(tmp_path / "a.yaml", algorithm={"name": "id-parity"},
                                                  graph={"name": "path", "n": 100})), "--out-dir", out])
    main(["bridge", "--config", str(write_config(tmp_path / "b.yaml", graph={"name": "cycle", "n": 500},
                                               n_nominal=1024)), "--out-dir", out])
    main(["shift", "--config", str(write_config(tmp_path / "h.yaml", shift={"samples": 1, "W": 1000, "span": 300})),
          "--out-dir", out])
    main(["rotation", "--config", str(write_config(tmp_path / "r.yaml", rotation={"count": 2, "candidates": 20,
                                                                                "length": 1000})), "--out-dir", out])
    assert main(["report", "--out-dir", out]) == 0
    text = (tmp_path / "report.md").read_text()
    for kind in ("sweep", "adversary", "bridge", "shift", "rotation"):
        assert f"## {kind}:" in text
    for png in ("sweep_rounds.png", "shift_radii.png", "rotation_rules.png"):
        assert (tmp_path / png).read_bytes()[:4] == b"\x89PNG"


def test_console_entry_point(tmp_path):
    proc = subprocess.run([sys.executable, "-m", "lclsim.cli", "gen", "--out-dir", str(tmp_path)],
                          capture_output=True, text=True)
    assert proc.returncode == 0
    assert (tmp_path / "graph.txt").exists()
