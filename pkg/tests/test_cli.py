import csv
import json
import subprocess
import sys

import pytest

from orliczlab import experiments as ex
from orliczlab.cli import main


def write(tmp_path, cfg, name="c.json"):
    path = tmp_path / name
    path.write_text(json.dumps(cfg) if not isinstance(cfg, str) else cfg)
    return str(path)


def test_list(capsys):
    assert main(["list"]) == 0
    out = capsys.readouterr().out.strip().splitlines()
    assert len(out) >= 13
    assert any(line.startswith("thm7-equivalence") for line in out)
    # exactly one bracketed tag per id
    assert all(line.count("[") == 1 and line.count("]") == 1 for line in out)
    tags = [e.tag for e in ex.EXPERIMENTS.values()]
    assert len(set(tags)) == len(tags)


def test_norm_one_off(capsys):
    assert main(["norm", "--space", "torus", "--function", "g_m:m=1", "--norm", "orlicz:N_1"]) == 0
    rec = json.loads(capsys.readouterr().out)
    assert rec["value"] == pytest.approx(4.0, rel=1e-3)
    assert main(["norm", "--function", "g_m:m=1", "--norm", "sobolev:k=1"]) == 2


def test_norm_table_run(tmp_path, capsys):
    cfg = {"schema": ex.CONFIG_SCHEMA, "seed": 3, "experiments": [
        {"id": "norm-table", "params": {"functions": ["g_m:m=1", "trig", "poisson"],
                                        "norms": ["lp:p=2", "orlicz:N_1", "g_psi:alpha=2,m=1"],
                                        "moment_resolution": 4096}}]}
    out = tmp_path / "out"
    assert main(["run", "--config", write(tmp_path, cfg), "--out", str(out)]) == 0
    with open(out / "00_norm-table__norms.csv") as fh:
        rows = list(csv.reader(fh))
    assert rows[0] == ["function", "norm", "value", "flags"]
    assert len(rows) == 1 + 3 * 3
    rep = json.loads((out / "report.json").read_text())
    assert rep["passed"] and rep["seed"] == 3
    assert rep["experiments"][0]["tag"] == ex.EXPERIMENTS["norm-table"].tag


@pytest.mark.parametrize("cfg", [
    "{not json",
    {"experiments": [{"id": "duality"}]},
    {"schema": ex.CONFIG_SCHEMA, "experiments": []},
    {"schema": ex.CONFIG_SCHEMA, "experiments": [{"id": "no-such-experiment"}]},
    {"schema": ex.CONFIG_SCHEMA, "experiments": [{"id": "duality", "params": [1, 2]}]},
    {"schema": ex.CONFIG_SCHEMA, "seed": "one", "experiments": [{"id": "duality"}]},
    {"schema": ex.CONFIG_SCHEMA, "experiments": [
        {"id": "norm-table", "params": {"functions": ["no_such_function"]}}]},
])
def test_schema_violations_exit_2(tmp_path, cfg):
    assert main(["run", "--config", write(tmp_path, cfg), "--out", str(tmp_path / "o")]) == 2


def test_missing_config_exits_2(tmp_path):
    assert main(["run", "--config", str(tmp_path / "nope.json"), "--out", str(tmp_path)]) == 2


def test_numeric_failure_exits_1(tmp_path, capsys):
    # alpha < 1 is outside the fundamental-function formula's domain
    cfg = {"schema": ex.CONFIG_SCHEMA, "experiments": [
        {"id": "fundamental-curve", "params": {"alpha": 0.5, "resolution": 1024}}]}
    out = tmp_path / "o"
    assert main(["run", "--config", write(tmp_path, cfg), "--out", str(out)]) == 1
    rep = json.loads((out / "report.json").read_text())
    assert "ValueError" in rep["experiments"][0]["error"]
    assert "ERROR" in capsys.readouterr().err


def test_failed_check_exits_1_unless_not_asserted(tmp_path):
    base = {"id": "lemma1-sharpness", "params": {"resolution": 2048, "m": [1]}}
    cfg = {"schema": ex.CONFIG_SCHEMA, "experiments": [base]}
    assert main(["run", "--config", write(tmp_path, cfg), "--out", str(tmp_path / "a")]) == 1
    cfg["experiments"][0] = dict(base, **{"assert": False})
    assert main(["run", "--config", write(tmp_path, cfg), "--out", str(tmp_path / "b")]) == 0


def test_console_script_and_determinism(tmp_path):
    cfg = write(tmp_path, {"schema": ex.CONFIG_SCHEMA, "seed": 5, "experiments": [
        {"id": "hausdorff-young", "params": {"n_tests": 5}}, {"id": "thm9-dominance"}]})
    docs = []
    for k, threads in enumerate(("1", "2")):
        out = tmp_path / f"r{k}"
        proc = subprocess.run([sys.executable, "-m", "orliczlab.cli", "run", "--config", cfg,
                               "--out", str(out), "--threads", threads],
                              capture_output=True, text=True)
        assert proc.returncode == 0, proc.stderr
        doc = json.loads((out / "report.json").read_text())
        doc.pop("timestamp")
        docs.append(json.dumps(doc, sort_keys=True))
    assert docs[0] == docs[1]
