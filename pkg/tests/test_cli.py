import csv
import json
import subprocess
import sys

import pytest

from phiperiodic.cli import main
from phiperiodic.scenarios import preset_config


def _run(tmp_path, *args, sub="out"):
    out = tmp_path / sub
    code = main([*args, "--out-dir", str(out)])
    return code, out, json.loads((out / "report.json").read_text())


def test_malformed_config_exit_1(tmp_path, capsys):
    cfg = preset_config("convex-well")
    cfg.pop("scenario")
    del cfg["problem"]["T"]
    path = tmp_path / "bad.json"
    path.write_text(json.dumps(cfg))
    code, _, rep = _run(tmp_path, "check", "--config", str(path))
    assert code == 1
    assert rep["error"]["path"] == ".problem.T"
    assert ".problem.T" in capsys.readouterr().err


def test_missing_input_exit_1(tmp_path):
    code, _, rep = _run(tmp_path, "solve")
    assert code == 1 and rep["error"]["type"] == "ConfigError"


def test_check_convex_fails_a2(tmp_path):
    code, _, rep = _run(tmp_path, "check", "--scenario", "convex-well")
    assert code == 2
    assert "a2" in rep["failed"]
    assert rep["status"] == "hypothesis failed"


def test_check_double_well_passes(tmp_path):
    code, _, rep = _run(tmp_path, "check", "--scenario", "symmetric-double-well")
    assert code == 0 and rep["failed"] == []
    assert list(rep)[:3] == ["command", "exit_code", "status"]


def test_solve_writes_trajectories(tmp_path):
    code, out, rep = _run(tmp_path, "solve", "--scenario", "convex-well", "--n-starts", "4")
    assert code == 0
    assert rep["config"]["optimizer"]["n_starts"] == 4
    rows = list(csv.reader((out / "trajectories.csv").open()))
    N = rep["config"]["problem"]["N"]
    assert rows[0][:2] == ["t", "u1"] and len(rows) == N + 2     # header + N+1 nodes
    assert float(rows[1][0]) == 0.0 and float(rows[-1][0]) == pytest.approx(1.0)
    assert rows[1][1:] == rows[-1][1:]                               # periodic closure


def test_saddle_trace_and_rerun_from_report(tmp_path):
    args = ["saddle", "--scenario", "balanced-tilt", "--seed", "3", "--max-iters", "5"]
    code, out, rep = _run(tmp_path, *args)
    assert code in (0, 3)
    assert rep["config"]["saddle"]["max_iters"] == 5
    header = (out / "trace.csv").read_text().splitlines()[0].split(",")
    M = rep["config"]["problem"]["M"]
    assert header == ["iter", "m"] + [f"psi{c}" for c in range(M)] + ["certificate"]
    assert len(rep["results"]["trace"]) == rep["results"]["iterations"] <= 5
    code2, out2, rep2 = _run(tmp_path, "saddle", "--config", str(out / "report.json"), sub="b")
    assert code2 == code
    for name in ("report.json", "trace.csv", "trajectories.csv"):
        assert (out / name).read_bytes() == (out2 / name).read_bytes()


def test_saddle_convex_not_found(tmp_path):
    code, _, rep = _run(tmp_path, "saddle", "--scenario", "convex-well", "--max-iters", "3")
    assert code == 3 and rep["status"] == "NotFound"


def test_verify_writes_convergence(tmp_path):
    path = tmp_path / "v.json"
    path.write_text(json.dumps({"scenario": "symmetric-double-well",
                                "verify": {"N_list": [16, 32]}, "problem": {"N": 32}}))
    code, out, rep = _run(tmp_path, "verify", "--config", str(path))
    assert code == 0
    lines = (out / "convergence.csv").read_text().splitlines()
    assert lines[0] == "N,value,residual" and len(lines) == 3
    assert rep["results"]["el_residual"]["max"] <= 1e-8


def test_module_entry_point(tmp_path):
    out = subprocess.run([sys.executable, "-m", "phiperiodic", "check", "--scenario",
                          "convex-well", "--out-dir", str(tmp_path)],
                         capture_output=True, text=True)
    assert out.returncode == 2
    assert "check: exit 2" in out.stdout
