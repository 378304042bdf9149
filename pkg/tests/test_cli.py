from __future__ import annotations

import json
import math
import subprocess
import sys
from fractions import Fraction

import pytest

from yrk import serialize as ser
from yrk.cli import main


@pytest.fixture
def reps(tmp_path):
    paths = {}
    for name, a in (("a", "0"), ("b", "2/5"), ("c", "-9/10")):
        p = tmp_path / f"{name}.json"
        assert main(["rep", "build", "--a", a, "-o", str(p)]) == 0
        paths[name] = str(p)
    return paths


def test_build_and_verify(reps, capsys):
    assert main(["rep", "verify", reps["b"], "--format", "csv"]) == 0
    out = capsys.readouterr().out
    assert out.startswith("check_id,anchor,residual,tol,passed")
    assert "Y5" in out and "False" not in out


def test_tensor_and_rminus_methods(reps, tmp_path):
    bc = tmp_path / "bc.json"
    assert main(["tensor", "--mode", "drinfeld", "--s", "1/2", reps["b"], reps["c"], "-o", str(bc)]) == 0
    out = tmp_path / "rm.json"
    assert main(["rminus", "--v1", reps["a"], "--v2", str(bc), "--method", "both", "-o", str(out)]) == 0
    doc = json.loads(out.read_text())
    assert doc["agree"] is True
    assert ser.decode_ratmat(doc["recursion"]) == ser.decode_ratmat(doc["closed"])


def test_rzero_value_matches_library(reps, tmp_path):
    out = tmp_path / "r0.json"
    assert main(["rzero", "--v1", reps["a"], "--v2", reps["a"], "--s", "5", "-o", str(out)]) == 0
    doc = json.loads(out.read_text())
    re_, im_ = doc["matrix"][0][0]
    # Γ(5/2)Γ(7/2)/Γ(3)² = 45π/128
    assert abs(complex(re_, im_) - 45 * math.pi / 128) < 1e-10


def test_checks_pass(reps):
    triple = [reps["a"], reps["b"], reps["c"]]
    assert main(["check", "qybe", "--reps", *triple, "--s1", "3.1", "--s2", "2.7", "--format", "csv"]) == 0
    assert main(["check", "cocycle", "--reps", *triple, "--samples", "2"]) == 0
    assert main(["check", "unitarity", "--reps", reps["a"], reps["b"], "--samples", "2"]) == 0
    assert main(["check", "intertwine", "--reps", reps["a"], reps["b"]]) == 0
    assert main(["check", "asymptotics", "--reps", reps["a"], reps["b"], "--direction", "down"]) == 0


def test_corrupted_rminus_fails(reps, tmp_path):
    rm = tmp_path / "rm.json"
    assert main(["rminus", "--v1", reps["a"], "--v2", reps["b"], "-o", str(rm)]) == 0
    doc = json.loads(rm.read_text())
    for i, row in enumerate(doc["entries"]):
        for j, f in enumerate(row):
            if i != j:
                f["num"] = [[str(2 * Fraction(a)), str(2 * Fraction(b))] for a, b in f["num"]]
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps(doc))
    code = main(["check", "qybe", "--reps", reps["a"], reps["b"], reps["c"], "--rminus", str(bad),
                 "--s1", "3.1", "--s2", "2.7"])
    assert code == 1


def test_exit_codes(reps, tmp_path):
    broken = tmp_path / "broken.json"
    broken.write_text('{"cartan": "A1"}')
    assert main(["rep", "verify", str(broken)]) == 2
    assert main(["rep", "verify", str(tmp_path / "missing.json")]) == 2
    assert main(["tensor", reps["a"], reps["a"], "--s", "0"]) == 3
    assert main(["rminus", "--v1", reps["a"], "--v2", reps["b"], "--h", "x"]) == 2
    assert main(["no-such-command"]) == 2


def test_backend_env(monkeypatch, tmp_path):
    monkeypatch.setenv("YRK_BACKEND", "float")
    out = tmp_path / "f.json"
    assert main(["rep", "build", "--a", "0.5", "-o", str(out)]) == 0
    assert json.loads(out.read_text())["backend"] == "float"
    monkeypatch.setenv("YRK_BACKEND", "bogus")
    assert main(["rep", "build"]) == 2


def test_suite_subset(tmp_path, capsys):
    out = tmp_path / "suite.json"
    assert main(["suite", "full", "--only", "C03,C14", "--seed", "7", "-o", str(out)]) == 0
    err = capsys.readouterr().err
    assert "PASS C03" in err and "PASS C14" in err
    doc = json.loads(out.read_text())
    assert doc["passed"] and doc["seed"] == 7


def test_console_entry_point(tmp_path):
    proc = subprocess.run([sys.executable, "-m", "yrk.cli", "rep", "build", "--type", "sl3-vector"],
                          capture_output=True, text=True)
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["dim"] == 3
