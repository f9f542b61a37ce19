import json
import subprocess
import sys
from pathlib import Path

import pytest

from pebblelp.cli import EXIT_GUARD, EXIT_OK, EXIT_SOLVER, EXIT_USAGE, EXIT_VERIFY, main

CERTS = Path(__file__).resolve().parent.parent / "certs"


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_bound_petersen_all_roots(capsys):
    code, out, _ = run(capsys, "bound", "--graph", "petersen", "--root", "all", "--depth", "2",
                       "--json")
    assert code == EXIT_OK
    data = json.loads(out)
    assert [r["bound"] for r in data["reports"]] == [10] * 10
    assert [r["root"] for r in data["reports"]] == [f"v{i}" for i in range(1, 11)]


def test_bound_r20_v1(capsys):
    code, out, _ = run(capsys, "bound", "--graph", "r20", "--root", "v1", "--depth", "2")
    assert code == EXIT_OK and "max bound 20" in out


def test_sample_deterministic(tmp_path, capsys):
    g = tmp_path / "g.txt"
    g.write_text("1: 2 3\n2: 1 4\n3: 1 4 5\n4: 2 3 6\n5: 3 6\n6: 4 5 7\n7: 6\n")
    outs = []
    for _ in range(2):
        code, out, _ = run(capsys, "bound", "--graph", f"file:{g}", "--sample", "50",
                           "--seed", "7", "--depth", "4", "--json")
        assert code == EXIT_OK
        outs.append(out)
    assert outs[0] == outs[1]
    assert "seconds" not in outs[0]


def test_sample_needs_seed(capsys):
    code, _, err = run(capsys, "bound", "--graph", "petersen", "--sample", "10")
    assert code == EXIT_USAGE and "seed" in err


def test_usage_errors(capsys):
    assert run(capsys, "bound")[0] == EXIT_USAGE
    assert run(capsys, "bound", "--graph", "nosuch")[0] == EXIT_USAGE
    assert run(capsys, "frobnicate")[0] == EXIT_USAGE
    assert run(capsys, "verify", "--graph", "r15")[0] == EXIT_USAGE


def test_uncovered_is_solver_failure(capsys):
    code, _, err = run(capsys, "bound", "--graph", "path:6", "--root", "v1", "--depth", "1")
    assert code == EXIT_SOLVER and "v4" in err


def test_exact(capsys):
    for spec, pi in (("lemke", 8), ("cycle:7", 11), ("cube:3", 8)):
        code, out, _ = run(capsys, "exact", "--graph", spec, "--json")
        assert code == EXIT_OK and json.loads(out)["pi"] == pi


def test_exact_guard(capsys):
    assert run(capsys, "exact", "--graph", "r15")[0] == EXIT_GUARD


def test_verify_ok(capsys):
    code, out, _ = run(capsys, "verify", "--graph", "r15", "--cert", str(CERTS / "r15_v9.json"))
    assert code == EXIT_OK and "OK, bound 15" in out


def test_verify_cases(capsys):
    args = ["verify", "--graph", "r15"]
    for i in (1, 2, 3):
        args += ["--cert", str(CERTS / f"r15_v10_case{i}.txt")]
    code, out, _ = run(capsys, *args, "--json")
    data = json.loads(out)
    assert code == EXIT_OK and data["bound"] == 15 and data["disclaimer"]


def test_verify_corrupted(tmp_path, capsys):
    text = (CERTS / "r15_v2.txt").read_text().splitlines()
    k = next(i for i, line in enumerate(text) if "|" in line and not line.startswith("sum")
             and max(map(int, line.split("|")[1].split())) >= 4)
    mult, coeffs, rhs = text[k].split("|")
    nums = coeffs.split()
    j = max(range(len(nums)), key=lambda i: int(nums[i]))
    nums[j] = "1"
    text[k] = f"{mult}| {' '.join(nums)} |{rhs}"
    bad = tmp_path / "bad.txt"
    bad.write_text("\n".join(text) + "\n")
    code, _, err = run(capsys, "verify", "--graph", "r15", "--cert", str(bad))
    assert code == EXIT_VERIFY and "row" in err


def test_verify_arithmetic_failure(capsys):
    code, _, err = run(capsys, "verify", "--graph", "lemke2", "--cert",
                       str(CERTS / "ll_v8v8.txt"))
    assert code == EXIT_SOLVER and "98" in err


def test_family_commands(capsys, tmp_path):
    code, out, _ = run(capsys, "family", "cycle-power", "--k", "2", "--json")
    data = json.loads(out)
    assert (data["n"], data["uniform_cover"], data["bound"]) == (23, "8", 23)
    code, out, _ = run(capsys, "family", "cube-bound", "--d", "10", "--json")
    data = json.loads(out)
    assert data["below_limit"] and data["limit"] == 2048
    t = tmp_path / "t.txt"
    t.write_text("v1: v2\nv2: v1 v3 v4\nv3: v2\nv4: v2\n")
    code, out, _ = run(capsys, "family", "tree", "--file", str(t), "--root", "v1", "--json")
    assert json.loads(out)["pi"] == 5
    code, out, _ = run(capsys, "family", "pm2", "--m", "5", "--json")
    assert json.loads(out)["bound"] == 16
    assert run(capsys, "family", "cycle")[0] == EXIT_USAGE


def test_out_file(tmp_path, capsys):
    out = tmp_path / "o.json"
    assert main(["family", "petersen", "--json", "--out", str(out)]) == EXIT_OK
    assert json.loads(out.read_text())["bound"] == 10


def test_module_entry_point():
    res = subprocess.run([sys.executable, "-m", "pebblelp", "family", "cube-bound", "--d", "3"],
                         capture_output=True, text=True)
    assert res.returncode == 0 and "value: 9" in res.stdout


def test_parallel_matches_serial(capsys, monkeypatch):
    args = ["bound", "--graph", "petersen", "--root", "v1,v2", "--json"]
    monkeypatch.setenv("PEBBLE_THREADS", "1")
    serial = run(capsys, *args)[1]
    monkeypatch.setenv("PEBBLE_THREADS", "2")
    assert run(capsys, *args)[1] == serial
