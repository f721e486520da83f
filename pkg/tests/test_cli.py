import json
import subprocess
import sys

import numpy as np
import pytest

from borsuk_bounds import cli
from borsuk_bounds.geometry import sample_point_set, save_points
from borsuk_bounds.report import emit_report, to_csv, to_json, to_markdown, write_atomic


def run(capsys, *argv):
    code = cli.main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def run_json(capsys, *argv):
    code, out, _ = run(capsys, *argv)
    return code, json.loads(out)


def test_bounds_best(capsys):
    code, d = run_json(capsys, "bounds", "best", "--b", "0.5")
    assert code == 0 and d["base"] == pytest.approx(2.1213203436, abs=1e-10)
    code, d = run_json(capsys, "bounds", "best", "--b", "0.9")
    assert d["base"] == pytest.approx(1.3170300, abs=1e-6)


def test_bounds_value(capsys):
    code, d = run_json(capsys, "bounds", "value", "--id", "6", "--b", "0.5")
    assert code == 0 and d["base"] == 3.0


def test_bounds_crossover(capsys):
    code, d = run_json(capsys, "bounds", "crossover", "--id1", "5", "--id2", "6")
    assert code == 0 and d["b"] == pytest.approx(0.2247448714, abs=1e-10)
    code, d = run_json(capsys, "bounds", "crossover", "--id1", "9", "--id2", "5")
    assert code == 0 and d["result"] == "NO_CROSSING"


def test_bounds_sweep_csv(capsys):
    code, out, _ = run(capsys, "bounds", "sweep", "--from", "0.1", "--to", "0.3", "--step", "0.1")
    lines = out.split("\n")
    assert code == 0 and lines[-1] == "" and "\r" not in out
    assert len(lines[:-1]) == 4
    assert lines[0].startswith("b,")
    assert all(len(row.split(",")) == len(lines[0].split(",")) for row in lines[1:-1])


def test_bounds_dominance_markdown(capsys):
    code, out, _ = run(capsys, "bounds", "dominance", "--grid", "500", "--format", "markdown-table")
    assert code == 0 and out.rstrip().endswith("none")


def test_verify_lemma2(capsys):
    code, d = run_json(capsys, "verify", "lemma2", "--samples", "10000", "--seed", "7", "--tol", "1e-6")
    assert code == 0 and d["seed"] == 7 and d["samples"] == 10000


def test_verify_failure_exit_code(capsys):
    code, d = run_json(capsys, "verify", "lemma2", "--samples", "200", "--seed", "1", "--tol", "1e-18")
    assert code == 1


def test_seed_accepts_hex(capsys):
    code, d = run_json(capsys, "verify", "lemma3", "--samples", "1000", "--seed", "0x10")
    assert code == 0 and d["seed"] == 16


@pytest.mark.parametrize("argv", [
    ["bounds", "best", "--b", "1.5"],
    ["bounds", "value", "--id", "42", "--b", "0.5"],
    ["cover", "circle", "--r", "1", "--rho", "2"],
    ["hierarchy", "--dim", "2", "--r", "1", "--lambda", "0.6", "--eps", "0.1", "--delta", "0.1"],
    ["jung", "--input", "/nonexistent/points.csv"],
])
def test_bad_input_exits_2(capsys, argv):
    code, out, err = run(capsys, *argv)
    assert code == 2 and out == "" and err.startswith("error:")


@pytest.mark.parametrize("argv", [
    ["verify", "lemma2", "--seed", "-1"],
    ["hierarchy", "--dim", "2", "--r", "1", "--lambda", "five", "--eps", "0.1", "--delta", "0.1"],
    ["bounds"],
])
def test_parse_errors_exit_2(argv):
    with pytest.raises(SystemExit) as exc:
        cli.main(argv)
    assert exc.value.code == 2


def test_jung_and_partition(tmp_path, capsys):
    path = tmp_path / "pts.csv"
    save_points(path, sample_point_set(1, 60, 3))
    code, d = run_json(capsys, "jung", "--input", str(path))
    assert code == 0 and d["n"] == 3 and d["points"] == 60
    code, d = run_json(capsys, "partition", "--input", str(path), "--b", "0.6", "--strategy", "split")
    assert code == 0 and len(d["labels"]) == 60 and d["max_part_diameter"] < 0.6


def test_cover_commands(capsys):
    code, d = run_json(capsys, "cover", "circle", "--r", "1", "--rho", "0.5")
    assert code == 0 and d["oracle_count"] == 6 and "greedy_count" not in d
    code, d = run_json(capsys, "cover", "circle", "--r", "1", "--rho", "0.5", "--mesh", "2000")
    assert code == 0 and d["certified"] and 6 <= d["greedy_count"] <= 7
    code, d = run_json(capsys, "cover", "sphere", "--r", "1", "--rho", "0.8")
    assert code == 0 and d["certified"] and d["count"] >= 5


def test_hierarchy_command(capsys):
    code, d = run_json(capsys, "hierarchy", "--dim", "2", "--r", "1", "--lambda", "5/9",
                       "--eps", "0.1", "--delta", "0.8", "--seed", "3")
    assert code == 0 and d["verification"]["structural_ok"]
    assert d["hierarchy"]["k0"] == 1 and d["hierarchy"]["seed"] == 3


def test_out_file_matches_stdout(tmp_path, capsys):
    argv = ["verify", "identity", "--samples", "50", "--seed", "4"]
    _, out, _ = run(capsys, *argv)
    path = tmp_path / "id.json"
    code, printed, _ = run(capsys, *argv, "--out", str(path))
    assert code == 0 and printed == ""
    assert path.read_text() == out
    keys = list(json.loads(out))
    assert keys == sorted(keys)


def test_module_entry_point():
    res = subprocess.run([sys.executable, "-m", "borsuk_bounds", "bounds", "best", "--b", "0.5"],
                         capture_output=True, text=True, check=False)
    assert res.returncode == 0 and json.loads(res.stdout)["id"]


def test_report_helpers(tmp_path):
    assert to_json({"b": np.float64(0.5), "a": np.int64(2), "c": np.array([True])}) == \
        '{\n  "a": 2,\n  "b": 0.5,\n  "c": [\n    true\n  ]\n}\n'
    assert to_json({"x": float("inf")}) == '{\n  "x": "inf"\n}\n'
    assert to_csv(["a", "b"], [[1, 0.5], [None, True]]) == "a,b\n1,0.5\n,true\n"
    assert to_markdown([], title="t") == "## t\n\nnone\n"
    assert to_markdown([{"a": 1, "b": 2.5}]) == "| a | b |\n|---|---|\n| 1 | 2.5 |\n"
    path = tmp_path / "x.txt"
    write_atomic(path, "one\n")
    write_atomic(path, "two\n")
    assert path.read_text() == "two\n"
    assert [p.name for p in tmp_path.iterdir()] == ["x.txt"]
    with pytest.raises(OSError):
        write_atomic(tmp_path / "missing" / "x.txt", "z")
    with pytest.raises(ValueError):
        emit_report({}, "yaml")
