import json
import subprocess
import sys

import pytest

from grundygp import cli


def run_cli(capsys, *argv):
    code = cli.main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


@pytest.mark.parametrize(
    "ruleset, position, expected",
    [
        ("ga2", "3,3,2", "2"),
        ("ga1", "4", "3"),
        ("ga1", "001000111", None),
        ("cm", "11/00", "2"),
        ("cm", "111/000", "0"),
        ("kayles", "5", "4"),
        ("arc_kayles", "a-b", "1"),
    ],
)
def test_grundy(capsys, ruleset, position, expected):
    code, out, _ = run_cli(capsys, "grundy", "--ruleset", ruleset, "--position", position)
    assert code == 0
    if expected is not None:
        assert out.strip() == expected
    else:
        assert out.strip().isdigit()


def test_options(capsys):
    code, out, _ = run_cli(capsys, "options", "--ruleset", "ga1", "--position", "00")
    assert code == 0 and out.split() == ["01", "10"]


def test_sequence(capsys):
    code, out, _ = run_cli(capsys, "sequence", "--ruleset", "cm", "--max", "5")
    assert code == 0
    assert out.splitlines() == ["n,grundy", "1,0", "2,2", "3,0", "4,2", "5,0"]


def test_dataset_eval_round_trip(capsys, tmp_path):
    path = tmp_path / "d.csv"
    code, _, err = run_cli(capsys, "dataset", "--ruleset", "ga2", "--heaps", "1", "--max-size", "10", "--out", str(path))
    assert code == 0 and "10 rows" in err
    assert path.read_text().splitlines()[0] == "h,g"
    code, out, _ = run_cli(capsys, "eval", "--formula", "MOD(SUB(h,1),PLUS1(PLUS1(1)))", "--dataset", str(path))
    assert code == 0 and json.loads(out) == {"abs_diff": 0, "nim_dist": 0}


def test_evolve_writes_report(capsys, tmp_path):
    data = tmp_path / "d.csv"
    cfg = tmp_path / "cfg.json"
    report = tmp_path / "r.json"
    run_cli(capsys, "dataset", "--ruleset", "ga2", "--heaps", "1", "--max-size", "1", "--out", str(data))
    cfg.write_text(json.dumps({"population_size": 50, "generations": 3}))
    code, out, err = run_cli(
        capsys, "evolve", "--dataset", str(data), "--config", str(cfg), "--threads", "2", "--report", str(report)
    )
    assert code == 0
    doc = json.loads(report.read_text())
    assert doc["config"]["population_size"] == 50
    assert out.strip() == doc["best_expression"]
    assert doc["termination"] in err


def test_verify_subset(capsys):
    code, out, err = run_cli(
        capsys, "verify", "--check", "ga1-kayles", "--bounds", "ga1-kayles.max_n=10", "ga1-kayles.max_bits=6"
    )
    assert code == 0
    doc = json.loads(out)
    assert doc[0]["name"] == "ga1-kayles" and doc[0]["status"] == "pass"
    assert doc[0]["bounds"]["max_n"] == 10
    assert "1/1 checks passed" in err


@pytest.mark.parametrize(
    "argv",
    [
        ["grundy", "--ruleset", "cm", "--position", "11/0"],
        ["grundy", "--ruleset", "ga1", "--position", "0" * 25],
        ["eval", "--formula", "MOD(h)", "--dataset", "/nonexistent.csv"],
        ["verify", "--bounds", "ga1-kayles"],
        ["verify", "--bounds", "ga1-kayles.max_n=1"],
        ["evolve", "--dataset", "/nonexistent.csv"],
    ],
)
def test_errors_exit_2(capsys, argv):
    code, out, err = run_cli(capsys, *argv)
    assert code == 2
    assert "error" in err and out == ""


def test_bad_ruleset_is_usage_error(capsys):
    with pytest.raises(SystemExit) as info:
        cli.main(["grundy", "--ruleset", "chess", "--position", "1"])
    assert info.value.code == 2


def test_module_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "grundygp", "grundy", "--ruleset", "ga2", "--position", "5,"],
        capture_output=True,
        text=True,
        check=False,
    )
    assert proc.returncode == 0 and proc.stdout.strip() == "1"
