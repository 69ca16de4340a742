import json

import pytest
from click.testing import CliRunner

from cylnogo.cli import cli


@pytest.fixture
def runner():
    return CliRunner(mix_stderr=False)


def invoke(runner, *args):
    return runner.invoke(cli, ["--log-level", "WARNING", *args])


def test_bracket(runner):
    result = invoke(runner, "bracket", "l", "E[1]")
    assert result.exit_code == 0, result.stderr
    lines = result.stdout.splitlines()
    assert lines[0] == "i*E[1]"
    assert lines[1].startswith("trig: ")


def test_quantize_with_a_bound_parameter(runner):
    result = invoke(runner, "quantize", "l", "--nu", "0")
    assert result.stdout.strip() == "D"


def test_quantize_outside_the_domain(runner):
    result = invoke(runner, "quantize", "l^2")
    assert result.exit_code == 2
    assert result.stderr.startswith("Error: ")


def test_ket_commands(runner):
    assert invoke(runner, "apply", "D", "--ket", "3").stdout.strip() == "3*|3>"
    assert invoke(runner, "melem", "E[1]", "--bra", "4", "--ket", "3").stdout.strip() == "1"


def test_comm(runner):
    result = invoke(runner, "comm", "D", "E[1]")
    assert result.stdout.splitlines()[0] == "E[1]"


def test_solve(runner):
    result = invoke(runner, "solve", "(b - 1) + (c - 2*b)*D", "--unknowns", "b,c")
    assert result.exit_code == 0, result.stderr
    assert result.stdout.splitlines()[-1] == "solved: b = 1; c = 2"


def test_closure(runner):
    result = invoke(runner, "closure", "--gens", "preset:B", "--maxdeg", "3", "--maxharm", "4")
    assert result.exit_code == 0, result.stderr
    assert result.stdout.splitlines() == ["dimension: 4 of 36", "pivots: (0,-1) (0,0) (0,1) (1,0)"]


def test_closure_from_a_file(runner, tmp_path):
    path = tmp_path / "gens.txt"
    path.write_text("# the affine generators\nl\nsin\n\ncos\n1\n")
    result = invoke(runner, "closure", "--gens", str(path), "--maxdeg", "1", "--maxharm", "1")
    assert result.stdout.splitlines()[0] == "dimension: 4 of 6"
    missing = invoke(runner, "closure", "--gens", str(tmp_path / "none.txt"))
    assert missing.exit_code == 2


def test_member(runner):
    args = ["--gens", "preset:B", "--maxdeg", "1", "--maxharm", "2"]
    assert invoke(runner, "member", "--expr", "l + E[1]", *args).stdout.startswith("certified_in: ")
    assert invoke(runner, "member", "--expr", "E[2]", *args).stdout.startswith("not_found_at_cutoff: ")


def test_parse_errors_exit_with_two(runner):
    result = invoke(runner, "bracket", "l +", "l")
    assert result.exit_code == 2
    assert "offset 3" in result.stderr


def test_verify_json(runner):
    result = invoke(runner, "verify", "--only", "iden,trivial-p", "--format", "json", "--jobs", "1", "--no-progress")
    assert result.exit_code == 0, result.stderr
    report = json.loads(result.stdout)
    assert report["version"] == "1.0.0"
    assert set(report["checks"][0]) == {"name", "status", "witness", "paper_anchor", "elapsed_ms"}
    assert [(entry["name"], entry["status"]) for entry in report["checks"]] == [
        ("iden", "pass"),
        ("trivial-p", "inconsistent-as-expected"),
    ]


def test_verify_writes_the_report(runner, tmp_path):
    path = tmp_path / "report.txt"
    result = invoke(runner, "verify", "--only", "newiden", "--jobs", "1", "--no-progress", "--output", str(path))
    assert result.exit_code == 0, result.stderr
    assert result.stdout == ""
    assert "newiden" in path.read_text()


def test_verify_unknown_check(runner):
    result = invoke(runner, "verify", "--only", "nope", "--no-progress")
    assert result.exit_code == 2
    assert "unknown check 'nope'" in result.stderr
