import json

import pytest

from cylnogo.checks import REGISTRY, Check, CheckContext, context_for, run_check, run_checks, select, succeeded
from cylnogo.config import load_manifest
from cylnogo.errors import UnknownCheckError
from cylnogo.reporting import CheckResult, Status, build_report, render, render_json, render_text

NO_GO = {"nogo-main", "trivial-p", "nogo-valpha"}


@pytest.fixture(scope="module")
def manifest():
    return load_manifest()


def test_registry_names():
    assert len(REGISTRY) == 17
    assert {name for name, check in REGISTRY.items() if check.expected is Status.INCONSISTENT_AS_EXPECTED} == NO_GO
    assert [check.name for check in select()] == sorted(REGISTRY)


def test_unknown_check_is_rejected():
    with pytest.raises(UnknownCheckError, match="nope"):
        select(["iden", "nope"])


@pytest.mark.parametrize("name", sorted(REGISTRY))
def test_every_check_reaches_its_expected_status(manifest, name):
    check = REGISTRY[name]
    result = run_check(check, context_for(check, manifest))
    assert succeeded(result), result.witness
    assert result.anchor == check.anchor


def test_witnesses_carry_the_computed_values(manifest):
    iden = run_check(REGISTRY["iden"], context_for(REGISTRY["iden"], manifest))
    assert iden.witness == "residual = 0; classical side = 2; operator side = -2"
    nogo = run_check(REGISTRY["nogo-main"], context_for(REGISTRY["nogo-main"], manifest))
    assert nogo.witness.endswith("inconsistent: i = 0 [E[-1]]")
    posrep = run_check(REGISTRY["posrep-hom"], CheckContext(options={"bound": 2}))
    assert posrep.witness == "residual 0 over 25 monomial pairs"


def test_bound_parameters_reach_the_check():
    check = REGISTRY["trivial-valpha"]
    result = run_check(check, CheckContext({"alpha": 2}, {"bound": 2}))
    assert result.status == Status.PASS
    assert "Q(l) = -2" in result.witness


def test_raising_check_becomes_a_failure():
    def explode(ctx):
        raise RuntimeError("boom")

    result = run_check(Check("boom", "never holds", Status.PASS, explode), CheckContext())
    assert result.status == Status.FAIL
    assert result.witness == "RuntimeError: boom"


@pytest.mark.parametrize("jobs", [1, 2])
def test_run_checks_sorts_results(manifest, jobs):
    seen = []
    results = run_checks(["trivial-p", "iden", "newiden"], jobs, manifest, seen.append)
    assert [result.name for result in results] == ["iden", "newiden", "trivial-p"]
    assert sorted(result.name for result in seen) == ["iden", "newiden", "trivial-p"]
    assert all(succeeded(result) for result in results)


def _results():
    return [
        CheckResult(name="b", status=Status.FAIL, witness="x" * 150, anchor="second", elapsed_ms=2.5),
        CheckResult(name="a", status=Status.PASS, witness="ok", anchor="first", elapsed_ms=1.0),
    ]


def test_json_report():
    document = json.loads(render_json(build_report("1.0.0", _results())))
    assert document["version"] == "1.0.0"
    assert [entry["name"] for entry in document["checks"]] == ["a", "b"]
    assert document["checks"][0] == {"name": "a", "status": "pass", "witness": "ok", "paper_anchor": "first", "elapsed_ms": 1.0}


def test_text_report():
    lines = render_text(build_report("1.0.0", _results())).splitlines()
    assert lines[0].split() == ["check", "status", "ms", "witness"]
    assert lines[2].split() == ["a", "pass", "1.0", "ok"]
    assert lines[3].endswith("x" * 97 + "...")


def test_unknown_report_format():
    with pytest.raises(ValueError):
        render(build_report("1.0.0", []), "xml")
