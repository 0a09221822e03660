"""The verifier, report rendering and the command line."""

import json

import pytest

from soqc.cli import main
from soqc.errors import InvalidParameter, ReportIOError
from soqc.report import dumps_json, emit_report, render_markdown
from soqc.verify import CATALOG, WEYL_ONLY, CheckRecord, VerifyConfig, run_suite

SUBSET = ("besselprop-4.1", "center-4.3", "partition-4.7", "niennon-5.1")


def test_subset_run():
    rep = run_suite(VerifyConfig(checks=SUBSET))
    assert [c.name for c in rep.checks] == list(CATALOG)
    for c in rep.checks:
        if c.name in SUBSET:
            assert c.status == "pass", c.detail
        else:
            assert (c.status, c.detail) == ("skipped", "not selected")


def test_json_byte_identical_and_jobs():
    """Repeated runs, sequential or threaded, give byte-identical JSON."""
    a = dumps_json(run_suite(VerifyConfig(checks=SUBSET)))
    b = dumps_json(run_suite(VerifyConfig(checks=SUBSET)))
    c = dumps_json(run_suite(VerifyConfig(checks=SUBSET, jobs=3)))
    assert a == b == c
    assert a.endswith("\n") and json.loads(a)["summary"]["pass"] == len(SUBSET)


def test_invalid_configs():
    with pytest.raises(InvalidParameter):
        VerifyConfig(rho=1).validate()
    with pytest.raises(InvalidParameter):
        VerifyConfig(l=7).validate()
    with pytest.raises(InvalidParameter):
        VerifyConfig.parse_checks("besselprop-4.1,no-such-check")
    assert VerifyConfig.parse_checks("weyl-only") == WEYL_ONLY
    assert VerifyConfig.parse_checks("all") == tuple(CATALOG)


def test_resource_limit_skips(monkeypatch):
    """Checks that need an oversized group are skipped, not failed."""
    from soqc.groups import build_group

    monkeypatch.setenv("SOQC_MAX_GROUP_ORDER", "500")
    build_group.cache_clear()
    try:
        rep = run_suite(VerifyConfig(checks=("center-4.3", "partition-4.7")))
    finally:
        monkeypatch.undo()
        build_group.cache_clear()
    status = {c.name: c.status for c in rep.checks}
    assert status["partition-4.7"] == "pass"
    assert status["center-4.3"] == "skipped"
    assert rep.record("center-4.3").detail.startswith("resource-limit")
    assert rep.passed


def test_markdown_witness():
    rep = run_suite(VerifyConfig(checks=WEYL_ONLY))
    rep.checks[0] = CheckRecord(rep.checks[0].name, "fail", "forced", {"g": 7})
    text = render_markdown(rep)
    assert "fail" in text and '"g": 7' in text
    assert not rep.passed


def test_emit_report(tmp_path):
    rep = run_suite(VerifyConfig(checks=SUBSET))
    paths = emit_report(rep, "md", tmp_path / "r.md")
    assert all(p.exists() for p in paths) and len(paths) == 3
    with pytest.raises(ReportIOError):
        emit_report(rep, "json", tmp_path / "missing" / "r.json", figures=False)


def test_cli_verify_weyl_l6(tmp_path, capsys):
    out = tmp_path / "w.json"
    assert main(["verify", "--l", "6", "--checks", "weyl-only", "--out", str(out), "--no-figures"]) == 0
    data = json.loads(out.read_text())
    assert data["summary"] == {"pass": 2, "fail": 0, "skipped": len(CATALOG) - 2}


def test_cli_errors(tmp_path, capsys):
    assert main(["verify", "--rho", "1", "--checks", "weyl-only"]) == 2
    assert "square" in capsys.readouterr().err
    assert main(["verify", "--checks", "weyl-only", "--out", str(tmp_path / "no" / "x.json")]) == 2


def test_cli_table(tmp_path):
    out = tmp_path / "t.json"
    assert main(["table", "--group", "gl", "--size", "2", "--out", str(out)]) == 0
    data = json.loads(out.read_text())
    assert sorted(data["degrees"]) == [1, 1, 2, 2, 2, 3, 3, 4]


def test_cli_gamma(tmp_path, full_report):
    out = tmp_path / "g.json"
    assert main(["gamma", "--out", str(out)]) == 0
    data = json.loads(out.read_text())
    report, _ = full_report
    by_key = {(r["n"], r["pi"], r["tau"]): r["gamma"] for r in data["gamma"]}
    for n, rows in report.gammas.items():
        for pi, row in rows.items():
            for tau, value in row.items():
                assert by_key[(int(n), int(pi), int(tau))] == value
    assert all(r["certificate_pairs"] >= 16 and r["consistent"] for r in data["gamma"])
