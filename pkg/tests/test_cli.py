import csv
import io
import json
import re
from pathlib import Path

import pytest
from click.testing import CliRunner

from manincup import reports
from manincup.cli import main

README = Path(__file__).resolve().parents[1] / "README.md"


def invoke(tmp_path, *args):
    out = tmp_path / "out"
    res = CliRunner().invoke(main, [*args, "--out", str(out), "--cache-dir", str(tmp_path / "cache")])
    return res, out


def rows(out, name):
    return json.loads((out / f"{name}.json").read_text())["rows"]


def test_eisenstein_at_regular_prime(tmp_path):
    res, out = invoke(tmp_path, "eisenstein", "--p", "5", "--N", "1")
    assert res.exit_code == 0, res.output
    rs = rows(out, "eisenstein")
    assert [r["check"] for r in rs] == ["biconditional[w1]", "biconditional[w3]"]
    assert all(r["status"] == "pass" and r["locus_rank"] == 0 for r in rs)
    # B_{1, omega^-1} has p in its denominator
    assert [r["bernoulli_valuation"] for r in rs] == [0, -1]
    assert not (out / "findings.json").exists()


def test_shadow_flagship(tmp_path):
    res, out = invoke(tmp_path, "shadow", "--p", "37", "--N", "1", "--theta", "w31")
    assert res.exit_code == 0, res.output
    rs = {r["check"]: r for r in rows(out, "shadow")}
    assert set(rs) == {"antisymmetry[w31]", "diagonal[w31]", "sign[w31]"}
    assert all(r["status"] == "pass" and r["cases"] > 0 for r in rs.values())


def test_mazur_tate_at_higher_level(tmp_path):
    res, out = invoke(tmp_path, "mazur-tate", "--p", "5", "--N", "1", "--r", "2")
    assert res.exit_code == 0, res.output
    rs = {r["check"]: r for r in rows(out, "mazur-tate")}
    assert rs["distribution_relation"]["status"] == "pass"
    assert rs["functional_equation"]["status"] == "vacuous"


@pytest.mark.parametrize("args", [
    ["space", "--p", "4"],
    ["space", "--p", "5", "--N", "5"],
    ["space", "--p", "5", "--r", "0"],
    ["mazur-tate", "--p", "37", "--precision", "6"],
    ["eisenstein", "--p", "5", "--theta", "w2"],
    ["eisenstein", "--p", "5", "--theta", "nonsense"],
])
def test_bad_configuration_exits_2(tmp_path, args):
    res, _ = invoke(tmp_path, *args)
    assert res.exit_code == 2, res.output


def test_csv_mirrors_json(tmp_path):
    res, out = invoke(tmp_path, "units", "--p", "5")
    assert res.exit_code == 0
    res, _ = invoke(tmp_path, "units", "--p", "5", "--format", "csv")
    assert res.exit_code == 0
    table = list(csv.DictReader(io.StringIO((out / "units.csv").read_text())))
    js = rows(out, "units")
    assert len(table) == len(js)
    for t, j in zip(table, js):
        assert t["subcommand"] == "units"
        for k in ("check", "anchor", "grade", "status"):
            assert t[k] == j[k]
        details = {k: v for k, v in j.items() if k not in ("check", "anchor", "grade", "status")}
        assert json.loads(t["details"]) == details


def test_conjecture_failure_goes_to_findings(tmp_path, monkeypatch):
    import manincup.relations as rel

    def fake(quotient):
        return [{"relation": "sign", "cases": 4, "failures": 1, "level": 37, "sector": "w31", "status": "fail"},
                {"relation": "sign", "uv": [1, 2], "level": 37, "sector": "w31", "status": "fail"}]

    monkeypatch.setattr(rel, "conjecture_shadow_check", fake)
    res, out = invoke(tmp_path, "shadow", "--p", "37", "--theta", "w31")
    assert res.exit_code == 0, res.output
    findings = json.loads((out / "findings.json").read_text())
    assert findings[0]["subcommand"] == "shadow"
    assert findings[0]["witnesses"] == [[1, 2]]
    # a clean rerun removes the stale file
    monkeypatch.undo()
    res, out = invoke(tmp_path, "shadow", "--p", "5")
    assert res.exit_code == 0
    assert not (out / "findings.json").exists()


def test_theorem_failure_exits_1(tmp_path, monkeypatch):
    import manincup.units as units
    real = units.verify_unit_identities

    def broken(*a, **kw):
        res = real(*a, **kw)
        res[0].failures.append("injected")
        return res

    monkeypatch.setattr(units, "verify_unit_identities", broken)
    res, out = invoke(tmp_path, "units", "--p", "5")
    assert res.exit_code == 1
    assert json.loads((out / "units.json").read_text())["status"] == "fail"


def test_all_writes_index(tmp_path):
    res, out = invoke(tmp_path, "all", "--p", "5")
    assert res.exit_code == 0, res.output
    index = json.loads((out / "index.json").read_text())
    assert [r["subcommand"] for r in index["reports"]] == list(reports.SUBCOMMANDS)
    for name in reports.SUBCOMMANDS:
        assert (out / f"{name}.json").exists()


def test_every_anchor_is_documented(tmp_path):
    res, out = invoke(tmp_path, "all", "--p", "11")
    assert res.exit_code == 0, res.output
    text = README.read_text()
    documented = dict(re.findall(r"^\| `([a-z0-9-]+)` \| (.*) \|$", text, re.M))
    assert {k: documented.get(k) for k in reports.ANCHORS} == reports.ANCHORS
    for name in reports.SUBCOMMANDS:
        for r in rows(out, name):
            assert r["anchor"] in reports.ANCHORS


def test_unknown_anchor_is_rejected():
    rep = reports.Report("space", {})
    with pytest.raises(KeyError):
        rep.add("x", "no-such-anchor", "theorem", "pass")


def test_version():
    res = CliRunner().invoke(main, ["--version"])
    assert res.exit_code == 0 and "0.1.0" in res.output
