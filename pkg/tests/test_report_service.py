# tests/test_report_service.py
import json
import logging
from fractions import Fraction

from services.report_service import CheckResult, Report, Tally, fraction_to_str, render_text


def _sample_report():
    report = Report(matroid="K4", weights=[1] * 6, flats=[[], [0, 1, 3], [0, 1, 2, 3, 4, 5]])
    report.standard_characters = {"{}": {"{}": 1, "{0,1,2,3,4,5}": 6}}
    report.simple_characters = {"3": {"{}": {"{}": 1, "{0,1,2,3,4,5}": 3}}}
    report.decomposition = [{"p": 3, "row": "{}", "col": "{0,1,2,3,4,5}", "value": 3}]
    report.determinants = [{"minor": "{}/{0,1,2}", "gram_det": Fraction(-3), "predicted": Fraction(3),
                            "factors": [{"flat": [], "base": 3, "exponent": 1}]}]
    report.add_checks("identities", [CheckResult("krs_dimension", True, 1)])
    report.add_checks("axioms", [CheckResult("A3_associativity", False, 4, ["at {}/{0}"])])
    return report


def test_tally_keeps_first_violations(caplog):
    t = Tally("demo")
    for i in range(60):
        t.check(i % 2 == 0, lambda i=i: f"odd {i}")
    with caplog.at_level(logging.WARNING):
        res = t.result()
    assert not res.passed
    assert res.instances == 60
    assert res.failures == 30
    assert len(res.violations) == 25
    assert res.violations[0] == "odd 1"
    assert "[check] demo: FAIL (30 of 60 instances)" in caplog.text


def test_failure_count_survives_json():
    res = CheckResult("demo", False, 9, ["a", "b"], failures=7)
    again = CheckResult.from_dict("demo", res.to_dict())
    assert again.failures == 7
    assert CheckResult("x", False, 3, ["a"]).failures == 1


def test_fraction_strings():
    assert fraction_to_str(Fraction(-6, 4)) == "-3/2"
    assert fraction_to_str(5) == "5/1"


def test_json_round_trip():
    report = _sample_report()
    text = report.to_json()
    data = json.loads(text)
    assert data["determinants"][0]["gram_det"] == "-3/1"
    assert "p" not in data and "extra" not in data
    assert list(data) == sorted(data)
    again = Report.from_json(text)
    assert again.determinants[0]["gram_det"] == Fraction(-3)
    assert again.to_json() == text


def test_passed_reflects_all_checks():
    report = _sample_report()
    assert not report.passed
    assert [c.name for c in report.checks()] == ["krs_dimension", "A3_associativity"]
    report.axioms.clear()
    assert report.passed


def test_render_text_agrees_with_json():
    text = render_text(_sample_report())
    assert "matroid: K4" in text
    assert "ch Δ({}) = 1·e{} + 6·e{0,1,2,3,4,5}" in text
    assert "p=3 [Δ({0,1,2,3,4,5}):L({})] = 3" in text
    assert "gram=-3/1 predicted=3/1" in text
    assert "[axioms] A3_associativity: FAIL (4 instances)" in text
