import json
from fractions import Fraction

from gyrofuzz import exact
from gyrofuzz.report import PropertyReport, at_least, equal, greater, oscillation_shrinks


def test_first_failure_kept_and_witness_lazy():
    rep = PropertyReport("demo", seed=4, samples=3)
    chk = rep.law("law")
    calls = []
    chk.record(True, 0.0, lambda: calls.append("ok") or {"x": 0})
    chk.record(False, 0.5, lambda: {"x": 1})
    chk.record(False, 0.25, lambda: {"x": 2})
    assert calls == []
    assert chk.witness == {"x": 1} and chk.max_deviation == 0.5
    assert not rep.passed and rep.failures == [chk]


def test_json_shape():
    rep = PropertyReport("demo", seed=1, samples=2)
    rep.law("a").record(False, 0.0, {"t": Fraction(1, 3)})
    data = json.loads(rep.to_json())
    assert data == {"suite": "demo", "seed": 1, "samples": 2,
                    "checks": [{"law": "a", "status": "fail", "witness": {"t": "1/3"}, "max_deviation": 0.0}]}


def test_merge_prefixes():
    a, b = PropertyReport("a"), PropertyReport("b", samples=7)
    b.law("x")
    a.merge(b, "pre")
    assert "pre:x" in a and a.samples == 7


def test_exact_comparisons():
    r = exact.sqrt_rational(2)
    assert equal(r * r, 2) == (True, 0.0)
    assert at_least(r, Fraction(7, 5))[0]
    assert not greater(r, Fraction(3, 2))[0]
    assert equal(0.1 + 0.2, 0.3, tol=1e-9)[0]


def test_oscillation_rule():
    assert oscillation_shrinks([0.5, 0.25])
    assert oscillation_shrinks([0.0, 0.0])
    assert not oscillation_shrinks([0.5, 0.5])
