import json
import random

import pytest

import qukit.arithmetic as arithmetic
from qukit.harness import (
    AXIOMS,
    SUITES,
    Repr,
    Transform,
    check_axiom,
    check_axiom_under,
    check_probability_conservation,
    check_projector_covariance,
    default_transforms,
    harness_frames,
    random_ket,
    random_state,
    reports_json,
    reports_text,
    run_suite,
)
from qukit.numeral import NumberType, canonicalize

RA = NumberType.RA


def test_axiom_catalogue():
    assert set(AXIOMS) == {
        "AddIdentity", "MulIdentity", "AddCommute", "MulCommute", "AddAssoc",
        "Distribute", "OrderTotal", "OrderTransitive", "DivAccBound",
    }
    assert "add-identity" in SUITES and "all" in SUITES


def test_random_samples_are_canonical_and_seeded():
    a = random.Random(5)
    b = random.Random(5)
    xs = [random_ket(a, 10, RA) for _ in range(20)]
    assert xs == [random_ket(b, 10, RA) for _ in range(20)]
    assert all(canonicalize(x) == x for x in xs)
    s = random_state(random.Random(1), 3, NumberType.N, 2, terms=3)
    assert s.rows == {2} and s.number_type is NumberType.N


@pytest.mark.parametrize("name", sorted(AXIOMS))
def test_every_axiom_passes_in_base_ten(name):
    r = check_axiom(name, Repr(10, number_type=RA), samples=6, seed=3)
    assert r.passed, r.text()
    assert r.samples == 6


def test_exhaustive_small_bases():
    r = check_axiom("AddCommute", Repr(2, number_type=NumberType.I))
    # canonical I strings of length <= 2 in base 2 hold the seven values -3..3
    assert r.passed and r.samples == 7 * 7


def test_reports_are_deterministic():
    t = Transform("T1")
    r1 = check_axiom_under("Distribute", t, Repr(3, number_type=RA), 5, seed=9)
    r2 = check_axiom_under("Distribute", t, Repr(3, number_type=RA), 5, seed=9)
    assert r1.to_dict() == r2.to_dict()


def test_division_axiom_needs_rationals():
    r = check_axiom("DivAccBound", Repr(10, number_type=NumberType.I))
    assert r.passed and r.samples == 0 and r.skipped


def test_base_change_outside_domain_is_skipped_not_failed():
    r = check_axiom_under("AddIdentity", Transform("W", 11), Repr(10, number_type=RA), 20, seed=1)
    assert r.passed and r.skipped
    assert r.samples + len(r.skipped) == 20


def test_gauge_contexts_pass():
    g, loc = harness_frames()
    for frame in (g, loc):
        r = check_axiom_under("MulCommute", Transform("gauge", frame=frame),
                              Repr(3, number_type=NumberType.I), 4, seed=2)
        assert r.passed, r.text()
        assert r.repr[3] == frame.tag


def test_broken_arithmetic_is_caught(monkeypatch):
    real = arithmetic.add_kets

    def off_by_one(a, b, **kw):
        r = real(a, b, **kw)
        return real(r, r.replace(digits=(1,), l=r.m, sign="+"), h=r.h)

    monkeypatch.setattr(arithmetic, "add_kets", off_by_one)
    r = check_axiom("AddIdentity", Repr(10, number_type=NumberType.I), samples=5)
    assert not r.passed and r.min_probability < 0.5
    assert "witness" in r.text() and r.text().startswith("FAIL")


def test_projector_covariance_suite():
    reports = check_projector_covariance(seed=1, samples=10, bases=(2, 10))
    assert reports and all(r.passed for r in reports), reports_text(reports)


def test_probability_conservation():
    from qukit.harness import _pair_samples

    states = _pair_samples(random.Random(0), 3, NumberType.I, 6)
    for t in default_transforms(3):
        r = check_probability_conservation(t, states, 3)
        assert r.passed, r.text()


def test_report_rendering():
    reports = run_suite("mul-identity", seed=0)
    text = reports_text(reports)
    assert text.splitlines()[-1] == f"{len(reports)}/{len(reports)} checks passed"
    data = json.loads(reports_json(reports))
    assert data["passed"] and len(data["checks"]) == len(reports)
    assert {c["transform"] for c in data["checks"]} >= {"identity", "T1", "T2", "U[hG]", "U[rL]"}
    with pytest.raises(ValueError):
        run_suite("nope")
