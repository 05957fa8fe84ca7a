import json
from fractions import Fraction as F

import pytest

from finprob import measure as ms
from finprob import suite
from finprob.errors import SpaceMismatch
from finprob.events import SampleSpace
from finprob.suite import CATALOGUE, SpaceGenerator, TheoremId, fuzz, replay, verify_all


def test_catalogue_complete():
    ids = [t.value for t in TheoremId]
    assert ids == ["T1", "T2", "T3", "L1", "L2", "T4", "L3", "L4", "L5", "L6", "L7",
                   "L8", "P1", "P2", "P3", "T5", "L9", "L10", "L11", "L12", "T6"]
    assert set(CATALOGUE) == set(TheoremId)
    assert set(suite.CHECKERS) == set(TheoremId)


@pytest.mark.slow
def test_fair_die_exhaustive(die):
    _, m = die
    report = verify_all(m)
    assert report.ok
    assert all(report.status(t) == suite.HOLDS for t in TheoremId)


def test_single_outcome_space():
    s = SampleSpace(["only"])
    report = verify_all(ms.ProbabilityMeasure(s, [1]))
    assert report.ok
    assert report.status("L11") == suite.NOT_APPLICABLE
    assert report.tallies[TheoremId.L11].trials == 0


def test_fault_injection_breaks_t3():
    s = SampleSpace("abc")
    bad = ms.ProbabilityMeasure(s, ["1/2", "1/6", "1/6"], validate=False)
    report = verify_all(bad, [s.event("a"), s.event("bc")])
    assert report.status("T3") == suite.VIOLATED
    cx = report.tallies[TheoremId.T3].counterexample
    assert cx.note == "partition probabilities sum to 5/6"
    assert cx.events == ("{a}", "{b}", "{c}")
    assert TheoremId.T3 in report.violations


def test_verify_rejects_foreign_events(die):
    _, m = die
    with pytest.raises(SpaceMismatch):
        verify_all(m, [SampleSpace(["x"]).omega()])


def test_generator_is_deterministic_and_valid():
    gen = SpaceGenerator(7)
    for i in range(20):
        m1, e1 = gen.trial(i)
        m2, e2 = gen.trial(i)
        assert m1.weights == m2.weights
        assert [e.mask for e in e1] == [e.mask for e in e2]
        assert 1 <= len(m1.space) <= 8 and len(e1) == 6
        assert ms.validate_measure(m1).ok
        assert all(w.denominator <= 8 * 1000 for w in m1.weights)


def test_fuzz_determinism():
    a = fuzz(SpaceGenerator(3), 15)
    b = fuzz(SpaceGenerator(3), 15)
    assert a.ok
    assert a.to_text() == b.to_text()
    assert a.to_json() == b.to_json()
    assert fuzz(SpaceGenerator(4), 15).to_text() != a.to_text()


def test_parallel_equals_sequential():
    gen = SpaceGenerator(11)
    seq = fuzz(gen, 12)
    par = fuzz(gen, 12, jobs=3)
    assert par == seq
    assert par.to_text() == seq.to_text()


def test_merge_is_associative():
    gen = SpaceGenerator(5)
    r = [replay(gen, i) for i in range(3)]
    assert r[0].merge(r[1]).merge(r[2]) == r[0].merge(r[1].merge(r[2]))


def test_fuzz_precondition():
    with pytest.raises(ValueError):
        fuzz(SpaceGenerator(0), 0)


def test_counterexample_replay(monkeypatch):
    real = ms.union_prob_pair

    def buggy(m, a, b):
        value = real(m, a, b)
        return value + F(1, 1000) if len(a) == 3 and (a & b) and a != b else value

    monkeypatch.setattr(ms, "union_prob_pair", buggy)
    gen = SpaceGenerator(42)
    report = fuzz(gen, 30)
    assert report.violations == [TheoremId.L2]
    cx = report.tallies[TheoremId.L2].counterexample
    assert cx.seed == 42
    again = replay(gen, cx.trial).tallies[TheoremId.L2].counterexample
    assert again == cx
    text = report.to_text()
    assert f"counterexample (seed 42, trial {cx.trial})" in text
    assert text.endswith("21 catalogue entries, 1 violated\n")


def test_report_formats():
    report = fuzz(SpaceGenerator(1), 3)
    data = json.loads(report.to_json())
    assert [r["id"] for r in data["theorems"]] == [t.value for t in TheoremId]
    assert data["violations"] == 0 and data["seed"] == 1 and data["spaces"] == 3
    assert "elapsed_seconds" not in data
    assert "elapsed_seconds" in json.loads(report.to_json(include_elapsed=True))
    text = report.to_text()
    assert "elapsed" not in text
    assert len(text.splitlines()) == 1 + 21 + 1
    assert report.to_text(include_elapsed=True).splitlines()[-1].startswith("elapsed ")
