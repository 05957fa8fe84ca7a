from __future__ import annotations

from fractions import Fraction
from pathlib import Path

import pytest
from hypothesis import settings
from hypothesis import strategies as st

from finprob.events import SampleSpace
from finprob.measure import ProbabilityMeasure

settings.register_profile("default", max_examples=100, deadline=None)
settings.load_profile("default")

ROOT = Path(__file__).resolve().parent.parent
TUTORIAL = ROOT / "tutorial"


@pytest.fixture
def die():
    space = SampleSpace(str(i) for i in range(1, 7))
    return space, ProbabilityMeasure.uniform(space)


@pytest.fixture
def coins():
    space = SampleSpace(["HH", "HT", "TH", "TT"])
    return space, ProbabilityMeasure.uniform(space)


@pytest.fixture
def bits():
    space = SampleSpace(["00", "01", "10", "11"])
    return space, ProbabilityMeasure.uniform(space)


@st.composite
def measures(draw, max_outcomes: int = 6, allow_zero: bool = True):
    """A random finite space with exact rational weights."""
    n = draw(st.integers(1, max_outcomes))
    lo = 0 if allow_zero else 1
    raw = draw(st.lists(st.integers(lo, 20), min_size=n, max_size=n))
    if not any(raw):
        raw[0] = 1
    total = sum(raw)
    space = SampleSpace(f"w{i}" for i in range(n))
    return ProbabilityMeasure(space, [Fraction(r, total) for r in raw])


@st.composite
def measure_with_events(draw, k: int, max_outcomes: int = 6, allow_zero: bool = True):
    m = draw(measures(max_outcomes, allow_zero))
    n = len(m.space)
    masks = draw(st.lists(st.integers(0, (1 << n) - 1), min_size=k, max_size=k))
    return m, [m.space.from_mask(x) for x in masks]


# Acceptance reporting: tests tagged ``@pytest.mark.criterion(n, title)``
# are folded into one pass/fail line per criterion at the end of the run.
_criteria: dict[int, list] = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(n, title): acceptance criterion n")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    marker = item.get_closest_marker("criterion")
    if marker is None or not (rep.when == "call" or rep.failed or rep.skipped):
        return
    n, title = marker.args
    entry = _criteria.setdefault(n, [title, True, []])
    if not rep.passed:
        entry[1] = False
        entry[2].append(item.name)


def pytest_terminal_summary(terminalreporter):
    if not _criteria:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(_criteria):
        title, ok, failed = _criteria[n]
        line = f"criterion {n:>2} {'PASS' if ok else 'FAIL'}  {title}"
        if failed:
            line += f"  (failed: {', '.join(failed)})"
        terminalreporter.write_line(line)
