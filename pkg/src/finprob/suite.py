"""Executable catalogue of the probability identities, with a seeded fuzzer.

Each catalogue entry has a checker that builds conforming inputs from a
measure and a list of sample events, and compares two independent routes
to the same quantity with exact rational equality.
"""

from __future__ import annotations

import enum
import itertools
import json
import random
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Iterable, Iterator, Sequence

from . import conditional as cd
from . import events as ev
from . import measure as ms
from .errors import PrefixNull, ProbError, SpaceMismatch
from .rational import format_rational


class TheoremId(str, enum.Enum):
    T1 = "T1"
    T2 = "T2"
    T3 = "T3"
    L1 = "L1"
    L2 = "L2"
    T4 = "T4"
    L3 = "L3"
    L4 = "L4"
    L5 = "L5"
    L6 = "L6"
    L7 = "L7"
    L8 = "L8"
    P1 = "P1"
    P2 = "P2"
    P3 = "P3"
    T5 = "T5"
    L9 = "L9"
    L10 = "L10"
    L11 = "L11"
    L12 = "L12"
    T6 = "T6"


@dataclass(frozen=True)
class Entry:
    title: str
    statement: str


CATALOGUE: dict[TheoremId, Entry] = {
    TheoremId.T1: Entry("empty event", "P(∅) = 0"),
    TheoremId.T2: Entry("finite additivity", "Aᵢ pairwise disjoint ⇒ P(⋃Aᵢ) = Σ P(Aᵢ)"),
    TheoremId.T3: Entry("normalization", "{Cᵢ} a partition ⇒ Σ P(Cᵢ) = 1"),
    TheoremId.L1: Entry(
        "disjoint families",
        "pairwise disjoint ⇔ every sub-collection of two or more has empty intersection",
    ),
    TheoremId.L2: Entry("union of two events", "P(A∪B) = P(A) + P(B) − P(A∩B)"),
    TheoremId.T4: Entry(
        "inclusion-exclusion", "P(⋃Aᵢ) = Σ_{S≠∅} (−1)^{|S|−1} P(⋂_{i∈S} Aᵢ)"
    ),
    TheoremId.L3: Entry("disjoint pair", "A∩B = ∅ ⇒ P(A∪B) = P(A) + P(B)"),
    TheoremId.L4: Entry("disjoint family", "Aᵢ pairwise disjoint ⇒ P(⋃Aᵢ) = Σ P(Aᵢ)"),
    TheoremId.L5: Entry("complement", "P(Ā) = 1 − P(A)"),
    TheoremId.L6: Entry("monotonicity", "A ⊆ B ⇒ P(A) ≤ P(B)"),
    TheoremId.L7: Entry("upper bound", "0 ≤ P(A) ≤ 1"),
    TheoremId.L8: Entry(
        "conditional bounds", "P(B) > 0 ⇒ 0 ≤ P(A|B) ≤ 1 and 0 ≤ P(A∩B) ≤ P(B)"
    ),
    TheoremId.P1: Entry("conditioning on a disjoint event", "A∩B = ∅ ⇒ P(A|B) = 0"),
    TheoremId.P2: Entry("conditioning on a sub-event", "B ⊆ A ⇒ P(A|B) = 1"),
    TheoremId.P3: Entry(
        "conditional addition", "Aᵢ pairwise disjoint ⇒ P(⋃Aᵢ|B) = Σ P(Aᵢ|B)"
    ),
    TheoremId.T5: Entry("chain rule", "P(⋂Aᵢ) = P(A₁) P(A₂|A₁) ⋯ P(Aₙ|A₁∩⋯∩Aₙ₋₁)"),
    TheoremId.L9: Entry(
        "independent events multiply", "SI, P(A),P(B) > 0 ⇒ P(A|B) = P(A), P(B|A) = P(B)"
    ),
    TheoremId.L10: Entry("mutual implies pairwise", "MI ⇒ every pair SI"),
    TheoremId.L11: Entry(
        "independent is not disjoint", "P(A),P(B) > 0 and A∩B = ∅ ⇒ not SI"
    ),
    TheoremId.L12: Entry("total probability", "P(A) = Σ P(A|Cᵢ) P(Cᵢ)"),
    TheoremId.T6: Entry("Bayes' rule", "P(Cᵢ|A) = P(A|Cᵢ)P(Cᵢ) / Σⱼ P(A|Cⱼ)P(Cⱼ)"),
}

HOLDS, VIOLATED, NOT_APPLICABLE = "holds", "violated", "not-applicable"


# ---------------------------------------------------------------------------
# Reports


@dataclass(frozen=True)
class Counterexample:
    theorem: TheoremId
    note: str
    outcomes: tuple[str, ...]
    weights: tuple[str, ...]
    events: tuple[str, ...]
    seed: int | None = None
    trial: int | None = None

    def to_dict(self) -> dict:
        return {
            "note": self.note,
            "outcomes": list(self.outcomes),
            "weights": list(self.weights),
            "events": list(self.events),
            "seed": self.seed,
            "trial": self.trial,
        }


@dataclass(frozen=True)
class Tally:
    trials: int = 0
    not_applicable: int = 0
    counterexample: Counterexample | None = None

    @property
    def status(self) -> str:
        if self.counterexample is not None:
            return VIOLATED
        return HOLDS if self.trials else NOT_APPLICABLE

    def merge(self, other: Tally) -> Tally:
        return Tally(
            self.trials + other.trials,
            self.not_applicable + other.not_applicable,
            self.counterexample if self.counterexample is not None else other.counterexample,
        )


@dataclass(frozen=True)
class VerificationReport:
    """Per-theorem tallies. ``merge`` is associative; merge in trial order."""

    tallies: dict[TheoremId, Tally]
    spaces: int = 1
    seed: int | None = None
    elapsed: float | None = field(default=None, compare=False)

    @property
    def violations(self) -> list[TheoremId]:
        return [t for t in TheoremId if self.tallies[t].status == VIOLATED]

    @property
    def ok(self) -> bool:
        return not self.violations

    def status(self, tid: TheoremId | str) -> str:
        return self.tallies[TheoremId(tid)].status

    def merge(self, other: VerificationReport) -> VerificationReport:
        return VerificationReport(
            {t: self.tallies[t].merge(other.tallies[t]) for t in TheoremId},
            self.spaces + other.spaces,
            self.seed,
        )

    def to_dict(self, *, include_elapsed: bool = False) -> dict:
        out: dict = {
            "seed": self.seed,
            "spaces": self.spaces,
            "violations": len(self.violations),
            "theorems": [
                {
                    "id": t.value,
                    "title": CATALOGUE[t].title,
                    "statement": CATALOGUE[t].statement,
                    "status": self.tallies[t].status,
                    "trials": self.tallies[t].trials,
                    "not_applicable": self.tallies[t].not_applicable,
                    "counterexample": (
                        self.tallies[t].counterexample.to_dict()
                        if self.tallies[t].counterexample
                        else None
                    ),
                }
                for t in TheoremId
            ],
        }
        if include_elapsed and self.elapsed is not None:
            out["elapsed_seconds"] = round(self.elapsed, 3)
        return out

    def to_json(self, *, include_elapsed: bool = False) -> str:
        return json.dumps(self.to_dict(include_elapsed=include_elapsed), indent=2, ensure_ascii=False)

    def to_text(self, *, include_elapsed: bool = False) -> str:
        lines = []
        if self.seed is not None:
            lines.append(f"seed {self.seed}, {self.spaces} space(s)")
        for t in TheoremId:
            tally = self.tallies[t]
            lines.append(
                f"{t.value:<4} {tally.status:<15} trials={tally.trials:<8} "
                f"n/a={tally.not_applicable:<8} {CATALOGUE[t].statement}"
            )
            cx = tally.counterexample
            if cx is not None:
                where = f" (seed {cx.seed}, trial {cx.trial})" if cx.seed is not None else ""
                lines.append(f"     counterexample{where}: {cx.note}")
                lines.append(
                    "     space: "
                    + ", ".join(f"{o}:{w}" for o, w in zip(cx.outcomes, cx.weights))
                )
                if cx.events:
                    lines.append("     events: " + "  ".join(cx.events))
        n = len(self.violations)
        lines.append(f"{len(TheoremId)} catalogue entries, {n} violated")
        if include_elapsed and self.elapsed is not None:
            lines.append(f"elapsed {self.elapsed:.3f}s")
        return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# Checkers. Each yields None when an instance is not applicable, or
# (ok, note, events) for a checked instance.

Outcome = tuple[bool, str, tuple[ev.Event, ...]] | None


@dataclass
class _Context:
    m: ms.ProbabilityMeasure
    events: list[ev.Event]

    def __post_init__(self) -> None:
        space = self.m.space
        self.space = space
        self.empty = space.empty()
        self.omega = space.omega()
        e = self.events
        self.pairs = list(itertools.product(e, repeat=2))
        if len(e) >= 3:
            self.triples = list(itertools.combinations(e, 3))
        else:
            self.triples = list(itertools.combinations_with_replacement(e, 3))
        self.partitions = self._partitions()

    def p(self, a: ev.Event) -> Fraction:
        return ms.prob(self.m, a)

    def _partitions(self) -> list[list[ev.Event]]:
        space, e = self.space, self.events
        parts = [space.singletons(), [self.omega]]
        for a in e:
            parts.append([a, ~a])
        for a, b in zip(e, e[1:]):
            parts.append([a & b, a & ~b, ~a & b, ~a & ~b])
        if e:
            parts.append(
                [space.from_mask(x) for x in ev.atom_masks(space, e)]
            )
        return parts


def _disjointify(family: Sequence[ev.Event]) -> list[ev.Event]:
    out, seen = [], None
    for a in family:
        out.append(a if seen is None else a - seen)
        seen = a if seen is None else seen | a
    return out


def _fmt(x: Fraction) -> str:
    return format_rational(x)


def check_t1(c: _Context) -> Iterator[Outcome]:
    p0 = c.p(c.empty)
    yield p0 == 0, f"P(∅) = {_fmt(p0)}", ()
    for a in c.events:
        lhs, rhs = c.p(a | c.empty), c.p(a) + p0
        yield lhs == rhs, f"P(A∪∅) = {_fmt(lhs)} but P(A) + P(∅) = {_fmt(rhs)}", (a,)


def check_t2(c: _Context) -> Iterator[Outcome]:
    for fam in itertools.chain(c.pairs, c.triples):
        d = _disjointify(fam)
        lhs = c.p(ev.union_all(d))
        rhs = sum((c.p(x) for x in d), Fraction(0))
        yield lhs == rhs, f"P(⋃) = {_fmt(lhs)}, Σ = {_fmt(rhs)}", tuple(d)


def check_t3(c: _Context) -> Iterator[Outcome]:
    for part in c.partitions:
        if not ev.is_partition(part):
            yield False, "constructed family is not a partition", tuple(part)
            continue
        total = sum((c.p(x) for x in part), Fraction(0))
        yield total == 1, f"partition probabilities sum to {_fmt(total)}", tuple(part)


def _me_as_whole(family: Sequence[ev.Event]) -> bool:
    for k in range(2, len(family) + 1):
        for sub in itertools.combinations(family, k):
            if not ev.intersection_all(sub).is_empty():
                return False
    return True


def check_l1(c: _Context) -> Iterator[Outcome]:
    for fam in c.triples:
        for f in (list(fam), _disjointify(fam)):
            pme = ev.is_pme_family(f)
            whole = _me_as_whole(f)
            ok = pme == whole and (not pme or ev.intersection_all(f).is_empty())
            yield ok, f"pairwise={pme} but as-a-whole={whole}", tuple(f)


def check_l2(c: _Context) -> Iterator[Outcome]:
    for a, b in c.pairs:
        lhs, rhs = ms.union_prob_pair(c.m, a, b), c.p(a | b)
        yield lhs == rhs, f"formula {_fmt(lhs)} vs direct {_fmt(rhs)}", (a, b)


def check_t4(c: _Context) -> Iterator[Outcome]:
    fams = [list(t) for t in c.triples]
    if 1 <= len(c.events) <= 10:
        fams.append(c.events)
    for fam in fams:
        lhs = ms.inclusion_exclusion(c.m, fam).total
        rhs = c.p(ev.union_all(fam))
        yield lhs == rhs, f"expansion {_fmt(lhs)} vs direct {_fmt(rhs)}", tuple(fam)


def check_l3(c: _Context) -> Iterator[Outcome]:
    for a, b in c.pairs:
        for x, y in ((a, b - a), (a, b)):
            if not ev.is_pme(x, y):
                continue
            lhs, rhs = c.p(x | y), c.p(x) + c.p(y)
            yield lhs == rhs, f"P(A∪B) = {_fmt(lhs)}, P(A) + P(B) = {_fmt(rhs)}", (x, y)


def check_l4(c: _Context) -> Iterator[Outcome]:
    for fam in c.triples:
        d = _disjointify(fam)
        lhs = ms.disjoint_union_prob(c.m, d)
        rhs = c.p(ev.union_all(d))
        yield lhs == rhs, f"Σ = {_fmt(lhs)} vs P(⋃) = {_fmt(rhs)}", tuple(d)


def check_l5(c: _Context) -> Iterator[Outcome]:
    for a in c.events:
        lhs, rhs = ms.complement_prob(c.m, a), c.p(~a)
        yield lhs == rhs, f"1 − P(A) = {_fmt(lhs)}, P(Ā) = {_fmt(rhs)}", (a,)


def check_l6(c: _Context) -> Iterator[Outcome]:
    for a, b in c.pairs:
        candidates = [(a & b, a), (a, a | b)]
        if a.issubset(b):
            candidates.append((a, b))
        for x, y in candidates:
            px, py = c.p(x), c.p(y)
            yield px <= py, f"P(A) = {_fmt(px)} > P(B) = {_fmt(py)}", (x, y)


def check_l7(c: _Context) -> Iterator[Outcome]:
    for a in itertools.chain(c.events, (c.empty, c.omega)):
        pa = c.p(a)
        yield 0 <= pa <= 1, f"P(A) = {_fmt(pa)}", (a,)


def check_l8(c: _Context) -> Iterator[Outcome]:
    for a, b in c.pairs:
        pb = c.p(b)
        if pb == 0:
            yield None
            continue
        q, pab = cd.cond_prob(c.m, a, b), c.p(a & b)
        ok = 0 <= q <= 1 and 0 <= pab <= pb
        yield ok, f"P(A|B) = {_fmt(q)}, P(A∩B) = {_fmt(pab)}, P(B) = {_fmt(pb)}", (a, b)


def check_p1(c: _Context) -> Iterator[Outcome]:
    for a, b in c.pairs:
        x = a - b
        if c.p(b) == 0:
            yield None
            continue
        q = cd.cond_prob(c.m, x, b)
        yield q == 0, f"P(A|B) = {_fmt(q)}", (x, b)


def check_p2(c: _Context) -> Iterator[Outcome]:
    for a, b in c.pairs:
        x = a | b
        if c.p(b) == 0:
            yield None
            continue
        q = cd.cond_prob(c.m, x, b)
        yield q == 1, f"P(A|B) = {_fmt(q)}", (x, b)


def check_p3(c: _Context) -> Iterator[Outcome]:
    for a, b, given in c.triples:
        if c.p(given) == 0:
            yield None
            continue
        fam = [a, b - a]
        lhs = cd.cond_addition(c.m, fam, given)
        rhs = cd.cond_prob(c.m, a | b, given)
        yield lhs == rhs, f"Σ P(Aᵢ|B) = {_fmt(lhs)}, P(⋃|B) = {_fmt(rhs)}", (*fam, given)


def check_t5(c: _Context) -> Iterator[Outcome]:
    for a, b, d in c.triples:
        for fam in ([a, b, d], [a | b | d, a | b, a], [a, b]):
            try:
                got = cd.chain_rule(c.m, fam).product
            except PrefixNull:
                yield None
                continue
            want = c.p(ev.intersection_all(fam))
            yield got == want, f"product {_fmt(got)} vs P(⋂) = {_fmt(want)}", tuple(fam)


def check_l9(c: _Context) -> Iterator[Outcome]:
    for a, b in itertools.chain(c.pairs, ((a, c.omega) for a in c.events)):
        pa, pb = c.p(a), c.p(b)
        if not (pa > 0 and pb > 0 and cd.is_independent(c.m, a, b)):
            yield None
            continue
        ok = cd.cond_prob(c.m, a, b) == pa and cd.cond_prob(c.m, b, a) == pb
        ok = ok and c.p(a & b) == pa * pb
        yield ok, "independent pair fails the conditional form", (a, b)


def check_l10(c: _Context) -> Iterator[Outcome]:
    fams = [list(t) for t in c.triples]
    fams.extend([a, c.omega, c.empty] for a in c.events)
    for fam in fams:
        if not cd.is_mutually_independent(c.m, fam):
            yield None
            continue
        bad = [
            (x, y) for x, y in itertools.combinations(fam, 2)
            if not cd.is_independent(c.m, x, y)
        ]
        yield not bad, "mutually independent family has a dependent pair", tuple(fam)


def check_l11(c: _Context) -> Iterator[Outcome]:
    for a, b in itertools.chain(c.pairs, ((a, ~a) for a in c.events)):
        if not (c.p(a) > 0 and c.p(b) > 0 and ev.is_pme(a, b)):
            yield None
            continue
        indep = cd.is_independent(c.m, a, b)
        yield not indep, "disjoint positive events are independent", (a, b)


def check_l12(c: _Context) -> Iterator[Outcome]:
    for a in c.events:
        for part in c.partitions:
            got = cd.total_probability(c.m, a, part).total
            want = c.p(a)
            yield got == want, f"Σ P(A|Cᵢ)P(Cᵢ) = {_fmt(got)}, P(A) = {_fmt(want)}", (a, *part)


def check_t6(c: _Context) -> Iterator[Outcome]:
    for a in c.events:
        if c.p(a) == 0:
            yield None
            continue
        for part in c.partitions:
            positive = [i for i, blk in enumerate(part) if c.p(blk) > 0]
            posts = {i: cd.bayes(c.m, i, a, part) for i in positive}
            bad = [i for i in positive if posts[i] != cd.cond_prob(c.m, part[i], a)]
            total = sum(posts.values(), Fraction(0))
            table = cd.BayesTable(
                tuple(c.p(blk) for blk in part),
                tuple(cd.cond_prob(c.m, a, blk) if c.p(blk) else Fraction(0) for blk in part),
            )
            numeric = cd.bayes_table(table)
            same = all(numeric[i] == posts[i] for i in positive)
            ok = not bad and total == 1 and same
            note = f"posteriors sum to {_fmt(total)}; mismatched blocks {bad}; table route agrees={same}"
            yield ok, note, (a, *part)


CHECKERS: dict[TheoremId, Callable[[_Context], Iterable[Outcome]]] = {
    TheoremId.T1: check_t1,
    TheoremId.T2: check_t2,
    TheoremId.T3: check_t3,
    TheoremId.L1: check_l1,
    TheoremId.L2: check_l2,
    TheoremId.T4: check_t4,
    TheoremId.L3: check_l3,
    TheoremId.L4: check_l4,
    TheoremId.L5: check_l5,
    TheoremId.L6: check_l6,
    TheoremId.L7: check_l7,
    TheoremId.L8: check_l8,
    TheoremId.P1: check_p1,
    TheoremId.P2: check_p2,
    TheoremId.P3: check_p3,
    TheoremId.T5: check_t5,
    TheoremId.L9: check_l9,
    TheoremId.L10: check_l10,
    TheoremId.L11: check_l11,
    TheoremId.L12: check_l12,
    TheoremId.T6: check_t6,
}


def _run_checker(
    tid: TheoremId, ctx: _Context, seed: int | None, trial: int | None
) -> Tally:
    trials = na = 0
    cx = None
    m = ctx.m

    def witness(note: str, evs: Sequence[ev.Event]) -> Counterexample:
        return Counterexample(
            tid,
            note,
            m.space.outcomes,
            tuple(_fmt(w) for w in m.weights),
            tuple(str(e) for e in evs),
            seed,
            trial,
        )

    try:
        for result in CHECKERS[tid](ctx):
            if result is None:
                na += 1
                continue
            trials += 1
            ok, note, evs = result
            if not ok:
                cx = witness(note, evs)
                break
    except ProbError as err:
        # An error on conforming input is itself a failed identity.
        trials += 1
        cx = witness(f"{type(err).__name__}: {err}", ())
    return Tally(trials, na, cx)


def verify_all(
    ps: ms.ProbabilitySpace | ms.ProbabilityMeasure,
    events: Sequence[ev.Event] | None = None,
    *,
    seed: int | None = None,
    trial: int | None = None,
) -> VerificationReport:
    """Run every catalogue checker against one measure and sample events.

    ``events`` defaults to every event of the space. ``seed``/``trial``
    only label counterexamples for replay.
    """
    m = ps.measure if isinstance(ps, ms.ProbabilitySpace) else ps
    if events is None:
        events = list(m.space.all_events())
    for e in events:
        if e.space is not m.space:
            raise SpaceMismatch("sample event does not belong to the measure's space")
    start = time.perf_counter()
    ctx = _Context(m, list(events))
    tallies = {t: _run_checker(t, ctx, seed, trial) for t in TheoremId}
    return VerificationReport(tallies, 1, seed, time.perf_counter() - start)


# ---------------------------------------------------------------------------
# Fuzzing


@dataclass(frozen=True)
class SpaceGenerator:
    """Deterministic source of random spaces; trial ``i`` depends only on
    ``(seed, i)`` and the size parameters."""

    seed: int
    max_outcomes: int = 8
    max_denominator: int = 1000
    events_per_trial: int = 6

    def __post_init__(self) -> None:
        if self.max_outcomes < 1:
            raise ValueError("max_outcomes must be at least 1")
        if self.max_denominator < 1:
            raise ValueError("max_denominator must be at least 1")
        if self.events_per_trial < 0:
            raise ValueError("events_per_trial must be nonnegative")

    def rng(self, trial: int) -> random.Random:
        # String seeds are hashed with SHA-512, stable across platforms.
        return random.Random(f"finprob:{self.seed}:{trial}")

    def trial(self, index: int) -> tuple[ms.ProbabilityMeasure, list[ev.Event]]:
        rng = self.rng(index)
        n = rng.randint(1, self.max_outcomes)
        while True:
            raw = [rng.randint(0, self.max_denominator) for _ in range(n)]
            total = sum(raw)
            if total:
                break
        space = ev.SampleSpace(f"o{i + 1}" for i in range(n))
        m = ms.ProbabilityMeasure(space, [Fraction(w, total) for w in raw])
        events = [space.from_mask(rng.getrandbits(n)) for _ in range(self.events_per_trial)]
        return m, events


def _fuzz_range(gen: SpaceGenerator, start: int, stop: int) -> VerificationReport:
    report = None
    for i in range(start, stop):
        m, events = gen.trial(i)
        r = verify_all(m, events, seed=gen.seed, trial=i)
        report = r if report is None else report.merge(r)
    return report


def fuzz(gen: SpaceGenerator, trials: int, *, jobs: int = 1) -> VerificationReport:
    """Verify the catalogue on ``trials`` generated spaces.

    With ``jobs > 1`` contiguous chunks run in worker processes; chunk
    reports are merged in trial order, so the result equals the sequential one.
    """
    if trials < 1:
        raise ValueError("trials must be at least 1")
    start = time.perf_counter()
    if jobs <= 1:
        report = _fuzz_range(gen, 0, trials)
    else:
        bounds = [trials * k // jobs for k in range(jobs + 1)]
        chunks = [(a, b) for a, b in zip(bounds, bounds[1:]) if b > a]
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            parts = list(pool.map(_fuzz_range, [gen] * len(chunks), *zip(*chunks)))
        report = parts[0]
        for part in parts[1:]:
            report = report.merge(part)
    return VerificationReport(report.tallies, report.spaces, gen.seed, time.perf_counter() - start)


def replay(gen: SpaceGenerator, trial: int) -> VerificationReport:
    """Re-run a single recorded trial."""
    m, events = gen.trial(trial)
    return verify_all(m, events, seed=gen.seed, trial=trial)
