"""Conditional probability, independence, total probability and Bayes."""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator, Sequence

from .errors import (
    ArityError,
    ConditionOnNull,
    EvidenceNull,
    IndexOutOfRange,
    InvalidLikelihood,
    InvalidPrior,
    LengthMismatch,
    NotAPartition,
    NotDisjoint,
    PrefixNull,
    SizeLimit,
    SpaceMismatch,
)
from .events import Event, check_family, first_overlap, is_partition
from .measure import ProbabilityMeasure, ie_cap
from .rational import format_rational, parse_rational


def _check(m: ProbabilityMeasure, *events: Event) -> None:
    for e in events:
        if e.space is not m.space:
            raise SpaceMismatch("event and measure belong to different sample spaces")


def cond_prob(m: ProbabilityMeasure, a: Event, b: Event) -> Fraction:
    """P(A | B) = P(A and B) / P(B); undefined when P(B) = 0."""
    _check(m, a, b)
    pb = m.mass(b.mask)
    if pb == 0:
        raise ConditionOnNull(f"cannot condition on {b}: its probability is 0")
    return m.mass(a.mask & b.mask) / pb


@dataclass(frozen=True)
class ChainRule:
    product: Fraction
    factors: tuple[Fraction, ...]


def chain_rule(m: ProbabilityMeasure, events: Sequence[Event]) -> ChainRule:
    """P(A1) * P(A2 | A1) * ... * P(An | A1 and ... and An-1).

    Every proper prefix intersection must have positive probability, since
    each one is a denominator.
    """
    check_family(events)
    _check(m, *events)
    prefix = events[0].mask
    factors = [m.mass(prefix)]
    for k, e in enumerate(events[1:], start=1):
        denom = m.mass(prefix)
        if denom == 0:
            raise PrefixNull(
                f"the intersection of the first {k} event(s) has probability 0", k
            )
        nxt = prefix & e.mask
        factors.append(m.mass(nxt) / denom)
        prefix = nxt
    product = Fraction(1)
    for f in factors:
        product *= f
    return ChainRule(product, tuple(factors))


def is_independent(m: ProbabilityMeasure, a: Event, b: Event) -> bool:
    """Product form P(A and B) = P(A) P(B).

    Symmetric, and defined even when an event has probability zero (such an
    event is independent of everything).
    """
    _check(m, a, b)
    return m.mass(a.mask & b.mask) == m.mass(a.mask) * m.mass(b.mask)


@dataclass(frozen=True)
class MutualIndependence:
    ok: bool
    violating: tuple[int, ...] | None = None

    def __bool__(self) -> bool:
        return self.ok


def _subsets_lex(n: int, masks: Sequence[int]) -> Iterator[tuple[tuple[int, ...], int]]:
    # Depth-first extension by larger indices yields lexicographic order.
    stack: list[tuple[tuple[int, ...], int]] = [((i,), masks[i]) for i in reversed(range(n))]
    while stack:
        idx, inter = stack.pop()
        yield idx, inter
        for j in reversed(range(idx[-1] + 1, n)):
            stack.append((idx + (j,), inter & masks[j]))


def is_mutually_independent(
    m: ProbabilityMeasure, events: Sequence[Event], *, cap: int | None = None
) -> MutualIndependence:
    """Check the product identity on every index subset of size two or more.

    On failure, ``violating`` is the lexicographically first bad subset
    (0-based indices).
    """
    check_family(events)
    _check(m, *events)
    n = len(events)
    if n < 2:
        raise ArityError("mutual independence needs at least two events")
    limit = ie_cap() if cap is None else cap
    if n > limit:
        raise SizeLimit(f"mutual independence over {n} events exceeds the cap of {limit}")
    masks = [e.mask for e in events]
    singles = [m.mass(x) for x in masks]
    for idx, inter in _subsets_lex(n, masks):
        if len(idx) < 2:
            continue
        product = Fraction(1)
        for i in idx:
            product *= singles[i]
        if m.mass(inter) != product:
            return MutualIndependence(False, idx)
    return MutualIndependence(True)


def _require_partition(events: Sequence[Event]) -> None:
    if not is_partition(events):
        raise NotAPartition("the blocks do not form a partition of the sample space")


@dataclass(frozen=True)
class TotalProbability:
    total: Fraction
    terms: tuple[Fraction, ...]


def total_probability(
    m: ProbabilityMeasure, a: Event, partition: Sequence[Event]
) -> TotalProbability:
    """Sum of P(A | Ci) P(Ci) over the blocks of a partition.

    A block of probability zero contributes an exact zero term.
    """
    check_family(partition)
    _check(m, a, *partition)
    _require_partition(partition)
    terms = []
    for c in partition:
        pc = m.mass(c.mask)
        terms.append(cond_prob(m, a, c) * pc if pc else Fraction(0))
    return TotalProbability(sum(terms, Fraction(0)), tuple(terms))


def bayes(
    m: ProbabilityMeasure, i: int, a: Event, partition: Sequence[Event]
) -> Fraction:
    """Posterior P(Ci | A) as likelihood times prior over the evidence.

    ``i`` is a 0-based block index.
    """
    check_family(partition)
    _check(m, a, *partition)
    _require_partition(partition)
    if not 0 <= i < len(partition):
        raise IndexOutOfRange(f"block index {i} outside 0..{len(partition) - 1}")
    if m.mass(a.mask) == 0:
        raise EvidenceNull(f"the evidence {a} has probability 0")
    block = partition[i]
    evidence = total_probability(m, a, partition).total
    return cond_prob(m, a, block) * m.mass(block.mask) / evidence


@dataclass(frozen=True)
class BayesTable:
    """Priors P(Ci) and likelihoods P(A | Ci), given as plain numbers."""

    priors: tuple[Fraction, ...]
    likelihoods: tuple[Fraction, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "priors", tuple(Fraction(p) for p in self.priors))
        object.__setattr__(self, "likelihoods", tuple(Fraction(x) for x in self.likelihoods))
        if len(self.priors) != len(self.likelihoods):
            raise LengthMismatch(
                f"{len(self.priors)} priors but {len(self.likelihoods)} likelihoods"
            )
        if not self.priors:
            raise LengthMismatch("a Bayes table needs at least one row")
        for k, p in enumerate(self.priors):
            if p < 0:
                raise InvalidPrior(f"prior {k + 1} is negative: {format_rational(p)}")
        total = sum(self.priors, Fraction(0))
        if total != 1:
            raise InvalidPrior(f"priors sum to {format_rational(total)}, not 1")
        for k, x in enumerate(self.likelihoods):
            if not 0 <= x <= 1:
                raise InvalidLikelihood(
                    f"likelihood {k + 1} is outside [0, 1]: {format_rational(x)}"
                )

    @property
    def evidence(self) -> Fraction:
        return sum((p * x for p, x in zip(self.priors, self.likelihoods)), Fraction(0))


def bayes_table(t: BayesTable) -> tuple[Fraction, ...]:
    evidence = t.evidence
    if evidence == 0:
        raise EvidenceNull("the evidence sum of prior times likelihood is 0")
    return tuple(p * x / evidence for p, x in zip(t.priors, t.likelihoods))


def read_bayes_csv(text: str) -> BayesTable:
    """Parse ``prior,likelihood`` rows. Blank lines, ``#`` comments and a
    header row naming the two columns are skipped."""
    priors, likelihoods = [], []
    lines = [ln for ln in text.splitlines() if ln.strip() and not ln.lstrip().startswith("#")]
    for lineno, row in enumerate(csv.reader(io.StringIO("\n".join(lines))), start=1):
        cells = [c.strip() for c in row]
        if lineno == 1 and [c.lower() for c in cells] == ["prior", "likelihood"]:
            continue
        if len(cells) != 2:
            raise LengthMismatch(f"row {lineno}: expected 2 columns, got {len(cells)}")
        priors.append(parse_rational(cells[0]))
        likelihoods.append(parse_rational(cells[1]))
    return BayesTable(tuple(priors), tuple(likelihoods))


def write_posteriors_csv(posteriors: Sequence[Fraction]) -> str:
    return "".join(f"{format_rational(p)}\n" for p in posteriors)


def cond_addition(m: ProbabilityMeasure, events: Sequence[Event], b: Event) -> Fraction:
    """Sum of P(Ai | B) over pairwise disjoint events."""
    check_family(events)
    _check(m, b, *events)
    pair = first_overlap(events)
    if pair is not None:
        i, j = pair
        raise NotDisjoint(f"events {i + 1} and {j + 1} overlap", pair)
    return sum((cond_prob(m, e, b) for e in events), Fraction(0))
