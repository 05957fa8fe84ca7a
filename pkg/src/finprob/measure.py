"""Probability measures on finite spaces, built from exact atom weights."""

from __future__ import annotations

import itertools
import os
import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

from .errors import (
    InvalidWeight,
    NotDisjoint,
    NotMeasurable,
    ProbError,
    SizeLimit,
    SpaceMismatch,
)
from .events import (
    Event,
    SampleSpace,
    SigmaAlgebra,
    check_family,
    first_overlap,
    generate_sigma_algebra,
    union_all,
)
from .rational import format_rational, parse_rational

DEFAULT_IE_CAP = 20
IE_CAP_ENV = "FINPROB_IE_CAP"

# Exhaustive additivity checks up to this many outcomes (3**6 disjoint pairs).
EXHAUSTIVE_OUTCOMES = 6

# Event masses are memoised only on spaces this small, bounding the cache.
_CACHE_OUTCOMES = 16


def ie_cap() -> int:
    """Inclusion-exclusion family cap, overridable through ``FINPROB_IE_CAP``."""
    raw = os.environ.get(IE_CAP_ENV)
    if not raw:
        return DEFAULT_IE_CAP
    try:
        return int(raw)
    except ValueError:
        raise ProbError(f"{IE_CAP_ENV} must be an integer, got {raw!r}") from None


@dataclass(frozen=True)
class AxiomReport:
    nonneg_ok: bool
    normalized_ok: bool
    additivity_ok: bool
    witnesses: tuple[str, ...] = ()

    @property
    def ok(self) -> bool:
        return self.nonneg_ok and self.normalized_ok and self.additivity_ok


class ProbabilityMeasure:
    """Exact nonnegative weights, one per outcome, summing to one.

    Pass ``validate=False`` to build a measure that breaks the axioms, which
    is only useful for auditing and fault-injection tests.
    """

    __slots__ = ("space", "weights", "_cache")

    def __init__(
        self,
        space: SampleSpace,
        weights: Iterable[Fraction | int | str],
        *,
        validate: bool = True,
    ) -> None:
        ws = tuple(parse_rational(w) if isinstance(w, str) else Fraction(w) for w in weights)
        if len(ws) != len(space):
            raise ValueError(f"expected {len(space)} weights, got {len(ws)}")
        self.space = space
        self.weights = ws
        self._cache: dict[int, Fraction] = {}
        if validate:
            report = validate_measure(self)
            if not report.ok:
                raise InvalidWeight("; ".join(report.witnesses), report)

    @classmethod
    def uniform(cls, space: SampleSpace) -> ProbabilityMeasure:
        return cls(space, [Fraction(1, len(space))] * len(space))

    @property
    def space_id(self) -> int:
        return self.space.id

    def __repr__(self) -> str:
        body = ", ".join(
            f"{o}: {format_rational(w)}" for o, w in zip(self.space.outcomes, self.weights)
        )
        return f"ProbabilityMeasure({{{body}}})"

    def mass(self, mask: int) -> Fraction:
        """Total weight of the outcomes selected by ``mask``; memoised."""
        try:
            return self._cache[mask]
        except KeyError:
            pass
        total = Fraction(0)
        m, i = mask, 0
        while m:
            if m & 1:
                total += self.weights[i]
            m >>= 1
            i += 1
        if len(self.weights) <= _CACHE_OUTCOMES:
            self._cache[mask] = total
        return total


def _check(m: ProbabilityMeasure, *events: Event) -> None:
    for e in events:
        if e.space is not m.space:
            raise SpaceMismatch("event and measure belong to different sample spaces")


def prob(m: ProbabilityMeasure, a: Event) -> Fraction:
    """Sum of the atom weights inside ``a``."""
    _check(m, a)
    return m.mass(a.mask)


def complement_prob(m: ProbabilityMeasure, a: Event) -> Fraction:
    _check(m, a)
    return 1 - m.mass(a.mask)


def union_prob_pair(m: ProbabilityMeasure, a: Event, b: Event) -> Fraction:
    """P(A) + P(B) - P(A and B)."""
    _check(m, a, b)
    return m.mass(a.mask) + m.mass(b.mask) - m.mass(a.mask & b.mask)


def disjoint_union_prob(m: ProbabilityMeasure, events: Sequence[Event]) -> Fraction:
    """Sum of probabilities of pairwise disjoint events."""
    check_family(events)
    _check(m, *events)
    pair = first_overlap(events)
    if pair is not None:
        i, j = pair
        raise NotDisjoint(
            f"events {i + 1} and {j + 1} overlap on {events[i] & events[j]}", pair
        )
    return sum((m.mass(e.mask) for e in events), Fraction(0))


@dataclass(frozen=True)
class InclusionExclusion:
    """Signed expansion of P(A1 or ... or An).

    ``layers[k]`` is the signed sum over all index subsets of size ``k + 1``.
    ``terms`` maps each index subset (0-based, ascending) to its signed term
    and is only filled when requested.
    """

    total: Fraction
    layers: tuple[Fraction, ...]
    terms: Mapping[tuple[int, ...], Fraction] = field(default_factory=dict)


def inclusion_exclusion(
    m: ProbabilityMeasure,
    events: Sequence[Event],
    *,
    cap: int | None = None,
    with_terms: bool = False,
) -> InclusionExclusion:
    """Evaluate all ``2**n - 1`` alternating intersection terms.

    Subsets are visited in increasing bitmask order; each intersection is
    the intersection of the subset without its lowest index, and the event
    at that index.
    """
    check_family(events)
    _check(m, *events)
    n = len(events)
    limit = ie_cap() if cap is None else cap
    if n > limit:
        raise SizeLimit(f"inclusion-exclusion over {n} events exceeds the cap of {limit}")
    masks = [e.mask for e in events]
    count = 1 << n
    inter = [0] * count
    size = [0] * count
    inter[0] = m.space.full_mask
    layers = [Fraction(0)] * n
    terms: dict[tuple[int, ...], Fraction] = {}
    for s in range(1, count):
        low = s & -s
        rest = s ^ low
        inter[s] = inter[rest] & masks[low.bit_length() - 1]
        k = size[rest] + 1
        size[s] = k
        p = m.mass(inter[s])
        term = p if k % 2 else -p
        layers[k - 1] += term
        if with_terms:
            terms[tuple(i for i in range(n) if s >> i & 1)] = term
    return InclusionExclusion(sum(layers, Fraction(0)), tuple(layers), terms)


def _disjoint_pairs(n: int, rng: random.Random, samples: int) -> Iterable[tuple[int, int]]:
    full = (1 << n) - 1
    if n <= EXHAUSTIVE_OUTCOMES:
        for a in range(full + 1):
            rest = full ^ a
            b = rest
            while True:
                yield a, b
                if b == 0:
                    break
                b = (b - 1) & rest
    else:
        for _ in range(samples):
            a = rng.getrandbits(n)
            yield a, rng.getrandbits(n) & ~a & full


def validate_measure(
    m: ProbabilityMeasure, *, seed: int = 0, samples: int = 256
) -> AxiomReport:
    """Check non-negativity, normalization and finite additivity.

    Additivity holds by construction for atom weights; it is still checked
    over every disjoint pair when the space has at most six outcomes, and on
    ``samples`` seeded random disjoint pairs otherwise.
    """
    witnesses: list[str] = []
    nonneg = True
    for i, (label, w) in enumerate(zip(m.space.outcomes, m.weights)):
        if w < 0:
            nonneg = False
            witnesses.append(
                f"non-negativity: outcome {i + 1} ({label}) has weight {format_rational(w)}"
            )
    total = sum(m.weights, Fraction(0))
    normalized = total == 1
    if not normalized:
        witnesses.append(f"normalization: weights sum to {format_rational(total)}, not 1")
    additive = True
    rng = random.Random(seed)
    space = m.space
    for a, b in _disjoint_pairs(len(space), rng, samples):
        if m.mass(a | b) != m.mass(a) + m.mass(b):
            additive = False
            witnesses.append(
                "additivity: P({}) != P({}) + P({})".format(
                    space.from_mask(a | b), space.from_mask(a), space.from_mask(b)
                )
            )
            break
    return AxiomReport(nonneg, normalized, additive, tuple(witnesses))


def validate_table(
    space: SampleSpace,
    table: Mapping[Event, Fraction | int | str],
    *,
    seed: int = 0,
    samples: int = 256,
) -> AxiomReport:
    """Audit a claimed event-to-probability table against the axioms.

    Additivity is checked on disjoint pairs whose union also appears in the
    table: all of them for spaces of at most six outcomes, otherwise
    ``samples`` seeded random pairs of table entries.
    """
    probs: dict[int, Fraction] = {}
    for e, p in table.items():
        if e.space is not space:
            raise SpaceMismatch("table event does not belong to the given space")
        probs[e.mask] = parse_rational(p) if isinstance(p, str) else Fraction(p)
    witnesses: list[str] = []
    nonneg = True
    for mask in sorted(probs):
        if probs[mask] < 0:
            nonneg = False
            witnesses.append(
                f"non-negativity: P({space.from_mask(mask)}) = {format_rational(probs[mask])}"
            )
            break
    full = space.full_mask
    normalized = probs.get(full) == 1
    if not normalized:
        claimed = probs.get(full)
        shown = "missing" if claimed is None else format_rational(claimed)
        witnesses.append(f"normalization: P(whole space) is {shown}, not 1")
    keys = sorted(probs)
    if len(space) <= EXHAUSTIVE_OUTCOMES:
        pairs: Iterable[tuple[int, int]] = itertools.combinations_with_replacement(keys, 2)
    else:
        rng = random.Random(seed)
        pairs = [(rng.choice(keys), rng.choice(keys)) for _ in range(samples)] if keys else []
    additive = True
    for a, b in pairs:
        if a & b or (a | b) not in probs:
            continue
        if probs[a | b] != probs[a] + probs[b]:
            additive = False
            witnesses.append(
                "additivity: P({}) = {} but P({}) + P({}) = {}".format(
                    space.from_mask(a | b),
                    format_rational(probs[a | b]),
                    space.from_mask(a),
                    space.from_mask(b),
                    format_rational(probs[a] + probs[b]),
                )
            )
            break
    return AxiomReport(nonneg, normalized, additive, tuple(witnesses))


@dataclass(frozen=True)
class ProbabilitySpace:
    """The triple of sample space, sigma-algebra and measure."""

    space: SampleSpace
    algebra: SigmaAlgebra
    measure: ProbabilityMeasure

    def __post_init__(self) -> None:
        if not (self.algebra.space is self.space and self.measure.space is self.space):
            raise SpaceMismatch("space, algebra and measure must share one sample space")
        report = validate_measure(self.measure)
        if not report.ok:
            raise InvalidWeight("; ".join(report.witnesses), report)

    @classmethod
    def discrete(cls, measure: ProbabilityMeasure) -> ProbabilitySpace:
        """Probability space whose sigma-algebra is the full power set."""
        space = measure.space
        return cls(space, generate_sigma_algebra(space, space.singletons()), measure)

    def prob(self, a: Event) -> Fraction:
        if a not in self.algebra:
            raise NotMeasurable(f"{a} is not in the sigma-algebra")
        return prob(self.measure, a)


def union_prob(m: ProbabilityMeasure, events: Sequence[Event]) -> Fraction:
    """Probability of the union computed directly from atoms."""
    return prob(m, union_all(events))
