"""Finite sample spaces, events as bitmasks, and sigma-algebras over them.

An event is stored as an integer whose bit ``i`` is set when outcome ``i``
(in the space's declared order) belongs to the event.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Iterable, Iterator, Sequence

from .errors import EmptyFamily, SizeLimit, SpaceMismatch

DEFAULT_SIGMA_CAP = 2**20

# Above this many members the closure is assembled from atoms instead of
# saturating pairwise unions (quadratic in the member count).
_SATURATION_LIMIT = 1024

_space_ids = itertools.count(1)


class SampleSpace:
    """An ordered, finite set of distinct outcome labels."""

    __slots__ = ("outcomes", "id", "_index")

    def __init__(self, outcomes: Iterable[str]) -> None:
        outcomes = tuple(outcomes)
        if not outcomes:
            raise ValueError("a sample space needs at least one outcome")
        index: dict[str, int] = {}
        for i, label in enumerate(outcomes):
            if not isinstance(label, str) or not label:
                raise ValueError(f"outcome labels must be nonempty strings, got {label!r}")
            if label in index:
                raise ValueError(f"duplicate outcome label {label!r}")
            index[label] = i
        self.outcomes = outcomes
        self.id = next(_space_ids)
        self._index = index

    def __len__(self) -> int:
        return len(self.outcomes)

    def __repr__(self) -> str:
        return f"SampleSpace({list(self.outcomes)!r})"

    @property
    def full_mask(self) -> int:
        return (1 << len(self.outcomes)) - 1

    def index(self, label: str) -> int:
        return self._index[label]

    def __contains__(self, label: object) -> bool:
        return label in self._index

    def event(self, labels: Iterable[str] = ()) -> Event:
        mask = 0
        for label in labels:
            try:
                mask |= 1 << self._index[label]
            except KeyError:
                raise KeyError(f"unknown outcome {label!r}") from None
        return Event(self, mask)

    def from_mask(self, mask: int) -> Event:
        if mask < 0 or mask > self.full_mask:
            raise ValueError(f"mask {mask:#x} out of range for {len(self)} outcomes")
        return Event(self, mask)

    def empty(self) -> Event:
        return Event(self, 0)

    def omega(self) -> Event:
        return Event(self, self.full_mask)

    def singletons(self) -> list[Event]:
        return [Event(self, 1 << i) for i in range(len(self.outcomes))]

    def all_events(self) -> Iterator[Event]:
        """Every subset of the space, in increasing mask order."""
        for mask in range(self.full_mask + 1):
            yield Event(self, mask)


@dataclass(frozen=True)
class Event:
    """A subset of a :class:`SampleSpace`.

    Two events are equal only if they belong to the same space object and
    have the same members.
    """

    space: SampleSpace = field(repr=False)
    mask: int

    @property
    def space_id(self) -> int:
        return self.space.id

    @property
    def labels(self) -> tuple[str, ...]:
        return tuple(o for i, o in enumerate(self.space.outcomes) if self.mask >> i & 1)

    @property
    def bits(self) -> str:
        """Membership string in outcome order, e.g. ``'010101'``."""
        return "".join("1" if self.mask >> i & 1 else "0" for i in range(len(self.space)))

    def __len__(self) -> int:
        return self.mask.bit_count()

    def __iter__(self) -> Iterator[str]:
        return iter(self.labels)

    def __contains__(self, label: object) -> bool:
        return label in self.space and bool(self.mask >> self.space.index(label) & 1)

    def __str__(self) -> str:
        return "{" + ",".join(self.labels) + "}"

    def __or__(self, other: Event) -> Event:
        return union(self, other)

    def __and__(self, other: Event) -> Event:
        return intersection(self, other)

    def __sub__(self, other: Event) -> Event:
        return intersection(self, complement(other))

    def __invert__(self) -> Event:
        return complement(self)

    def is_empty(self) -> bool:
        return self.mask == 0

    def issubset(self, other: Event) -> bool:
        _check_space(self, other)
        return self.mask & ~other.mask == 0


def _check_space(*events: Event) -> SampleSpace:
    space = events[0].space
    for e in events[1:]:
        if e.space is not space:
            raise SpaceMismatch(
                f"events belong to different sample spaces (ids {space.id} and {e.space.id})"
            )
    return space


def check_family(events: Sequence[Event]) -> SampleSpace:
    """Return the common space of a nonempty family, or raise."""
    if not events:
        raise EmptyFamily("the family of events is empty")
    return _check_space(*events)


def union(a: Event, b: Event) -> Event:
    _check_space(a, b)
    return Event(a.space, a.mask | b.mask)


def intersection(a: Event, b: Event) -> Event:
    _check_space(a, b)
    return Event(a.space, a.mask & b.mask)


def complement(a: Event) -> Event:
    return Event(a.space, a.space.full_mask ^ a.mask)


def union_all(events: Sequence[Event]) -> Event:
    space = check_family(events)
    mask = 0
    for e in events:
        mask |= e.mask
    return Event(space, mask)


def intersection_all(events: Sequence[Event]) -> Event:
    space = check_family(events)
    mask = space.full_mask
    for e in events:
        mask &= e.mask
    return Event(space, mask)


def is_pme(a: Event, b: Event) -> bool:
    """True when the two events are disjoint."""
    _check_space(a, b)
    return a.mask & b.mask == 0


def first_overlap(events: Sequence[Event]) -> tuple[int, int] | None:
    """Index pair ``(i, j)``, ``i < j``, of the first two overlapping events."""
    check_family(events)
    for i, j in itertools.combinations(range(len(events)), 2):
        if events[i].mask & events[j].mask:
            return i, j
    return None


def is_pme_family(events: Sequence[Event]) -> bool:
    """Pairwise disjointness of the whole family.

    This is the only "mutually exclusive" notion used anywhere in the
    package. A family whose overall intersection is empty need not qualify:
    ``{1,2}, {2,3}, {1,3}`` has empty triple intersection but every pair
    overlaps.
    """
    return first_overlap(events) is None


def is_partition(events: Sequence[Event]) -> bool:
    """Pairwise disjoint blocks covering the space. Empty blocks are allowed."""
    space = check_family(events)
    covered = 0
    for e in events:
        if covered & e.mask:
            return False
        covered |= e.mask
    return covered == space.full_mask


@dataclass(frozen=True)
class SigmaAlgebra:
    space: SampleSpace = field(repr=False)
    members: tuple[Event, ...]

    @property
    def space_id(self) -> int:
        return self.space.id

    @property
    def masks(self) -> frozenset[int]:
        return frozenset(e.mask for e in self.members)

    def __len__(self) -> int:
        return len(self.members)

    def __iter__(self) -> Iterator[Event]:
        return iter(self.members)

    def __contains__(self, event: object) -> bool:
        return isinstance(event, Event) and event.space is self.space and event.mask in self.masks

    def atoms(self) -> list[Event]:
        """Minimal nonempty members, in increasing mask order."""
        nonempty = [e.mask for e in self.members if e.mask]
        return [
            Event(self.space, m)
            for m in nonempty
            if not any(o != m and o & m == o for o in nonempty)
        ]


def atom_masks(space: SampleSpace, generators: Iterable[Event]) -> list[int]:
    """Blocks of the coarsest partition that every generator respects."""
    blocks = [space.full_mask]
    for g in generators:
        split = []
        for b in blocks:
            inside, outside = b & g.mask, b & ~g.mask
            split.extend(m for m in (inside, outside) if m)
        blocks = split
    return sorted(blocks)


def _unions_of(atoms: Sequence[int]) -> set[int]:
    members = {0}
    for a in atoms:
        members |= {m | a for m in members}
    return members


def _saturate(full: int, seed: set[int]) -> set[int]:
    members = set(seed)
    frontier = set(seed)
    while frontier:
        grown = set()
        for x in frontier:
            grown.add(full ^ x)
            for y in members:
                grown.add(x | y)
        frontier = grown - members
        members |= frontier
    return members


def generate_sigma_algebra(
    space: SampleSpace,
    generators: Sequence[Event] = (),
    cap: int = DEFAULT_SIGMA_CAP,
) -> SigmaAlgebra:
    """Smallest sigma-algebra on ``space`` containing every generator.

    Closure is reached by repeatedly adding complements and pairwise unions
    until nothing new appears. Large closures are built directly as all
    unions of atoms, which is the same set.
    """
    for g in generators:
        if g.space is not space:
            raise SpaceMismatch("generator does not belong to the given space")
    atoms = atom_masks(space, generators)
    size = 1 << len(atoms)
    if size > cap:
        raise SizeLimit(f"sigma-algebra would have {size} members, over the cap of {cap}")
    if size <= _SATURATION_LIMIT:
        masks = _saturate(space.full_mask, {0, space.full_mask} | {g.mask for g in generators})
    else:
        masks = _unions_of(atoms)
    return SigmaAlgebra(space, tuple(Event(space, m) for m in sorted(masks)))


@dataclass(frozen=True)
class SigmaCheck:
    """Outcome of :func:`is_sigma_algebra`; truthy when all properties hold."""

    ok: bool
    violated: str | None = None
    witness: tuple[Event, ...] = ()
    detail: str = ""

    def __bool__(self) -> bool:
        return self.ok


def is_sigma_algebra(space: SampleSpace, members: Iterable[Event]) -> SigmaCheck:
    """Check membership of the whole space, complement closure, union closure.

    On failure the report names the first violated property and a witness.
    """
    masks: set[int] = set()
    for e in members:
        if e.space is not space:
            raise SpaceMismatch("member does not belong to the given space")
        masks.add(e.mask)
    full = space.full_mask
    if full not in masks:
        return SigmaCheck(False, "omega", (space.omega(),), "the whole space is not a member")
    ordered = sorted(masks)
    for m in ordered:
        if full ^ m not in masks:
            a = Event(space, m)
            return SigmaCheck(
                False, "complement", (a, complement(a)), f"complement of {a} is missing"
            )
    for i, m in enumerate(ordered):
        for n in ordered[i + 1 :]:
            if m | n not in masks:
                a, b = Event(space, m), Event(space, n)
                return SigmaCheck(
                    False, "union", (a, b), f"union of {a} and {b} is missing"
                )
    return SigmaCheck(True)
