"""Finite topological spaces, closure/interior, and correspondence checks.

Subsets are handled internally as integer bitmasks over the ordered point
tuple (bit ``j`` <-> ``points[j]``); the public functions speak frozensets.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Hashable, Iterable, Mapping

from .errors import InputError

Label = Hashable


def popcount(mask: int) -> int:
    return bin(mask).count("1")


def iter_bits(mask: int):
    j = 0
    while mask:
        if mask & 1:
            yield j
        mask >>= 1
        j += 1


def _unique(labels, what) -> tuple:
    labels = tuple(labels)
    if len(set(labels)) != len(labels):
        raise InputError(f"{what}: duplicate labels in {list(labels)!r}")
    return labels


@dataclass(frozen=True)
class FiniteTopology:
    """Finite point set with an explicit family of open sets.

    The family is validated, never completed: it must contain the empty set
    and the whole space and be closed under pairwise union and intersection.
    """

    points: tuple
    opens: frozenset
    _index: dict = field(init=False, repr=False, compare=False)
    _open_masks: tuple = field(init=False, repr=False, compare=False)
    _closed_masks: tuple = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        points = _unique(self.points, "topology points")
        index = {p: j for j, p in enumerate(points)}
        opens = frozenset(frozenset(o) for o in self.opens)
        object.__setattr__(self, "points", points)
        object.__setattr__(self, "opens", opens)
        object.__setattr__(self, "_index", index)

        masks = set()
        for o in opens:
            unknown = [p for p in o if p not in index]
            if unknown:
                raise InputError(f"topology opens: unknown labels {unknown!r}")
            masks.add(sum(1 << index[p] for p in o))
        full = (1 << len(points)) - 1
        if 0 not in masks:
            raise InputError("topology opens: the empty set is missing")
        if full not in masks:
            raise InputError("topology opens: the full point set is missing")
        for a in masks:
            for b in masks:
                if a | b not in masks or a & b not in masks:
                    bad = self.labels(a | b if a | b not in masks else a & b)
                    raise InputError(
                        "topology opens: family not closed under union/intersection; "
                        f"missing {sorted(map(str, bad))!r}"
                    )
        ordered = tuple(sorted(masks))
        object.__setattr__(self, "_open_masks", ordered)
        object.__setattr__(self, "_closed_masks", tuple(sorted(full ^ m for m in ordered)))

    # -- constructors -------------------------------------------------------
    @classmethod
    def discrete(cls, points: Iterable[Label]) -> "FiniteTopology":
        points = tuple(points)
        n = len(points)
        opens = [frozenset(points[j] for j in range(n) if m >> j & 1) for m in range(1 << n)]
        return cls(points, frozenset(opens))

    @classmethod
    def indiscrete(cls, points: Iterable[Label]) -> "FiniteTopology":
        points = tuple(points)
        return cls(points, frozenset({frozenset(), frozenset(points)}))

    @classmethod
    def from_masks(cls, points, masks: Iterable[int]) -> "FiniteTopology":
        points = tuple(points)
        opens = [frozenset(points[j] for j in iter_bits(m)) for m in masks]
        return cls(points, frozenset(opens))

    # -- mask plumbing ------------------------------------------------------
    @property
    def full_mask(self) -> int:
        return (1 << len(self.points)) - 1

    @property
    def open_masks(self) -> tuple:
        return self._open_masks

    @property
    def closed_masks(self) -> tuple:
        return self._closed_masks

    @property
    def is_discrete(self) -> bool:
        return len(self._open_masks) == 1 << len(self.points)

    def mask(self, subset: Iterable[Label], what: str = "subset") -> int:
        m = 0
        for p in subset:
            try:
                m |= 1 << self._index[p]
            except (KeyError, TypeError):
                raise InputError(f"{what}: label {p!r} is not a point of the topology") from None
        return m

    def labels(self, mask: int) -> frozenset:
        return frozenset(self.points[j] for j in iter_bits(mask))

    def closure_mask(self, mask: int) -> int:
        out = self.full_mask
        for c in self._closed_masks:
            if mask & ~c == 0:
                out &= c
        return out

    def interior_mask(self, mask: int) -> int:
        out = 0
        for o in self._open_masks:
            if o & ~mask == 0:
                out |= o
        return out

    def is_closed_mask(self, mask: int) -> bool:
        return (self.full_mask ^ mask) in self._open_set

    def is_open_mask(self, mask: int) -> bool:
        return mask in self._open_set

    @property
    def _open_set(self):
        # cached lazily; frozen dataclass forbids plain assignment
        try:
            return self.__dict__["_open_lookup"]
        except KeyError:
            s = frozenset(self._open_masks)
            object.__setattr__(self, "_open_lookup", s)
            return s

    def __hash__(self):
        return hash((self.points, self._open_masks))


@dataclass(frozen=True)
class SetCorrespondence:
    """A map ``z -> F(z)`` from a finite domain to subsets of the points."""

    domain: tuple
    values: Mapping

    def __post_init__(self):
        domain = _unique(self.domain, "correspondence domain")
        missing = [z for z in domain if z not in self.values]
        if missing:
            raise InputError(f"correspondence: no value for domain elements {missing!r}")
        extra = [z for z in self.values if z not in set(domain)]
        if extra:
            raise InputError(f"correspondence: values given outside the domain {extra!r}")
        object.__setattr__(self, "domain", domain)
        object.__setattr__(self, "values", {z: frozenset(self.values[z]) for z in domain})

    def __call__(self, z):
        return self.values[z]

    def __hash__(self):
        return hash((self.domain, tuple(self.values[z] for z in self.domain)))


@dataclass(frozen=True)
class ClosednessReport:
    intersectionally_closed: bool
    transfer_closed: bool
    unionly_open: bool
    transfer_open: bool


def closure(topology: FiniteTopology, s: Iterable[Label]) -> frozenset:
    """Smallest closed superset of ``s``."""
    return topology.labels(topology.closure_mask(topology.mask(s)))


def interior(topology: FiniteTopology, s: Iterable[Label]) -> frozenset:
    """Largest open subset of ``s``."""
    return topology.labels(topology.interior_mask(topology.mask(s)))


def correspondence_masks(topology: FiniteTopology, f: SetCorrespondence) -> list[int]:
    return [topology.mask(f.values[z], what=f"correspondence value at {z!r}") for z in f.domain]


def classify_masks(topology: FiniteTopology, masks) -> ClosednessReport:
    """The four set-algebra identities on a list of value masks."""
    if not masks:
        raise InputError("correspondence: empty domain (identities range over the domain)")
    full = topology.full_mask
    inter_cl, inter, union, union_int = full, full, 0, 0
    for m in masks:
        inter_cl &= topology.closure_mask(m)
        inter &= m
        union |= m
        union_int |= topology.interior_mask(m)
    return ClosednessReport(
        intersectionally_closed=inter_cl == topology.closure_mask(inter),
        transfer_closed=inter_cl == inter,
        unionly_open=topology.interior_mask(union) == union_int,
        transfer_open=union == union_int,
    )


def classify_correspondence(topology: FiniteTopology, f: SetCorrespondence) -> ClosednessReport:
    """Evaluate intersectional/transfer closedness and unional/transfer openness."""
    return classify_masks(topology, correspondence_masks(topology, f))


def complement_correspondence(f: SetCorrespondence, topology: FiniteTopology) -> SetCorrespondence:
    everything = frozenset(topology.points)
    for z in f.domain:
        topology.mask(f.values[z], what=f"correspondence value at {z!r}")
    return SetCorrespondence(f.domain, {z: everything - f.values[z] for z in f.domain})
