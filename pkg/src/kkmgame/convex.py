"""Finite abstract convex spaces and a brute-force KKM-principle checker.

A space ``(X, D, gamma)`` stores ``gamma`` as an explicit table over the
nonempty subsets of the seed set ``D``.  Seed subsets are bitmasks over the
seed order, point subsets are bitmasks over the point order.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Callable, Iterable, Mapping, Optional

import numpy as np

from . import _kernels
from .errors import CapError, InputError, PreconditionError
from .exact import to_extended
from .topology import (
    FiniteTopology,
    SetCorrespondence,
    _unique,
    classify_masks,
    iter_bits,
)

MAX_SEEDS = 12
DEFAULT_KKM_CAP = 1 << 24
# int64 point masks inside the search kernels
MAX_KERNEL_POINTS = 62


@dataclass(frozen=True)
class AbstractConvexSpace:
    """Explicit ``(points, seeds, gamma)`` with ``gamma`` keyed by frozensets."""

    points: tuple
    seeds: tuple
    gamma: Mapping
    _pindex: dict = field(init=False, repr=False, compare=False)
    _sindex: dict = field(init=False, repr=False, compare=False)
    _gmask: tuple = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        points = _unique(self.points, "space points")
        seeds = _unique(self.seeds, "space seeds")
        if not seeds:
            raise InputError("space seeds: the seed set must be nonempty")
        if len(seeds) > MAX_SEEDS:
            raise CapError(
                f"space seeds: {len(seeds)} seeds exceed the table cap of {MAX_SEEDS}",
                size=len(seeds), cap=MAX_SEEDS,
            )
        pindex = {p: j for j, p in enumerate(points)}
        sindex = {s: j for j, s in enumerate(seeds)}
        table = {}
        for key, value in self.gamma.items():
            key = frozenset(key)
            if not key or any(s not in sindex for s in key):
                raise InputError(f"space gamma: bad seed subset {sorted(map(str, key))!r}")
            value = frozenset(value)
            if not value:
                raise InputError(f"space gamma: empty value at {sorted(map(str, key))!r}")
            unknown = [p for p in value if p not in pindex]
            if unknown:
                raise InputError(f"space gamma: unknown points {unknown!r}")
            table[key] = value
        gmask = [0] * (1 << len(seeds))
        for amask in range(1, 1 << len(seeds)):
            key = frozenset(seeds[j] for j in iter_bits(amask))
            if key not in table:
                raise InputError(f"space gamma: missing entry for {sorted(map(str, key))!r}")
            gmask[amask] = sum(1 << pindex[p] for p in table[key])
        object.__setattr__(self, "points", points)
        object.__setattr__(self, "seeds", seeds)
        object.__setattr__(self, "gamma", table)
        object.__setattr__(self, "_pindex", pindex)
        object.__setattr__(self, "_sindex", sindex)
        object.__setattr__(self, "_gmask", tuple(gmask))

    def __hash__(self):
        return hash((self.points, self.seeds, self._gmask))

    # -- constructors -------------------------------------------------------
    @classmethod
    def from_function(cls, points, seeds, rule: Callable[[frozenset], Iterable]):
        seeds = tuple(seeds)
        table = {}
        for r in range(1, len(seeds) + 1):
            for combo in itertools.combinations(seeds, r):
                a = frozenset(combo)
                table[a] = frozenset(rule(a))
        return cls(tuple(points), seeds, table)

    @classmethod
    def identity(cls, points):
        """``gamma(A) = A`` on ``X = D``."""
        points = tuple(points)
        return cls.from_function(points, points, lambda a: a)

    @classmethod
    def constant(cls, points, c, seeds=None):
        points = tuple(points)
        if c not in points:
            raise InputError(f"constant structure: {c!r} is not a point")
        return cls.from_function(points, points if seeds is None else seeds, lambda a: {c})

    @classmethod
    def full(cls, points, seeds=None):
        points = tuple(points)
        return cls.from_function(points, points if seeds is None else seeds, lambda a: points)

    @classmethod
    def from_rule(cls, points, rule: str, seeds=None):
        """Expand ``"identity" | "constant:<label>" | "full"``."""
        points = tuple(points)
        if rule == "identity":
            if seeds is not None and tuple(seeds) != points:
                raise InputError("gamma_rule identity requires seeds equal to points")
            return cls.identity(points)
        if rule == "full":
            return cls.full(points, seeds)
        if rule.startswith("constant:"):
            label = rule.split(":", 1)[1]
            match = [p for p in points if str(p) == label]
            if not match:
                raise InputError(f"gamma_rule {rule!r}: no point labelled {label!r}")
            return cls.constant(points, match[0], seeds)
        raise InputError(f"unknown gamma_rule {rule!r}")

    # -- mask plumbing ------------------------------------------------------
    @property
    def full_mask(self) -> int:
        return (1 << len(self.points)) - 1

    @property
    def gamma_masks(self) -> tuple:
        return self._gmask

    def point_mask(self, subset, what="point subset") -> int:
        m = 0
        for p in subset:
            try:
                m |= 1 << self._pindex[p]
            except (KeyError, TypeError):
                raise InputError(f"{what}: {p!r} is not a point of the space") from None
        return m

    def seed_mask(self, subset, what="seed subset") -> int:
        m = 0
        for s in subset:
            try:
                m |= 1 << self._sindex[s]
            except (KeyError, TypeError):
                raise InputError(f"{what}: {s!r} is not a seed of the space") from None
        return m

    def point_labels(self, mask: int) -> frozenset:
        return frozenset(self.points[j] for j in iter_bits(mask))

    def seed_labels(self, mask: int) -> frozenset:
        return frozenset(self.seeds[j] for j in iter_bits(mask))

    @property
    def seeds_in_points(self) -> bool:
        return all(s in self._pindex for s in self.seeds)

    def hull_mask(self, seed_mask: int) -> int:
        """Union of gamma over the nonempty sub-masks of ``seed_mask``."""
        out = 0
        sub = seed_mask
        while sub:
            out |= self._gmask[sub]
            sub = (sub - 1) & seed_mask
        return out

    def seeds_to_point_mask(self, seed_mask: int) -> int:
        """Seeds, viewed as points (only meaningful when seeds are points)."""
        return sum(1 << self._pindex[self.seeds[j]] for j in iter_bits(seed_mask))

    def points_to_seed_mask(self, point_mask: int) -> int:
        """The seeds lying in a point subset."""
        m = 0
        for j in iter_bits(point_mask):
            s = self._sindex.get(self.points[j])
            if s is not None:
                m |= 1 << s
        return m


@dataclass(frozen=True)
class KkmVerdict:
    """Outcome of a KKM-principle check.

    ``holds`` is an exhaustive verdict from :func:`check_kkm_principle`;
    from :func:`falsify_kkm_random` it only means no counterexample was hit.
    """

    holds: bool
    counterexample: Optional[SetCorrespondence] = None
    empty_family: Optional[frozenset] = None
    method: str = "enumeration"
    mode: str = "closed"
    seed: Optional[int] = None
    sample_index: Optional[int] = None


def gamma_hull(space: AbstractConvexSpace, dprime) -> frozenset:
    dprime = frozenset(dprime)
    if not dprime:
        raise InputError("gamma_hull: the seed subset must be nonempty")
    return space.point_labels(space.hull_mask(space.seed_mask(dprime)))


def is_gamma_convex_relative(space: AbstractConvexSpace, y, dprime) -> bool:
    """Whether every ``gamma(A)``, ``A`` inside ``dprime``, lies in ``y``."""
    ymask = space.point_mask(y)
    dprime = frozenset(dprime)
    if not dprime:
        raise InputError("is_gamma_convex_relative: dprime must be nonempty")
    return space.hull_mask(space.seed_mask(dprime)) & ~ymask == 0


def _require_seeds_in_points(space, op):
    if not space.seeds_in_points:
        raise PreconditionError(f"{op}: requires every seed to be a point")


def _is_gamma_convex_mask(space: AbstractConvexSpace, ymask: int) -> bool:
    smask = space.points_to_seed_mask(ymask)
    if smask == 0:
        return True
    return space.hull_mask(smask) & ~ymask == 0


def is_gamma_convex(space: AbstractConvexSpace, y) -> bool:
    """``hull(y & seeds)`` contained in ``y``; vacuously true if no seeds in ``y``."""
    _require_seeds_in_points(space, "is_gamma_convex")
    return _is_gamma_convex_mask(space, space.point_mask(y))


def subspace(space: AbstractConvexSpace, y, dprime) -> AbstractConvexSpace:
    """Restrict to points ``y`` and seeds ``dprime`` (same gamma values)."""
    y = frozenset(y)
    dprime = frozenset(dprime)
    if not dprime:
        raise InputError("subspace: dprime must be nonempty")
    ymask = space.point_mask(y)
    dmask = space.seed_mask(dprime)
    sub = dmask
    while sub:
        if space.gamma_masks[sub] & ~ymask:
            a = sorted(map(str, space.seed_labels(sub)))
            raise PreconditionError(f"subspace: gamma({a}) is not contained in y")
        sub = (sub - 1) & dmask
    points = tuple(p for p in space.points if p in y)
    seeds = tuple(s for s in space.seeds if s in dprime)
    table = {a: v for a, v in space.gamma.items() if a <= dprime}
    return AbstractConvexSpace(points, seeds, table)


def product_space(factors, max_seeds: int = MAX_SEEDS) -> AbstractConvexSpace:
    """Product structure: ``gamma(A)`` is the product of the factors' values
    at the coordinate projections of ``A``.  Points and seeds are tuples.
    """
    factors = list(factors)
    if not factors:
        raise InputError("product_space: needs at least one factor")
    n_seeds = math.prod(len(f.seeds) for f in factors)
    if n_seeds > max_seeds:
        raise CapError(
            f"product_space: {n_seeds} product seeds exceed the cap of {max_seeds}",
            size=n_seeds, cap=max_seeds,
        )
    points = tuple(itertools.product(*(f.points for f in factors)))
    seeds = tuple(itertools.product(*(f.seeds for f in factors)))
    table = {}
    for amask in range(1, 1 << len(seeds)):
        members = [seeds[j] for j in iter_bits(amask)]
        coords = []
        for i, fac in enumerate(factors):
            proj = frozenset(m[i] for m in members)
            coords.append(sorted(fac.gamma[proj], key=fac._pindex.__getitem__))
        table[frozenset(members)] = frozenset(itertools.product(*coords))
    return AbstractConvexSpace(points, seeds, table)


def _correspondence_seed_masks(space: AbstractConvexSpace, f: SetCorrespondence) -> list[int]:
    if set(f.domain) != set(space.seeds):
        raise InputError("correspondence domain must equal the seed set")
    return [space.point_mask(f.values[s], what=f"correspondence value at {s!r}") for s in space.seeds]


def _is_kkm_masks(space: AbstractConvexSpace, values: list[int]) -> bool:
    n = len(values)
    union = [0] * (1 << n)
    g = space.gamma_masks
    for a in range(1, 1 << n):
        low = a & -a
        union[a] = union[a ^ low] | values[low.bit_length() - 1]
        if g[a] & ~union[a]:
            return False
    return True


def is_kkm_correspondence(space: AbstractConvexSpace, f: SetCorrespondence) -> bool:
    """``gamma(A)`` covered by the union of ``f`` over ``A``, for all ``A``."""
    return _is_kkm_masks(space, _correspondence_seed_masks(space, f))


def _topology_masks(space: AbstractConvexSpace, topology: FiniteTopology, mode: str) -> list[int]:
    if set(topology.points) != set(space.points):
        raise InputError("topology points must equal the space points")
    if mode not in ("closed", "open"):
        raise InputError(f"mode must be 'closed' or 'open', not {mode!r}")
    family = topology.closed_masks if mode == "closed" else topology.open_masks
    # re-express topology masks in the space's point order
    return sorted(space.point_mask(topology.labels(m)) for m in family)


def _candidates(space, allowed):
    out = []
    for j in range(len(space.seeds)):
        need = space.gamma_masks[1 << j]
        out.append([m for m in allowed if need & ~m == 0])
    return out


def _verdict_from_values(space, values, mode, method, **extra) -> KkmVerdict:
    n = len(values)
    empty = None
    for a in range(1, 1 << n):
        acc = space.full_mask
        for j in iter_bits(a):
            acc &= values[j]
        if acc == 0:
            empty = space.seed_labels(a)
            break
    f = SetCorrespondence(space.seeds, {s: space.point_labels(values[j]) for j, s in enumerate(space.seeds)})
    return KkmVerdict(False, f, empty, method=method, mode=mode, **extra)


def _assert_counterexample(space, topology, verdict: KkmVerdict):
    f = verdict.counterexample
    masks = _correspondence_seed_masks(space, f)
    if not _is_kkm_masks(space, masks):
        raise RuntimeError("counterexample is not a KKM correspondence")
    allowed = set(_topology_masks(space, topology, verdict.mode))
    if not all(m in allowed for m in masks):
        raise RuntimeError(f"counterexample has values that are not {verdict.mode}")
    acc = space.full_mask
    for s in verdict.empty_family:
        acc &= masks[space._sindex[s]]
    if acc != 0:
        raise RuntimeError("counterexample family has nonempty intersection")


def kkm_enumeration_size(space, topology, mode="closed") -> int:
    cands = _candidates(space, _topology_masks(space, topology, mode))
    return math.prod(len(c) for c in cands)


def check_kkm_principle(
    space: AbstractConvexSpace,
    topology: FiniteTopology,
    mode: str = "closed",
    cap: int = DEFAULT_KKM_CAP,
    exhaustive: bool = False,
    backend: Optional[str] = None,
) -> KkmVerdict:
    """Decide whether every closed- (or open-) valued KKM correspondence has
    the finite intersection property.

    Only correspondences whose value at each seed ``y`` contains
    ``gamma({y})`` can be KKM, so enumeration ranges over those, in
    lexicographic order.  Two shortcuts apply unless ``exhaustive``:
    a point common to all singleton values forces every KKM family to meet;
    and in a discrete topology the absence of such a point yields an explicit
    counterexample even when enumeration would exceed ``cap``.
    """
    return _check_kkm_cached(space, topology, mode, cap, exhaustive, backend)


@lru_cache(maxsize=4096)
def _check_kkm_cached(space, topology, mode, cap, exhaustive, backend):
    allowed = _topology_masks(space, topology, mode)
    n = len(space.seeds)
    singles = [space.gamma_masks[1 << j] for j in range(n)]
    common = space.full_mask
    for m in singles:
        common &= m
    if common and not exhaustive:
        return KkmVerdict(True, method="common-point", mode=mode)

    cands = _candidates(space, allowed)
    size = math.prod(len(c) for c in cands)
    if size <= cap and len(space.points) <= MAX_KERNEL_POINTS:
        flat = np.fromiter((m for c in cands for m in c), dtype=np.int64, count=sum(map(len, cands)))
        offsets = np.zeros(n + 1, dtype=np.int64)
        offsets[1:] = np.cumsum([len(c) for c in cands])
        gamma = np.asarray(space.gamma_masks, dtype=np.int64)
        picks = _kernels.kkm_search(gamma, flat, offsets, n, backend=backend)
        if picks[0] < 0:
            return KkmVerdict(True, method="enumeration", mode=mode)
        values = [int(flat[p]) for p in picks]
        verdict = _verdict_from_values(space, values, mode, "enumeration")
    elif len(allowed) == 1 << len(space.points) and not exhaustive:
        # discrete: send each point to the first seed whose singleton value misses it
        killer = {}
        for p in range(len(space.points)):
            killer[p] = next(j for j in range(n) if not singles[j] >> p & 1)
        values = [space.full_mask & ~sum(1 << p for p, j in killer.items() if j == k) for k in range(n)]
        verdict = _verdict_from_values(space, values, mode, "discrete-construction")
    else:
        raise CapError(
            f"KKM enumeration needs {size} correspondences (cap {cap}); "
            "use falsify_kkm_random for a sampling search",
            size=size, cap=cap,
        )
    _assert_counterexample(space, topology, verdict)
    return verdict


def falsify_kkm_random(
    space: AbstractConvexSpace,
    topology: FiniteTopology,
    mode: str = "closed",
    samples: int = 1000,
    seed: int = 0,
) -> KkmVerdict:
    """Random search for a counterexample; ``holds=True`` proves nothing."""
    if samples < 1:
        raise InputError("falsify_kkm_random: samples must be at least 1")
    cands = _candidates(space, _topology_masks(space, topology, mode))
    rng = np.random.default_rng(seed)
    for k in range(samples):
        values = [c[rng.integers(len(c))] for c in cands]
        acc = space.full_mask
        for v in values:
            acc &= v
        if acc == 0 and _is_kkm_masks(space, values):
            verdict = _verdict_from_values(space, values, mode, "sampling", seed=seed, sample_index=k)
            _assert_counterexample(space, topology, verdict)
            return verdict
    return KkmVerdict(True, method="sampling", mode=mode, seed=seed)


def _value_map(f, keys, what):
    out = {}
    for key in keys:
        try:
            out[key] = to_extended(f[key])
        except KeyError:
            raise InputError(f"{what}: no value at {key!r}") from None
        except ValueError as exc:
            raise InputError(f"{what}: {exc}") from None
    return out


def level_set_masks(values: dict, points: tuple, mode: str) -> list[int]:
    """Distinct strict upper (``concave``) or lower (``convex``) level sets.

    Level sets only change at achieved values, so those plus one threshold
    beyond the extreme value (when finite) cover every threshold.
    """
    achieved = sorted(set(values.values()))
    out = set()
    full = (1 << len(points)) - 1
    for r in achieved:
        if mode == "concave":
            out.add(sum(1 << j for j, p in enumerate(points) if values[p] > r))
        else:
            out.add(sum(1 << j for j, p in enumerate(points) if values[p] < r))
    extreme = achieved[0] if mode == "concave" else achieved[-1]
    if not (isinstance(extreme, float) and math.isinf(extreme)):
        out.add(full)
    return sorted(out)


def check_quasi(space: AbstractConvexSpace, f: Mapping, mode: str = "concave") -> bool:
    """Every strict upper (concave) / lower (convex) level set is gamma-convex."""
    _require_seeds_in_points(space, "check_quasi")
    if mode not in ("concave", "convex"):
        raise InputError(f"mode must be 'concave' or 'convex', not {mode!r}")
    values = _value_map(f, space.points, "check_quasi")
    if not values:
        return True
    return all(_is_gamma_convex_mask(space, m) for m in level_set_masks(values, space.points, mode))


def check_glsc(
    space: AbstractConvexSpace,
    topology: FiniteTopology,
    f: Mapping,
    sense: str = "lower",
) -> bool:
    """Sublevel (``lower``) or superlevel (``upper``) correspondences
    ``z -> {y : f(z, y) <= r}`` are intersectionally closed for every ``r``.
    """
    if sense not in ("lower", "upper"):
        raise InputError(f"sense must be 'lower' or 'upper', not {sense!r}")
    if set(topology.points) != set(space.points):
        raise InputError("topology points must equal the space points")
    keys = [(z, y) for z in space.seeds for y in space.points]
    values = _value_map(f, keys, "check_glsc")
    for r in sorted(set(values.values())):
        masks = []
        for z in space.seeds:
            if sense == "lower":
                level = [y for y in space.points if values[(z, y)] <= r]
            else:
                level = [y for y in space.points if values[(z, y)] >= r]
            masks.append(topology.mask(level))
        if not classify_masks(topology, masks).intersectionally_closed:
            return False
    return True
