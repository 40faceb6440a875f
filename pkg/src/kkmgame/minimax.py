"""Minimax-inequality instances on finite abstract convex spaces.

An instance packages a space with ``seeds == points``, a topology, two
extended-rational functions ``f, g`` on ``X x X`` and a level ``gamma``.
:func:`check_hypotheses` evaluates the four hypotheses of the minimax
inequality with replayable evidence; :func:`solve_conclusion_1` and
:func:`verify_conclusion_2` evaluate its two conclusions by exhaustive scan.
"""
from __future__ import annotations

from dataclasses import dataclass, field, replace
from typing import Mapping, Optional

from .convex import (
    DEFAULT_KKM_CAP,
    AbstractConvexSpace,
    _is_gamma_convex_mask,
    check_glsc,
    check_kkm_principle,
    check_quasi,
)
from .errors import CapError, InputError, PreconditionError, TheoremViolation
from .exact import ExtRational, to_extended
from .topology import FiniteTopology, classify_masks, iter_bits


@dataclass(frozen=True)
class BranchEntry:
    """One ``(N, X', L_N)`` triple of the second coercivity variant."""

    n_set: frozenset
    x_prime: frozenset
    l_set: frozenset


@dataclass(frozen=True)
class CoercivityWitness:
    k_set: frozenset
    variant_a: Optional[frozenset] = None
    variant_b: Optional[tuple] = None

    def __post_init__(self):
        object.__setattr__(self, "k_set", frozenset(self.k_set))
        if self.variant_a is None and self.variant_b is None:
            raise InputError("witness: supply variant_a, variant_b or both")
        if self.variant_a is not None:
            object.__setattr__(self, "variant_a", frozenset(self.variant_a))
        if self.variant_b is not None:
            entries = tuple(
                e if isinstance(e, BranchEntry)
                else BranchEntry(frozenset(e["n_set"]), frozenset(e["x_prime"]), frozenset(e["l_set"]))
                for e in self.variant_b
            )
            object.__setattr__(self, "variant_b", entries)


@dataclass(frozen=True, eq=False)
class MinimaxInstance:
    space: AbstractConvexSpace
    topology: FiniteTopology
    f: Mapping
    g: Mapping
    gamma_level: ExtRational
    witness: Optional[CoercivityWitness] = None

    def __post_init__(self):
        space = self.space
        if set(space.seeds) != set(space.points):
            raise InputError("minimax instance: the space must have seeds equal to points")
        if set(self.topology.points) != set(space.points):
            raise InputError("minimax instance: topology points must equal the space points")
        # re-index the topology in the space's point order so masks agree
        topo = FiniteTopology(space.points, self.topology.opens)
        object.__setattr__(self, "topology", topo)
        for name in ("f", "g"):
            table = getattr(self, name)
            out = {}
            for x in space.points:
                for y in space.points:
                    try:
                        out[(x, y)] = to_extended(table[(x, y)])
                    except KeyError:
                        raise InputError(f"minimax instance: {name} has no value at {(x, y)!r}") from None
                    except ValueError as exc:
                        raise InputError(f"minimax instance: {name}{(x, y)!r}: {exc}") from None
            object.__setattr__(self, name, out)
        try:
            object.__setattr__(self, "gamma_level", to_extended(self.gamma_level))
        except ValueError as exc:
            raise InputError(f"minimax instance: gamma_level: {exc}") from None
        w = self.witness
        if w is not None:
            everything = set(space.points)
            sets = [w.k_set] + ([w.variant_a] if w.variant_a is not None else [])
            for e in w.variant_b or ():
                sets += [e.n_set, e.x_prime, e.l_set]
            for s in sets:
                if not s <= everything:
                    raise InputError(f"minimax witness: unknown points {sorted(map(str, s - everything))!r}")

    @classmethod
    def from_matrices(cls, space, topology, f_rows, g_rows, gamma_level, witness=None):
        """Dense ``f``/``g`` matrices indexed by the space's point order."""
        pts = space.points
        n = len(pts)
        for name, rows in (("f", f_rows), ("g", g_rows)):
            if len(rows) != n or any(len(r) != n for r in rows):
                raise InputError(f"minimax instance: {name} must be a {n}x{n} matrix")
        f = {(pts[a], pts[b]): f_rows[a][b] for a in range(n) for b in range(n)}
        g = {(pts[a], pts[b]): g_rows[a][b] for a in range(n) for b in range(n)}
        return cls(space, topology, f, g, gamma_level, witness)

    @property
    def k_set(self) -> frozenset:
        return frozenset(self.space.points) if self.witness is None else self.witness.k_set


@dataclass
class HypothesisReport:
    """Per-condition verdicts with the evidence behind every failure."""

    conditions: dict
    evidence: dict = field(default_factory=dict)
    closed_mode: Optional[str] = None
    coercivity_variant: Optional[str] = None
    kkm_verified: Optional[bool] = None

    @property
    def passed(self) -> bool:
        return all(self.conditions.values()) and self.kkm_verified is True

    @property
    def failed_conditions(self) -> list:
        out = [k for k, v in self.conditions.items() if not v]
        if self.kkm_verified is not True:
            out.append("kkm")
        return out


def _level_masks(inst: MinimaxInstance) -> list[int]:
    """Masks of ``F(y) = {x : f(x, y) <= gamma}`` in point order."""
    pts = inst.space.points
    return [
        sum(1 << a for a, x in enumerate(pts) if inst.f[(x, y)] <= inst.gamma_level)
        for y in pts
    ]


def _kkm_status(inst, cap):
    try:
        return check_kkm_principle(inst.space, inst.topology, "closed", cap=cap).holds
    except CapError:
        return None


def _check_coercivity(inst: MinimaxInstance, closures: list[int], report: HypothesisReport) -> bool:
    space = inst.space
    labels = space.point_labels
    w = inst.witness
    if w is None:
        # every finite set is compact: K = X absorbs anything
        report.coercivity_variant = "default"
        report.evidence["coercive"] = {"k_set": labels(space.full_mask), "m_set": labels(1)}
        return True
    kmask = space.point_mask(w.k_set)
    if kmask == 0:
        report.evidence["coercive"] = {"reason": "K is empty"}
        return False
    ok_a = ok_b = False
    if w.variant_a is not None:
        mmask = space.point_mask(w.variant_a)
        inter = space.full_mask
        for j in iter_bits(mmask):
            inter &= closures[j]
        ok_a = mmask != 0 and inter & ~kmask == 0
        if not ok_a:
            report.evidence["coercive_a"] = {
                "m_set": w.variant_a, "closure_intersection": labels(inter), "k_set": w.k_set,
            }
    if w.variant_b is not None:
        # for each nonempty N some entry needs N inside X'; taking N = X forces
        # a valid entry with X' = X, which then serves every N
        covers_all = False
        bad = []
        for e in w.variant_b:
            xp = space.point_mask(e.x_prime)
            lm = space.point_mask(e.l_set)
            nm = space.point_mask(e.n_set)
            inter = lm
            for j in iter_bits(xp):
                inter &= closures[j]
            valid = (
                xp != 0 and lm != 0 and nm != 0 and nm & ~xp == 0
                and space.hull_mask(space.points_to_seed_mask(xp)) & ~lm == 0
                and inter != 0 and inter & ~kmask == 0
            )
            if not valid:
                bad.append(e)
            elif xp == space.full_mask:
                covers_all = True
        ok_b = not bad and covers_all
        if not ok_b:
            report.evidence["coercive_b"] = {"invalid_entries": bad, "covers_every_finite_set": covers_all}
    report.coercivity_variant = "a" if ok_a else "b" if ok_b else None
    return ok_a or ok_b


def check_hypotheses(inst: MinimaxInstance, kkm_cap: int = DEFAULT_KKM_CAP) -> HypothesisReport:
    """Evaluate the diagonal bound, closedness of the level correspondence,
    the hull inclusion and coercivity, plus the partial KKM principle.
    """
    space, topo, gam = inst.space, inst.topology, inst.gamma_level
    pts = space.points
    labels = space.point_labels
    report = HypothesisReport(conditions={})

    bad_diag = [x for x in pts if not inst.g[(x, x)] <= gam]
    report.conditions["diagonal"] = not bad_diag
    if bad_diag:
        report.evidence["diagonal"] = {"x": bad_diag[0], "g_xx": inst.g[(bad_diag[0], bad_diag[0])]}

    levels = _level_masks(inst)
    kind = classify_masks(topo, levels)
    if kind.transfer_closed:
        report.closed_mode = "transfer"
    elif kind.intersectionally_closed:
        report.closed_mode = "intersectionally"
    report.conditions["closed_levels"] = report.closed_mode is not None
    if report.closed_mode is None:
        inter_cl, inter = space.full_mask, space.full_mask
        for m in levels:
            inter_cl &= topo.closure_mask(m)
            inter &= m
        report.evidence["closed_levels"] = {
            "intersection_of_closures": labels(inter_cl),
            "closure_of_intersection": labels(topo.closure_mask(inter)),
        }

    hull_ok = True
    for x in pts:
        upper = sum(1 << b for b, y in enumerate(pts) if inst.f[(x, y)] > gam)
        if not upper:
            continue
        hull = space.hull_mask(space.points_to_seed_mask(upper))
        g_upper = sum(1 << b for b, y in enumerate(pts) if inst.g[(x, y)] > gam)
        if hull & ~g_upper:
            hull_ok = False
            report.evidence["hull_inclusion"] = {"x": x, "outside": labels(hull & ~g_upper)}
            break
    report.conditions["hull_inclusion"] = hull_ok

    closures = [topo.closure_mask(m) for m in levels]
    report.conditions["coercive"] = _check_coercivity(inst, closures, report)
    report.kkm_verified = _kkm_status(inst, kkm_cap)
    return report


def solve_conclusion_1(inst: MinimaxInstance, report: Optional[HypothesisReport] = None):
    """First point ``x0`` (point order) with ``f(x0, y) <= gamma`` for all ``y``.

    Under transfer closedness the scan is restricted to the coercivity set K.
    """
    if report is None:
        report = check_hypotheses(inst)
    if not report.passed:
        raise PreconditionError(f"hypotheses failed: {report.failed_conditions}")
    gam = inst.gamma_level
    candidates = inst.space.points
    if report.closed_mode == "transfer":
        k = inst.k_set
        candidates = [x for x in candidates if x in k]
    for x in candidates:
        if all(inst.f[(x, y)] <= gam for y in inst.space.points):
            return x
    raise TheoremViolation("hypotheses verified but no point satisfies f(x0, .) <= gamma")


@dataclass(frozen=True)
class MinimaxCertificate:
    """``inf_x sup_y f`` against ``sup_x g(x, x)`` with their attaining points."""

    holds: bool
    inf_sup_f: ExtRational
    sup_diag_g: ExtRational
    argmin_x: object
    argmax_y: object
    argmax_diag: object
    hypotheses_passed: bool


def verify_conclusion_2(inst: MinimaxInstance, kkm_cap: int = DEFAULT_KKM_CAP) -> MinimaxCertificate:
    """Compare both sides exactly.  ``hypotheses_passed`` re-checks the
    hypotheses at ``gamma = sup g(x, x)``, the level the inequality needs.
    """
    pts = inst.space.points
    best = None
    for x in pts:
        y_star = pts[0]
        for y in pts[1:]:
            if inst.f[(x, y)] > inst.f[(x, y_star)]:
                y_star = y
        value = inst.f[(x, y_star)]
        if best is None or value < best[0]:
            best = (value, x, y_star)
    d_star = pts[0]
    for x in pts[1:]:
        if inst.g[(x, x)] > inst.g[(d_star, d_star)]:
            d_star = x
    lhs, rhs = best[0], inst.g[(d_star, d_star)]
    at_sup = replace(inst, gamma_level=rhs)
    hyp = check_hypotheses(at_sup, kkm_cap=kkm_cap).passed
    return MinimaxCertificate(lhs <= rhs, lhs, rhs, best[1], best[2], d_star, hyp)


def _majorant_and_diagonal(inst, report, key):
    pts = inst.space.points
    for x in pts:
        for y in pts:
            if not inst.f[(x, y)] <= inst.g[(x, y)]:
                report.conditions[key] = False
                report.evidence[key] = {"x": x, "y": y, "f": inst.f[(x, y)], "g": inst.g[(x, y)]}
                return
    bad = [x for x in pts if not inst.g[(x, x)] <= inst.gamma_level]
    report.conditions[key] = not bad
    if bad:
        report.evidence[key] = {"x": bad[0], "g_xx": inst.g[(bad[0], bad[0])]}


def check_corollary_1(inst: MinimaxInstance, kkm_cap: int = DEFAULT_KKM_CAP) -> HypothesisReport:
    """``f <= g`` with bounded diagonal; strict upper sets of ``f(., y)`` unionly
    open; strict upper sets of ``g(x, .)`` gamma-convex."""
    space, topo, gam = inst.space, inst.topology, inst.gamma_level
    pts = space.points
    report = HypothesisReport(conditions={})
    _majorant_and_diagonal(inst, report, "majorant_diagonal")
    uppers = [sum(1 << a for a, x in enumerate(pts) if inst.f[(x, y)] > gam) for y in pts]
    report.conditions["unionly_open_levels"] = classify_masks(topo, uppers).unionly_open
    convex = True
    for x in pts:
        g_upper = sum(1 << b for b, y in enumerate(pts) if inst.g[(x, y)] > gam)
        if not _is_gamma_convex_mask(space, g_upper):
            convex = False
            report.evidence["convex_upper_levels"] = {"x": x, "set": space.point_labels(g_upper)}
            break
    report.conditions["convex_upper_levels"] = convex
    report.kkm_verified = _kkm_status(inst, kkm_cap)
    return report


def check_corollary_2(inst: MinimaxInstance, kkm_cap: int = DEFAULT_KKM_CAP) -> HypothesisReport:
    """``f <= g`` with bounded diagonal; ``f(., y)`` generally lower
    semicontinuous; ``f(x, .)`` quasiconcave."""
    space, topo = inst.space, inst.topology
    pts = space.points
    report = HypothesisReport(conditions={})
    _majorant_and_diagonal(inst, report, "majorant_diagonal")
    transposed = {(y, x): inst.f[(x, y)] for x in pts for y in pts}
    report.conditions["glsc"] = check_glsc(space, topo, transposed, "lower")
    quasi = True
    for x in pts:
        if not check_quasi(space, {y: inst.f[(x, y)] for y in pts}, "concave"):
            quasi = False
            report.evidence["quasiconcave"] = {"x": x}
            break
    report.conditions["quasiconcave"] = quasi
    report.kkm_verified = _kkm_status(inst, kkm_cap)
    return report
