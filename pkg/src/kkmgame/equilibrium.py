"""Scalarisation, weighted Nash / Pareto checks, enumeration and certification.

All predicates use minimisation semantics.  Vectorised paths work on the
per-player integer-scaled payoff tensors from
:meth:`MultiobjectiveGame.int_payoffs`; the single-profile definitional
checks read the exact rational payoffs directly.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Mapping, Optional, Union

import numpy as np

from .convex import DEFAULT_KKM_CAP
from .errors import CapError, HypothesisFailure, InputError, TheoremViolation
from .exact import integerize
from .game import MultiobjectiveGame, WeightVector, in_orthant, product_strategy_space
from .minimax import CoercivityWitness, MinimaxInstance, check_hypotheses, solve_conclusion_1
from .topology import FiniteTopology

DEFAULT_PROFILE_CAP = 1 << 20
DEFAULT_SWEEP_CAP = 1 << 24
_INT64_LIMIT = 1 << 62

WEIGHTED_NASH = "weighted_nash"
WEAK_PARETO = "weak_pareto"
PARETO = "pareto"


@dataclass(frozen=True)
class Verdict:
    """A boolean answer carrying the evidence that decided it."""

    ok: bool
    evidence: dict = field(default_factory=dict)

    def __bool__(self):
        return self.ok


@dataclass
class EquilibriumCertificate:
    profile: tuple
    kind: str
    weights: Optional[WeightVector] = None
    evidence: dict = field(default_factory=dict)
    verified: bool = False


def _check_profile_cap(game, cap):
    if game.n_profiles > cap:
        raise CapError(
            f"{game.n_profiles} profiles exceed the enumeration cap of {cap}",
            size=game.n_profiles, cap=cap,
        )


def _scalarized(game: MultiobjectiveGame, w: WeightVector):
    """Per-player ``W_i . T^i`` tensors, integer-scaled, with their scales."""
    w.check_for(game)
    key = ("scalarized", w)
    if key in game._cache:
        return game._cache[key]
    out = []
    for i in range(game.n_players):
        ints, t_scale = game.int_payoffs(i)
        w_ints, w_scale = integerize(w[i])
        bound = int(np.abs(ints).max()) * sum(w_ints) if ints.size else 0
        if ints.dtype == object or bound >= _INT64_LIMIT:
            s = np.tensordot(ints.astype(object), np.array(w_ints, dtype=object), axes=([-1], [0]))
        else:
            s = np.tensordot(ints, np.array(w_ints, dtype=np.int64), axes=([-1], [0]))
        out.append((s, t_scale * w_scale))
    game._cache[key] = out
    return out


def aggregate_f(game: MultiobjectiveGame, w: WeightVector, x, y) -> Fraction:
    """Sum over players of ``W_i . (T^i(x) - T^i(x_{-i}, y_i))``, exactly."""
    w.check_for(game)
    x = game.as_profile(x)
    y = game.as_profile(y)
    xi = game.profile_index(x)
    yi = game.profile_index(y)
    total = Fraction(0)
    for i in range(game.n_players):
        dev = xi[:i] + (yi[i],) + xi[i + 1:]
        here, there = game.payoffs[i][xi], game.payoffs[i][dev]
        total += sum(wc * (a - b) for wc, a, b in zip(w[i], here, there))
    return total


def aggregate_f_table(game: MultiobjectiveGame, w: WeightVector, cap: int = 1 << 12):
    """Dense ``f(x, y)`` over all profile pairs, as ``(table, scale)``.

    ``table[a, b] / scale`` is the value at the ``a``-th and ``b``-th profiles
    in row-major order.  Built term by term from the payoff tensors, without
    using the per-player decomposition of its maximum.
    """
    w.check_for(game)
    _check_profile_cap(game, cap)
    shape = game.shape
    idx = np.array(list(itertools.product(*(range(n) for n in shape))), dtype=np.int64)
    idx = idx.reshape(-1, len(shape))
    parts = []
    for i in range(game.n_players):
        ints, t_scale = game.int_payoffs(i)
        w_ints, w_scale = integerize(w[i])
        here = ints[tuple(idx[:, j] for j in range(len(shape)))]  # (P, k)
        gather = tuple(
            idx[:, None, j] if j != i else idx[None, :, j] for j in range(len(shape))
        )
        there = ints[gather]  # (P, P, k)
        diff = here[:, None, :] - there
        wv = np.array(w_ints, dtype=diff.dtype)
        parts.append((np.tensordot(diff, wv, axes=([-1], [0])), t_scale * w_scale))
    common = 1
    for _, s in parts:
        common = math.lcm(common, s)
    big = any(p.dtype == object for p, _ in parts)
    table = None
    for p, s in parts:
        factor = common // s
        if not big and factor * (int(np.abs(p).max()) if p.size else 0) * len(parts) >= _INT64_LIMIT:
            big = True
        term = p.astype(object) * factor if big else p * factor
        table = term if table is None else (table.astype(object) + term if big else table + term)
    return table, common


def weighted_nash_mask(game: MultiobjectiveGame, w: WeightVector) -> np.ndarray:
    """Boolean array over profiles: no player can lower ``W_i . T^i`` alone."""
    mask = np.ones(game.shape, dtype=bool)
    for i, (s, _) in enumerate(_scalarized(game, w)):
        best = s.min(axis=i, keepdims=True)
        mask &= np.asarray(s <= best, dtype=bool)
    return mask


def is_weighted_nash(game: MultiobjectiveGame, w: WeightVector, x_hat) -> Verdict:
    """Check every unilateral deviation; evidence is the worst regret."""
    x_hat = game.as_profile(x_hat)
    xi = game.profile_index(x_hat)
    worst = None
    for i, (s, scale) in enumerate(_scalarized(game, w)):
        here = s[xi]
        for b, label in enumerate(game.strategies[i]):
            regret = Fraction(int(here - s[xi[:i] + (b,) + xi[i + 1:]]), scale)
            if worst is None or regret > worst[0]:
                worst = (regret, game.players[i], label)
    regret, player, label = worst
    return Verdict(regret <= 0, {"max_regret": regret, "player": player, "deviation": label})


def is_pareto_efficient_strategy(game: MultiobjectiveGame, x_hat, i, weak: bool = False) -> Verdict:
    """No deviation of player ``i`` whose payoff improvement lies in the
    orthant (nonzero, or strictly positive when ``weak``)."""
    x_hat = game.as_profile(x_hat)
    i = game.player_index(i)
    here = game.payoffs[i][game.profile_index(x_hat)]
    for label in game.strategies[i]:
        dev = x_hat[:i] + (label,) + x_hat[i + 1:]
        diff = tuple(a - b for a, b in zip(here, game.payoffs[i][game.profile_index(dev)]))
        if in_orthant(diff, strict=weak):
            return Verdict(False, {"player": game.players[i], "deviation": label, "improvement": diff})
    return Verdict(True, {"player": game.players[i], "deviations_checked": len(game.strategies[i])})


def is_pareto_equilibrium(game: MultiobjectiveGame, x_hat, weak: bool = False) -> Verdict:
    checked = 0
    for i in range(game.n_players):
        v = is_pareto_efficient_strategy(game, x_hat, i, weak)
        if not v:
            return v
        checked += v.evidence["deviations_checked"]
    return Verdict(True, {"dominating_deviation": None, "deviations_checked": checked})


def pareto_mask(game: MultiobjectiveGame, weak: bool = False) -> np.ndarray:
    """Vectorised Pareto (or weak Pareto) test over every profile."""
    mask = np.ones(game.shape, dtype=bool)
    for i in range(game.n_players):
        ints, _ = game.int_payoffs(i)
        a = np.moveaxis(ints, i, -2)  # (..., n_i, k)
        diff = a[..., :, None, :] - a[..., None, :, :]  # current x deviation
        if weak:
            dominated = np.all(diff > 0, axis=-1)
        else:
            dominated = np.all(diff >= 0, axis=-1) & np.any(diff != 0, axis=-1)
        efficient = ~np.any(np.asarray(dominated, dtype=bool), axis=-1)
        mask &= np.moveaxis(efficient, -1, i)
    return mask


def _profiles_in(game, mask) -> list:
    return [
        tuple(game.strategies[j][k] for j, k in enumerate(idx))
        for idx in zip(*np.nonzero(mask))
    ]


def enumerate_weighted_nash(
    game: MultiobjectiveGame, w: WeightVector, cap: int = DEFAULT_PROFILE_CAP
) -> list[EquilibriumCertificate]:
    """Every weighted Nash profile, lexicographic; may well be empty."""
    _check_profile_cap(game, cap)
    out = []
    for x in _profiles_in(game, weighted_nash_mask(game, w)):
        v = is_weighted_nash(game, w, x)
        out.append(EquilibriumCertificate(x, WEIGHTED_NASH, w, dict(v.evidence), v.ok))
    return out


def enumerate_pareto(
    game: MultiobjectiveGame, weak: bool = False, cap: int = DEFAULT_PROFILE_CAP
) -> list[EquilibriumCertificate]:
    _check_profile_cap(game, cap)
    kind = WEAK_PARETO if weak else PARETO
    out = []
    for x in _profiles_in(game, pareto_mask(game, weak)):
        v = is_pareto_equilibrium(game, x, weak)
        out.append(EquilibriumCertificate(x, kind, None, dict(v.evidence), v.ok))
    return out


def _resolve_g(g, profiles, f):
    if g is None or g == "f":
        return dict(f)
    if g == "zero":
        return {key: 0 for key in f}
    if callable(g):
        return {(x, y): g(x, y) for x in profiles for y in profiles}
    if isinstance(g, Mapping):
        return g
    raise InputError(f"auxiliary function: expected 'f', 'zero', a mapping or a callable, got {g!r}")


# minimax-instance conditions, named by the game-level hypothesis they encode
_GAME_CONDITION = {
    "closed_levels": "level_sets_closed",
    "diagonal": "auxiliary_function",
    "hull_inclusion": "auxiliary_function",
    "coercive": "coercive",
    "kkm": "kkm_principle",
}


def certify_via_minimax(
    game: MultiobjectiveGame,
    w: WeightVector,
    g: Union[str, Mapping, Callable, None] = "f",
    witness: Optional[CoercivityWitness] = None,
    topology: Optional[FiniteTopology] = None,
    kkm_cap: int = DEFAULT_KKM_CAP,
) -> EquilibriumCertificate:
    """Find a weighted Nash equilibrium through the minimax route.

    Builds ``f = aggregate_f`` on the product convexity structure at level 0,
    checks the hypotheses (``g`` is caller-supplied; ``"f"`` and ``"zero"``
    are presets), scans for the conclusion point and re-verifies it directly.
    The product topology defaults to the discrete one.
    """
    w.check_for(game)
    space = product_strategy_space(game)
    profiles = space.points
    if topology is None:
        topology = FiniteTopology.discrete(profiles)
    f = {(x, y): aggregate_f(game, w, x, y) for x in profiles for y in profiles}
    inst = MinimaxInstance(space, topology, f, _resolve_g(g, profiles, f), 0, witness)
    report = check_hypotheses(inst, kkm_cap=kkm_cap)
    if not report.passed:
        failed = [_GAME_CONDITION[c] for c in report.failed_conditions]
        raise HypothesisFailure(
            f"existence hypotheses fail: {', '.join(dict.fromkeys(failed))}",
            report=report, condition=failed[0],
        )
    x_hat = solve_conclusion_1(inst, report)
    check = is_weighted_nash(game, w, x_hat)
    if not check:
        raise TheoremViolation(f"minimax point {x_hat!r} is not a weighted Nash equilibrium")
    evidence = dict(check.evidence)
    evidence.update(
        closed_mode=report.closed_mode,
        coercivity_variant=report.coercivity_variant,
        in_k_set=x_hat in inst.k_set,
    )
    return EquilibriumCertificate(x_hat, WEIGHTED_NASH, w, evidence, True)


def _classify(game, x, w: WeightVector) -> EquilibriumCertificate:
    weak = not w.strictly_positive
    v = is_pareto_equilibrium(game, x, weak=weak)
    kind = WEAK_PARETO if weak else PARETO
    if not v:
        raise TheoremViolation(f"weighted Nash profile {x!r} fails the {kind} check: {v.evidence}")
    return EquilibriumCertificate(x, kind, w, dict(v.evidence), True)


def pareto_via_weights(
    game: MultiobjectiveGame,
    w: WeightVector,
    g: Union[str, Mapping, Callable, None] = "f",
    witness: Optional[CoercivityWitness] = None,
    topology: Optional[FiniteTopology] = None,
    kkm_cap: int = DEFAULT_KKM_CAP,
) -> EquilibriumCertificate:
    """Certified weighted Nash point, reported as Pareto for strictly
    positive weights and weak Pareto otherwise (re-verified either way)."""
    nash = certify_via_minimax(game, w, g, witness, topology, kkm_cap)
    cert = _classify(game, nash.profile, w)
    cert.evidence["weighted_nash"] = nash.evidence
    return cert


def normalize_weights(w: WeightVector) -> WeightVector:
    return WeightVector(tuple(tuple(c / sum(wi) for c in wi) for wi in w.values))


def weight_grid(k: int, resolution: int) -> list[tuple]:
    """Weights with components in ``{0, 1/r, ..., 1}`` summing to one."""
    if resolution < 1:
        raise InputError("resolution must be a positive integer")
    out = []
    for cuts in itertools.combinations_with_replacement(range(resolution + 1), k - 1):
        bounds = (0,) + cuts + (resolution,)
        out.append(tuple(Fraction(bounds[j + 1] - bounds[j], resolution) for j in range(k)))
    return sorted(out, reverse=True)


@dataclass
class SweepReport:
    """Weighted Nash hits per grid weight plus the de-duplicated profiles.

    ``profiles`` maps each profile found under some weight to the strongest
    kind certified for it; it is a subset of the weak Pareto set, not the
    whole Pareto set.
    """

    by_weight: dict
    profiles: dict


def weight_sweep(
    game: MultiobjectiveGame, resolution: int, cap: int = DEFAULT_SWEEP_CAP
) -> SweepReport:
    grids = [weight_grid(k, resolution) for k in game.criteria]
    combos = math.prod(len(gr) for gr in grids)
    if combos * game.n_profiles > cap:
        raise CapError(
            f"sweep of {combos} weights x {game.n_profiles} profiles exceeds cap {cap}",
            size=combos * game.n_profiles, cap=cap,
        )
    # best responses depend only on the player's own weight, so cache per player
    best_resp = []
    for i, grid in enumerate(grids):
        masks = []
        ints, _ = game.int_payoffs(i)
        for wi in grid:
            w_ints, _ = integerize(wi)
            s = np.tensordot(ints, np.array(w_ints, dtype=ints.dtype), axes=([-1], [0]))
            masks.append(np.asarray(s <= s.min(axis=i, keepdims=True), dtype=bool))
        best_resp.append(masks)
    strict_ok = pareto_mask(game, weak=False)
    weak_ok = pareto_mask(game, weak=True)
    by_weight, profiles = {}, {}
    for choice in itertools.product(*(range(len(gr)) for gr in grids)):
        w = WeightVector(tuple(grids[i][c] for i, c in enumerate(choice)))
        mask = best_resp[0][choice[0]].copy()
        for i in range(1, game.n_players):
            mask &= best_resp[i][choice[i]]
        kind = PARETO if w.strictly_positive else WEAK_PARETO
        certs = []
        for idx in zip(*np.nonzero(mask)):
            x = tuple(game.strategies[j][k] for j, k in enumerate(idx))
            verified = bool(strict_ok[idx] if kind == PARETO else weak_ok[idx])
            if not verified:
                raise TheoremViolation(f"sweep hit {x!r} under {w} is not {kind}")
            certs.append(EquilibriumCertificate(x, kind, w, {"grid_resolution": resolution}, True))
            if profiles.get(x) != PARETO:
                profiles[x] = kind
        by_weight[w] = certs
    ordered = dict(sorted(profiles.items(), key=lambda kv: game.profile_index(kv[0])))
    return SweepReport(by_weight, ordered)
