"""Brute-force reference implementations written straight from the
definitions, with plain sets and loops.  They share no code with the
package beyond its data classes."""
from __future__ import annotations

import itertools
from fractions import Fraction


def subsets(items, nonempty=False):
    items = list(items)
    start = 1 if nonempty else 0
    for r in range(start, len(items) + 1):
        for c in itertools.combinations(items, r):
            yield frozenset(c)


# -- topology ------------------------------------------------------------------
def opens_of(topology):
    return [frozenset(o) for o in topology.opens]


def closed_sets(topology):
    X = frozenset(topology.points)
    return [X - o for o in opens_of(topology)]


def closure(topology, s):
    s = frozenset(s)
    out = frozenset(topology.points)
    for c in closed_sets(topology):
        if s <= c:
            out &= c
    return out


def interior(topology, s):
    s = frozenset(s)
    out = frozenset()
    for o in opens_of(topology):
        if o <= s:
            out |= o
    return out


def classify(topology, values):
    """The four set identities, given a list of value sets."""
    X = frozenset(topology.points)
    inter_cl = X
    inter = X
    union = frozenset()
    union_int = frozenset()
    for v in values:
        inter_cl &= closure(topology, v)
        inter &= v
        union |= v
        union_int |= interior(topology, v)
    return {
        "intersectionally_closed": inter_cl == closure(topology, inter),
        "transfer_closed": inter_cl == inter,
        "unionly_open": interior(topology, union) == union_int,
        "transfer_open": union == union_int,
    }


# -- abstract convex spaces ------------------------------------------------------
def hull(space, dprime):
    out = frozenset()
    for a in subsets(dprime, nonempty=True):
        out |= space.gamma[a]
    return out


def is_kkm(space, values: dict):
    for a in subsets(space.seeds, nonempty=True):
        cover = frozenset()
        for y in a:
            cover |= values[y]
        if not space.gamma[a] <= cover:
            return False
    return True


def has_fip(values: dict, X):
    for a in subsets(values, nonempty=True):
        acc = frozenset(X)
        for z in a:
            acc &= values[z]
        if not acc:
            return False
    return True


def kkm_principle(space, topology, mode="closed"):
    """Enumerate every closed- (open-) valued correspondence; no pruning."""
    allowed = closed_sets(topology) if mode == "closed" else opens_of(topology)
    seeds = list(space.seeds)
    for choice in itertools.product(allowed, repeat=len(seeds)):
        values = dict(zip(seeds, choice))
        if is_kkm(space, values) and not has_fip(values, space.points):
            return False, values
    return True, None


def product_gamma(factors, a):
    """Product of factor values at the coordinate projections of ``a``."""
    parts = []
    for i, fac in enumerate(factors):
        proj = frozenset(z[i] for z in a)
        parts.append(sorted(fac.gamma[proj], key=str))
    return frozenset(itertools.product(*parts))


# -- games -----------------------------------------------------------------------
def dot(w, v):
    return sum((Fraction(a) * Fraction(b) for a, b in zip(w, v)), Fraction(0))


def vec(game, i, x):
    return tuple(Fraction(c) for c in game.payoffs[i][tuple(s.index(a) for s, a in zip(game.strategies, x))])


def swap(x, i, yi):
    x = list(x)
    x[i] = yi
    return tuple(x)


def weighted_nash(game, w, x):
    for i in range(game.n_players):
        here = dot(w[i], vec(game, i, x))
        for yi in game.strategies[i]:
            if here > dot(w[i], vec(game, i, swap(x, i, yi))):
                return False
    return True


def aggregate_f(game, w, x, y):
    total = Fraction(0)
    for i in range(game.n_players):
        total += dot(w[i], vec(game, i, x)) - dot(w[i], vec(game, i, swap(x, i, y[i])))
    return total


def pareto(game, x, weak):
    for i in range(game.n_players):
        here = vec(game, i, x)
        for yi in game.strategies[i]:
            diff = [a - b for a, b in zip(here, vec(game, i, swap(x, i, yi)))]
            if weak:
                dominated = all(d > 0 for d in diff)
            else:
                dominated = all(d >= 0 for d in diff) and any(d != 0 for d in diff)
            if dominated:
                return False
    return True


def all_profiles(game):
    return list(itertools.product(*game.strategies))
