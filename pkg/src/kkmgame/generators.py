"""Seeded random generators feeding the property suites and the corpus command."""
from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path

import numpy as np

from .convex import AbstractConvexSpace
from .exact import POS_INF, NEG_INF
from .game import MultiobjectiveGame, WeightVector
from .io import game_from_dict
from .minimax import MinimaxInstance
from .topology import FiniteTopology, SetCorrespondence, iter_bits


@dataclass(frozen=True)
class CorpusBounds:
    max_players: int = 3
    max_strategies: int = 4
    max_criteria: int = 3
    payoff_low: int = -5
    payoff_high: int = 5
    min_strategies: int = 2


def random_game_dict(rng: np.random.Generator, bounds: CorpusBounds = CorpusBounds()) -> dict:
    n = int(rng.integers(1, bounds.max_players + 1))
    players = []
    for i in range(n):
        m = int(rng.integers(bounds.min_strategies, bounds.max_strategies + 1))
        k = int(rng.integers(1, bounds.max_criteria + 1))
        players.append({"id": f"p{i + 1}", "strategies": [f"s{j + 1}" for j in range(m)], "criteria": k})
    shape = tuple(len(p["strategies"]) for p in players)
    payoffs = {
        p["id"]: rng.integers(bounds.payoff_low, bounds.payoff_high + 1, size=shape + (p["criteria"],)).tolist()
        for p in players
    }
    return {"players": players, "payoffs": payoffs}


def generate_corpus(seed: int, count: int, bounds: CorpusBounds = CorpusBounds()) -> list[dict]:
    """Reproducible small random games (one document per game)."""
    if count < 1:
        raise ValueError("count must be at least 1")
    rng = np.random.default_rng(seed)
    return [random_game_dict(rng, bounds) for _ in range(count)]


def corpus_games(seed: int, count: int, bounds: CorpusBounds = CorpusBounds()) -> list[MultiobjectiveGame]:
    return [game_from_dict(d, source=f"corpus[{j}]") for j, d in enumerate(generate_corpus(seed, count, bounds))]


def write_corpus(docs: list[dict], out_dir) -> list[Path]:
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    paths = []
    width = max(4, len(str(len(docs) - 1)))
    for j, doc in enumerate(docs):
        path = out / f"game_{j:0{width}d}.json"
        path.write_text(json.dumps(doc, indent=1, sort_keys=True) + "\n")
        paths.append(path)
    return paths


def random_weights(rng: np.random.Generator, game: MultiobjectiveGame, strictly_positive: bool) -> WeightVector:
    """Small-integer weights; boundary draws contain at least one zero when k > 1."""
    vals = []
    for k in game.criteria:
        if strictly_positive:
            w = rng.integers(1, 5, size=k)
        else:
            w = rng.integers(0, 5, size=k)
            if k > 1:
                w[rng.integers(k)] = 0
            if not w.any():
                w[rng.integers(k)] = int(rng.integers(1, 5))
        vals.append(tuple(Fraction(int(c), int(rng.integers(1, 4))) for c in w))
    return WeightVector(tuple(vals))


def random_topology(rng: np.random.Generator, points) -> FiniteTopology:
    """Close a few random subsets under union and intersection."""
    points = tuple(points)
    n = len(points)
    full = (1 << n) - 1
    fam = {0, full}
    for _ in range(int(rng.integers(0, n + 2))):
        fam.add(int(rng.integers(0, full + 1)))
    changed = True
    while changed:
        changed = False
        for a in list(fam):
            for b in list(fam):
                for c in (a | b, a & b):
                    if c not in fam:
                        fam.add(c)
                        changed = True
    return FiniteTopology.from_masks(points, fam)


def random_correspondence(rng: np.random.Generator, domain, points) -> SetCorrespondence:
    points = tuple(points)
    full = (1 << len(points)) - 1
    return SetCorrespondence(
        tuple(domain),
        {z: frozenset(points[j] for j in iter_bits(int(rng.integers(0, full + 1)))) for z in domain},
    )


def random_space(rng: np.random.Generator, points, seeds=None) -> AbstractConvexSpace:
    """Random gamma table, biased towards structures with a shared point."""
    points = tuple(points)
    seeds = points if seeds is None else tuple(seeds)
    full = (1 << len(points)) - 1
    style = rng.integers(4)
    anchor = int(rng.integers(len(points)))
    table = {}
    for amask in range(1, 1 << len(seeds)):
        a = frozenset(seeds[j] for j in iter_bits(amask))
        v = int(rng.integers(1, full + 1))
        if style == 0:
            v |= 1 << anchor
        elif style == 1:
            v |= sum(1 << points.index(s) for s in a if s in points)
        table[a] = frozenset(points[j] for j in iter_bits(v))
    return AbstractConvexSpace(points, seeds, table)


_EXTENDED = [Fraction(-1), Fraction(0), Fraction(1), Fraction(1, 2), Fraction(-2)]


def random_instance(rng: np.random.Generator, max_points: int = 4, sup_level: bool = True) -> MinimaxInstance:
    """A random minimax instance on ``X = D`` with ``|X| <= max_points``.

    With ``sup_level`` the level is set to ``max_x g(x, x)``, the level at
    which the inf-sup inequality is claimed.
    """
    n = 1 if rng.random() < 0.05 else int(rng.integers(min(2, max_points), max_points + 1))
    pts = tuple(f"x{j}" for j in range(n))
    space = random_space(rng, pts)
    topo = random_topology(rng, pts) if rng.random() < 0.7 else FiniteTopology.discrete(pts)

    def value():
        r = rng.random()
        if r < 0.04:
            return POS_INF
        if r < 0.08:
            return NEG_INF
        return _EXTENDED[int(rng.integers(len(_EXTENDED)))]

    f = {(x, y): value() for x in pts for y in pts}
    mode = rng.integers(3)
    if mode == 0:
        g = dict(f)
    elif mode == 1:
        g = {(x, y): (f[(x, y)] if rng.random() < 0.5 else value()) for x in pts for y in pts}
    else:
        g = {(x, y): value() for x in pts for y in pts}
    if rng.random() < 0.5:
        for x in pts:
            f[(x, x)] = min(f[(x, x)], Fraction(0))
            g[(x, x)] = min(g[(x, x)], Fraction(0))
    if sup_level:
        level = max(g[(x, x)] for x in pts)
    else:
        level = _EXTENDED[int(rng.integers(len(_EXTENDED)))]
    return MinimaxInstance(space, topo, f, g, level)
