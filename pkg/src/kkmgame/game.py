"""Finite multiobjective games with exact vector payoffs.

Players minimise.  Payoff tensors are stored per player as object arrays of
:class:`~fractions.Fraction` with shape ``(|X_1|, ..., |X_n|, k_i)``; profile
order is row-major with player 0 most significant.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Optional, Sequence

import numpy as np

from .convex import AbstractConvexSpace, product_space
from .errors import InputError
from .exact import to_rational

# int64 is used for scaled payoffs only while products stay far from overflow
_INT64_SAFE = 1 << 40


@dataclass(frozen=True, eq=False)
class MultiobjectiveGame:
    players: tuple
    strategies: tuple
    criteria: tuple
    payoffs: tuple
    convexity: Optional[tuple] = None
    _cache: dict = field(default_factory=dict, init=False, repr=False, compare=False)

    def __post_init__(self):
        players = tuple(self.players)
        if not players:
            raise InputError("game: at least one player is required")
        if len(set(players)) != len(players):
            raise InputError(f"game players: duplicate ids {list(players)!r}")
        strategies = tuple(tuple(s) for s in self.strategies)
        criteria = tuple(int(k) for k in self.criteria)
        if len(strategies) != len(players) or len(criteria) != len(players):
            raise InputError("game: strategies/criteria must have one entry per player")
        for pid, strat, k in zip(players, strategies, criteria):
            if not strat:
                raise InputError(f"game player {pid!r}: empty strategy set")
            if len(set(strat)) != len(strat):
                raise InputError(f"game player {pid!r}: duplicate strategy labels")
            if k < 1:
                raise InputError(f"game player {pid!r}: criteria must be >= 1")
        shape = tuple(len(s) for s in strategies)
        tensors = []
        for pid, k, tensor in zip(players, criteria, self.payoffs):
            try:
                arr = np.asarray(tensor, dtype=object)
            except ValueError:
                raise InputError(f"game payoffs.{pid}: ragged payoff tensor") from None
            if arr.shape != shape + (k,):
                raise InputError(
                    f"game payoffs.{pid}: shape {arr.shape} does not match {shape + (k,)}"
                )
            try:
                arr = np.vectorize(to_rational, otypes=[object])(arr) if arr.size else arr
            except ValueError as exc:
                raise InputError(f"game payoffs.{pid}: {exc}") from None
            arr.setflags(write=False)
            tensors.append(arr)
        if len(tensors) != len(players):
            raise InputError("game: one payoff tensor per player is required")
        convexity = self.convexity
        if convexity is not None:
            convexity = tuple(convexity)
            if len(convexity) != len(players):
                raise InputError("game convexity: one entry per player is required")
            for pid, strat, sp in zip(players, strategies, convexity):
                if sp is not None and set(sp.points) != set(strat):
                    raise InputError(
                        f"game convexity.{pid}: space points must equal the player's strategies"
                    )
        object.__setattr__(self, "players", players)
        object.__setattr__(self, "strategies", strategies)
        object.__setattr__(self, "criteria", criteria)
        object.__setattr__(self, "payoffs", tuple(tensors))
        object.__setattr__(self, "convexity", convexity)

    # -- constructors -------------------------------------------------------
    @classmethod
    def from_function(cls, players, strategies, criteria, payoff: Callable, convexity=None):
        """Build from ``payoff(player_index, profile) -> vector``."""
        strategies = [tuple(s) for s in strategies]
        shape = tuple(len(s) for s in strategies)
        tensors = []
        for i, k in enumerate(criteria):
            arr = np.empty(shape + (k,), dtype=object)
            for idx in itertools.product(*(range(n) for n in shape)):
                prof = tuple(strategies[j][idx[j]] for j in range(len(shape)))
                vec = tuple(payoff(i, prof))
                if len(vec) != k:
                    raise InputError(f"payoff for player {i} has length {len(vec)}, expected {k}")
                arr[idx] = vec
            tensors.append(arr)
        return cls(tuple(players), tuple(strategies), tuple(criteria), tuple(tensors), convexity)

    @classmethod
    def zero(cls, strategies, criteria, players=None):
        players = players or tuple(f"p{i + 1}" for i in range(len(strategies)))
        return cls.from_function(players, strategies, criteria, lambda i, x: (0,) * criteria[i])

    # -- structure ----------------------------------------------------------
    @property
    def n_players(self) -> int:
        return len(self.players)

    @property
    def shape(self) -> tuple:
        return tuple(len(s) for s in self.strategies)

    @property
    def n_profiles(self) -> int:
        return math.prod(self.shape)

    def player_index(self, i) -> int:
        if isinstance(i, (int, np.integer)) and not isinstance(i, bool) and i not in self.players:
            if 0 <= i < self.n_players:
                return int(i)
            raise InputError(f"player index {i} out of range")
        try:
            return self.players.index(i)
        except ValueError:
            raise InputError(f"unknown player {i!r}") from None

    def profiles(self):
        """All profiles in lexicographic (row-major) order."""
        return itertools.product(*self.strategies)

    def profile_index(self, x) -> tuple:
        x = self.as_profile(x)
        return tuple(s.index(label) for s, label in zip(self.strategies, x))

    def as_profile(self, x) -> tuple:
        """Validate a profile given as a sequence or a ``{player: label}`` map."""
        if isinstance(x, dict):
            missing = [p for p in self.players if p not in x]
            if missing:
                raise InputError(f"profile: no strategy for players {missing!r}")
            x = tuple(x[p] for p in self.players)
        x = tuple(x)
        if len(x) != self.n_players:
            raise InputError(f"profile: expected {self.n_players} entries, got {len(x)}")
        for pid, strat, label in zip(self.players, self.strategies, x):
            if label not in strat:
                raise InputError(f"profile: {label!r} is not a strategy of player {pid!r}")
        return x

    def int_payoffs(self, i: int):
        """Player ``i``'s tensor scaled to integers by a positive constant.

        Returns ``(array, scale)``.  A positive per-player rescaling changes
        none of the equilibrium predicates, so the hot paths work on these.
        """
        key = ("int_payoffs", i)
        if key not in self._cache:
            arr = self.payoffs[i]
            scale = 1
            for v in arr.flat:
                scale = math.lcm(scale, v.denominator)
            ints = np.vectorize(lambda v: int(v * scale), otypes=[object])(arr) if arr.size else arr
            big = max((abs(v) for v in ints.flat), default=0)
            if big < _INT64_SAFE:
                ints = ints.astype(np.int64)
            self._cache[key] = (ints, scale)
        return self._cache[key]


@dataclass(frozen=True)
class WeightVector:
    """Per-player nonnegative, nonzero weight vectors over the criteria."""

    values: tuple

    def __post_init__(self):
        vals = []
        for i, w in enumerate(self.values):
            try:
                w = tuple(to_rational(c) for c in w)
            except ValueError as exc:
                raise InputError(f"weights[{i}]: {exc}") from None
            if not w:
                raise InputError(f"weights[{i}]: empty weight vector")
            if any(c < 0 for c in w):
                raise InputError(f"weights[{i}]: negative component")
            if all(c == 0 for c in w):
                raise InputError(f"weights[{i}]: weight vector must be nonzero")
            vals.append(w)
        object.__setattr__(self, "values", tuple(vals))

    def __getitem__(self, i):
        return self.values[i]

    def __len__(self):
        return len(self.values)

    @property
    def normalized(self) -> bool:
        return all(sum(w) == 1 for w in self.values)

    @property
    def strictly_positive(self) -> bool:
        return all(c > 0 for w in self.values for c in w)

    def check_for(self, game: MultiobjectiveGame) -> None:
        if len(self.values) != game.n_players:
            raise InputError(f"weights: {len(self.values)} vectors for {game.n_players} players")
        for pid, k, w in zip(game.players, game.criteria, self.values):
            if len(w) != k:
                raise InputError(f"weights.{pid}: length {len(w)} but player has {k} criteria")

    def scaled(self, factors: Sequence) -> "WeightVector":
        return WeightVector(tuple(tuple(Fraction(c) * f for c in w) for w, f in zip(self.values, factors)))


def payoff(game: MultiobjectiveGame, i, x) -> tuple:
    """Player ``i``'s criteria vector at profile ``x`` (a direct lookup)."""
    i = game.player_index(i)
    return tuple(game.payoffs[i][game.profile_index(x)])


def deviate(game: MultiobjectiveGame, x, i, y_i) -> tuple:
    """Profile ``x`` with player ``i``'s strategy replaced by ``y_i``."""
    x = game.as_profile(x)
    i = game.player_index(i)
    if y_i not in game.strategies[i]:
        raise InputError(f"deviate: {y_i!r} is not a strategy of player {game.players[i]!r}")
    return x[:i] + (y_i,) + x[i + 1:]


def in_orthant(v, strict: bool) -> bool:
    """Nonnegative orthant minus the origin, or its interior when ``strict``."""
    v = tuple(v)
    if not v:
        raise InputError("in_orthant: empty vector")
    if strict:
        return all(c > 0 for c in v)
    return all(c >= 0 for c in v) and any(c != 0 for c in v)


def product_strategy_space(game: MultiobjectiveGame, max_seeds=None) -> AbstractConvexSpace:
    """Product convexity structure on the profile set."""
    if game.convexity is None or any(sp is None for sp in game.convexity):
        raise InputError("game: every player needs a convexity structure")
    for pid, sp in zip(game.players, game.convexity):
        if set(sp.seeds) != set(sp.points):
            raise InputError(f"game convexity.{pid}: seeds must equal the strategy set")
    kwargs = {} if max_seeds is None else {"max_seeds": max_seeds}
    # reorder each factor's points to the player's strategy order
    factors = [
        AbstractConvexSpace(strat, strat, sp.gamma)
        for strat, sp in zip(game.strategies, game.convexity)
    ]
    return product_space(factors, **kwargs)
