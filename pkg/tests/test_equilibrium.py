from fractions import Fraction

import numpy as np
import pytest

import oracles
from kkmgame import (
    AbstractConvexSpace,
    CapError,
    HypothesisFailure,
    InputError,
    MultiobjectiveGame,
    WeightVector,
    aggregate_f,
    certify_via_minimax,
    enumerate_pareto,
    enumerate_weighted_nash,
    is_pareto_efficient_strategy,
    is_pareto_equilibrium,
    is_weighted_nash,
    normalize_weights,
    pareto_via_weights,
    weight_grid,
    weight_sweep,
)
from kkmgame.equilibrium import aggregate_f_table, pareto_mask, weighted_nash_mask
from kkmgame.generators import corpus_games, random_weights


def single(vectors, convexity=None):
    strat = tuple(vectors)
    k = len(next(iter(vectors.values())))
    return MultiobjectiveGame.from_function(("p",), (strat,), (k,), lambda i, x: vectors[x[0]], convexity)


def with_convexity(game, spaces):
    return MultiobjectiveGame(game.players, game.strategies, game.criteria, game.payoffs, tuple(spaces))


# -- aggregate function ------------------------------------------------------------
def test_aggregate_examples():
    g = MultiobjectiveGame.from_function(
        ("p", "q"), (("a", "b"), ("s", "t")), (1, 1),
        lambda i, x: ((0,) if x[0] == "a" else (1,)) if i == 0 else (0,),
    )
    w = WeightVector(((1,), (1,)))
    assert aggregate_f(g, w, ("b", "s"), ("a", "t")) == 1
    zero = MultiobjectiveGame.zero((("a", "b"),), (2,))
    assert aggregate_f(zero, WeightVector(((1, 1),)), ("a",), ("b",)) == 0


def test_aggregate_matches_oracle_and_diagonal():
    rng = np.random.default_rng(0)
    for game in corpus_games(1, 40):
        w = random_weights(rng, game, strictly_positive=bool(rng.integers(2)))
        profs = oracles.all_profiles(game)
        table, scale = aggregate_f_table(game, w)
        for a, x in enumerate(profs[:6]):
            assert aggregate_f(game, w, x, x) == 0
            for b, y in enumerate(profs):
                v = aggregate_f(game, w, x, y)
                assert v == oracles.aggregate_f(game, w, x, y)
                assert Fraction(int(table[a, b])) == v * scale


# -- weighted Nash -------------------------------------------------------------------
def test_weighted_nash_examples():
    zero = MultiobjectiveGame.zero((("a", "b"), ("c",)), (2, 1))
    assert all(is_weighted_nash(zero, WeightVector(((1, 0), (3,))), x) for x in zero.profiles())
    g = single({"a": (1,), "b": (0,)})
    w = WeightVector(((1,),))
    assert is_weighted_nash(g, w, ("b",))
    v = is_weighted_nash(g, w, ("a",))
    assert not v and v.evidence["deviation"] == "b" and v.evidence["max_regret"] == 1


def test_weighted_nash_matches_oracle():
    rng = np.random.default_rng(1)
    for game in corpus_games(2, 60):
        w = random_weights(rng, game, strictly_positive=bool(rng.integers(2)))
        mask = weighted_nash_mask(game, w)
        for x in game.profiles():
            lit = oracles.weighted_nash(game, w, x)
            assert bool(is_weighted_nash(game, w, x)) == lit
            assert bool(mask[game.profile_index(x)]) == lit
        listed = [c.profile for c in enumerate_weighted_nash(game, w)]
        assert listed == [x for x in oracles.all_profiles(game) if oracles.weighted_nash(game, w, x)]


def test_enumerate_weighted_nash_examples():
    zero = MultiobjectiveGame.zero((("a", "b"), ("c", "d")), (1, 1))
    assert len(enumerate_weighted_nash(zero, WeightVector(((1,), (1,))))) == 4
    g = single({"a": (1,), "b": (0,)})
    assert [c.profile for c in enumerate_weighted_nash(g, WeightVector(((1,),)))] == [("b",)]


def test_profile_cap():
    g = MultiobjectiveGame.zero((("a", "b"),) * 3, (1, 1, 1))
    with pytest.raises(CapError):
        enumerate_weighted_nash(g, WeightVector(((1,),) * 3), cap=4)
    with pytest.raises(CapError):
        enumerate_pareto(g, weak=True, cap=4)


def test_weight_scaling_and_normalization():
    rng = np.random.default_rng(2)
    for game in corpus_games(4, 40):
        w = random_weights(rng, game, strictly_positive=False)
        factors = [Fraction(int(rng.integers(1, 9)), int(rng.integers(1, 9))) for _ in range(game.n_players)]
        for x in game.profiles():
            base = bool(is_weighted_nash(game, w, x))
            assert bool(is_weighted_nash(game, w.scaled(factors), x)) == base
            assert bool(is_weighted_nash(game, normalize_weights(w), x)) == base


def test_normalize_examples():
    assert normalize_weights(WeightVector(((2, 2),))).values == ((Fraction(1, 2), Fraction(1, 2)),)
    w = WeightVector(((Fraction(1, 4), Fraction(3, 4)), (1,)))
    assert normalize_weights(w) == w
    n = normalize_weights(WeightVector(((1, 3), (2,))))
    assert n.values == ((Fraction(1, 4), Fraction(3, 4)), (Fraction(1),)) and n.normalized


# -- Pareto --------------------------------------------------------------------------
def test_pareto_strategy_examples():
    g = single({"a": (1, 0), "b": (0, 1)})
    assert is_pareto_efficient_strategy(g, ("a",), 0) and is_pareto_efficient_strategy(g, ("b",), 0)
    g = single({"a": (1, 1), "b": (0, 0)})
    v = is_pareto_efficient_strategy(g, ("a",), 0)
    assert not v and v.evidence["deviation"] == "b"
    assert is_pareto_efficient_strategy(g, ("b",), 0)
    g = single({"a": (1, 0), "b": (0, 0)})
    assert is_pareto_efficient_strategy(g, ("a",), 0, weak=True)
    assert not is_pareto_efficient_strategy(g, ("a",), 0, weak=False)


def test_pareto_equilibrium_examples():
    zero = MultiobjectiveGame.zero((("a", "b"), ("c", "d")), (2, 1))
    for x in zero.profiles():
        assert is_pareto_equilibrium(zero, x, weak=True) and is_pareto_equilibrium(zero, x, weak=False)
    assert [c.profile for c in enumerate_pareto(zero, weak=False)] == list(zero.profiles())
    g = single({"a": (1, 0), "b": (0, 0)})
    assert is_pareto_equilibrium(g, ("a",), weak=True)
    assert not is_pareto_equilibrium(g, ("a",), weak=False)


def test_pareto_matches_oracle():
    for game in corpus_games(5, 80):
        for weak in (False, True):
            mask = pareto_mask(game, weak)
            expected = [x for x in oracles.all_profiles(game) if oracles.pareto(game, x, weak)]
            assert [c.profile for c in enumerate_pareto(game, weak)] == expected
            for x in game.profiles():
                assert bool(mask[game.profile_index(x)]) == (x in expected)
                assert bool(is_pareto_equilibrium(game, x, weak)) == (x in expected)


# -- certification via the minimax route ---------------------------------------------
def test_certify_zero_game_constant_structure():
    zero = MultiobjectiveGame.zero((("a", "b"), ("c", "d")), (1, 2))
    zero = with_convexity(zero, [AbstractConvexSpace.constant(s, s[0]) for s in zero.strategies])
    cert = certify_via_minimax(zero, WeightVector(((1,), (1, 1))), g="zero")
    assert cert.profile == ("a", "c") and cert.verified and cert.kind == "weighted_nash"


def test_certify_single_player():
    g = single({"a": (1,), "b": (0,)}, (AbstractConvexSpace.constant(("a", "b"), "b"),))
    cert = certify_via_minimax(g, WeightVector(((1,),)), g="f")
    assert cert.profile == ("b",)


def test_certify_rejects_positive_diagonal():
    zero = MultiobjectiveGame.zero((("a", "b"),), (1,))
    zero = with_convexity(zero, [AbstractConvexSpace.identity(("a", "b"))])
    with pytest.raises(HypothesisFailure) as info:
        certify_via_minimax(zero, WeightVector(((1,),)), g=lambda x, y: 1)
    assert info.value.condition == "auxiliary_function"
    assert not info.value.report.conditions["diagonal"]


def test_certify_requires_convexity_and_equal_seeds():
    zero = MultiobjectiveGame.zero((("a", "b"),), (1,))
    with pytest.raises(InputError):
        certify_via_minimax(zero, WeightVector(((1,),)))
    bad = with_convexity(zero, [AbstractConvexSpace.constant(("a", "b"), "a", seeds=("a",))])
    with pytest.raises(InputError):
        certify_via_minimax(bad, WeightVector(((1,),)))


def test_certificates_are_reverified_on_corpus():
    rng = np.random.default_rng(3)
    made = 0
    for game in corpus_games(6, 60):
        if game.n_profiles > 8:
            continue
        game = with_convexity(game, [AbstractConvexSpace.constant(s, s[0]) for s in game.strategies])
        w = random_weights(rng, game, strictly_positive=bool(rng.integers(2)))
        try:
            cert = pareto_via_weights(game, w, g="f")
        except HypothesisFailure:
            continue
        made += 1
        assert oracles.weighted_nash(game, w, cert.profile)
        assert oracles.pareto(game, cert.profile, weak=cert.kind == "weak_pareto")
        assert cert.kind == ("pareto" if w.strictly_positive else "weak_pareto")
    assert made > 0


def test_pareto_via_weights_kinds():
    zero = MultiobjectiveGame.zero((("a", "b"),), (2,))
    zero = with_convexity(zero, [AbstractConvexSpace.constant(("a", "b"), "a")])
    assert pareto_via_weights(zero, WeightVector(((1, 1),)), g="zero").kind == "pareto"
    assert pareto_via_weights(zero, WeightVector(((1, 0),)), g="zero").kind == "weak_pareto"


# -- sweeps -------------------------------------------------------------------------
def test_weight_grid_examples():
    assert weight_grid(1, 4) == [(Fraction(1),)]
    assert sorted(weight_grid(2, 2)) == [(0, 1), (Fraction(1, 2), Fraction(1, 2)), (1, 0)]
    assert len(weight_grid(3, 4)) == 15
    with pytest.raises(InputError):
        weight_grid(2, 0)


def test_sweep_matches_direct_enumeration():
    for game in corpus_games(7, 25):
        rep = weight_sweep(game, 2)
        for w, certs in rep.by_weight.items():
            assert [c.profile for c in certs] == [c.profile for c in enumerate_weighted_nash(game, w)]
            for c in certs:
                assert oracles.pareto(game, c.profile, weak=c.kind == "weak_pareto")
        assert set(rep.profiles) <= {c.profile for c in enumerate_pareto(game, weak=True)}


def test_sweep_single_criterion_grid():
    g = single({"a": (1,), "b": (0,)})
    rep = weight_sweep(g, 4)
    assert list(rep.by_weight) == [WeightVector(((1,),))]
