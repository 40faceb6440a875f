from fractions import Fraction

import numpy as np
import pytest

from kkmgame import (
    AbstractConvexSpace,
    BranchEntry,
    CoercivityWitness,
    FiniteTopology,
    InputError,
    MinimaxInstance,
    POS_INF,
    PreconditionError,
    check_corollary_1,
    check_corollary_2,
    check_hypotheses,
    solve_conclusion_1,
    verify_conclusion_2,
)
from kkmgame.generators import random_instance

CD = ("c", "d")
CONST_C = AbstractConvexSpace.constant(CD, "c")


def inst(space, topo, f, g, gamma, witness=None):
    pts = space.points
    return MinimaxInstance(
        space, topo,
        {(x, y): f(x, y) for x in pts for y in pts},
        {(x, y): g(x, y) for x in pts for y in pts},
        gamma, witness,
    )


def zero_inst(space=None, topo=None, witness=None):
    space = space or AbstractConvexSpace.identity((1, 2, 3))
    topo = topo or FiniteTopology.indiscrete(space.points)
    return inst(space, topo, lambda x, y: 0, lambda x, y: 0, 0, witness)


# -- hypotheses ----------------------------------------------------------------------
def test_zero_instance_passes_everything():
    rep = check_hypotheses(zero_inst())
    assert rep.passed and rep.coercivity_variant == "default" and rep.kkm_verified


def test_diagonal_failure_names_point():
    i = inst(AbstractConvexSpace.identity((1, 2)), FiniteTopology.discrete((1, 2)),
             lambda x, y: 0, lambda x, y: 0, -1)
    rep = check_hypotheses(i)
    assert not rep.conditions["diagonal"] and rep.evidence["diagonal"]["x"] == 1


def test_hull_inclusion_failure():
    f = lambda x, y: 1 if (y == "d" and x != "c") else 0  # noqa: E731
    rep = check_hypotheses(inst(CONST_C, FiniteTopology.discrete(CD), f, f, 0))
    assert not rep.conditions["hull_inclusion"]
    assert rep.evidence["hull_inclusion"]["x"] == "d"


def test_instance_validation():
    with pytest.raises(InputError):
        MinimaxInstance(AbstractConvexSpace.constant(CD, "c", seeds=("c",)),
                        FiniteTopology.discrete(CD), {}, {}, 0)
    with pytest.raises(InputError):
        MinimaxInstance(CONST_C, FiniteTopology.discrete(CD), {("c", "c"): 0}, {}, 0)
    with pytest.raises(InputError):
        CoercivityWitness({"c"})


# -- coercivity witnesses ----------------------------------------------------------
def test_variant_a_witness():
    # F(y) = {x : f(x,y) <= 0}; make the intersection over M = {1} equal {1}
    sp = AbstractConvexSpace.identity((1, 2, 3))
    disc = FiniteTopology.discrete(sp.points)
    f = lambda x, y: 0 if x == 1 or y != 1 else 1  # noqa: E731
    good = inst(sp, disc, f, f, 0, CoercivityWitness({1}, variant_a={1}))
    assert check_hypotheses(good).conditions["coercive"]
    bad = inst(sp, disc, f, f, 0, CoercivityWitness({2}, variant_a={1}))
    rep = check_hypotheses(bad)
    assert not rep.conditions["coercive"] and "coercive_a" in rep.evidence


def test_variant_b_witness():
    sp = AbstractConvexSpace.identity((1, 2))
    disc = FiniteTopology.discrete(sp.points)
    full = BranchEntry(frozenset({1, 2}), frozenset({1, 2}), frozenset({1, 2}))
    ok = zero_inst(sp, disc, CoercivityWitness({1, 2}, variant_b=(full,)))
    rep = check_hypotheses(ok)
    assert rep.conditions["coercive"] and rep.coercivity_variant == "b"
    # an entry with X' != X alone cannot serve N = X
    part = BranchEntry(frozenset({1}), frozenset({1}), frozenset({1}))
    rep = check_hypotheses(zero_inst(sp, disc, CoercivityWitness({1, 2}, variant_b=(part,))))
    assert not rep.conditions["coercive"]
    # L_N not relatively convex over X'
    bad = BranchEntry(frozenset({1, 2}), frozenset({1, 2}), frozenset({1}))
    rep = check_hypotheses(zero_inst(sp, disc, CoercivityWitness({1, 2}, variant_b=(bad,))))
    assert not rep.conditions["coercive"]


# -- conclusions -------------------------------------------------------------------
def test_conclusion_1_examples():
    assert solve_conclusion_1(zero_inst()) == 1
    # the unrepaired form has g(d, d) = 1 > 0, so the diagonal bound rejects it
    f = lambda x, y: 0 if x == "c" else 1  # noqa: E731
    literal = inst(CONST_C, FiniteTopology.discrete(CD), f, f, 0)
    assert check_hypotheses(literal).failed_conditions == ["diagonal"]
    with pytest.raises(PreconditionError):
        solve_conclusion_1(literal)
    f = lambda x, y: 1 if (x, y) == ("d", "c") else 0  # noqa: E731
    i = inst(CONST_C, FiniteTopology.discrete(CD), f, f, 0)
    assert check_hypotheses(i).passed
    assert solve_conclusion_1(i) == "c"
    top = inst(CONST_C, FiniteTopology.discrete(CD), lambda x, y: 5, lambda x, y: 5, POS_INF)
    assert solve_conclusion_1(top) == "c"


def test_conclusion_1_needs_hypotheses():
    i = inst(AbstractConvexSpace.identity((1, 2)), FiniteTopology.discrete((1, 2)),
             lambda x, y: 0, lambda x, y: 0, -1)
    with pytest.raises(PreconditionError):
        solve_conclusion_1(i)


def test_conclusion_1_restricted_to_k_under_transfer_mode():
    sp = AbstractConvexSpace.full((1, 2))
    i = zero_inst(sp, FiniteTopology.discrete(sp.points), CoercivityWitness({2}, variant_a={1}))
    rep = check_hypotheses(i)
    assert rep.closed_mode == "transfer" and rep.passed is False  # K={2} misses F(1)=X
    i = zero_inst(sp, FiniteTopology.discrete(sp.points), CoercivityWitness({1, 2}, variant_a={1}))
    assert solve_conclusion_1(i) == 1


def test_conclusion_2_examples():
    c = verify_conclusion_2(zero_inst())
    assert c.holds and c.inf_sup_f == 0 and c.sup_diag_g == 0 and c.hypotheses_passed
    sp = AbstractConvexSpace.identity((1, 2))
    bad = inst(sp, FiniteTopology.discrete(sp.points), lambda x, y: 1, lambda x, y: 0, 0)
    c = verify_conclusion_2(bad)
    assert not c.holds and not check_hypotheses(bad).conditions["hull_inclusion"]
    inf = inst(sp, FiniteTopology.discrete(sp.points), lambda x, y: 7,
               lambda x, y: POS_INF if x == y == 2 else 0, 0)
    assert verify_conclusion_2(inf).holds


def test_conclusion_2_certificate_replays():
    rng = np.random.default_rng(9)
    for _ in range(200):
        i = random_instance(rng)
        c = verify_conclusion_2(i)
        assert i.f[(c.argmin_x, c.argmax_y)] == c.inf_sup_f
        assert i.g[(c.argmax_diag, c.argmax_diag)] == c.sup_diag_g
        pts = i.space.points
        assert c.inf_sup_f == min(max(i.f[(x, y)] for y in pts) for x in pts)


# -- corollaries ---------------------------------------------------------------------
def test_corollary_1_examples():
    disc = FiniteTopology.discrete(CD)
    assert check_corollary_1(zero_inst(CONST_C, disc)).passed
    sp = AbstractConvexSpace.identity((1, 2))
    disc = FiniteTopology.discrete(sp.points)
    # identity structure under the discrete topology fails the KKM principle
    assert check_corollary_1(zero_inst(sp, disc)).failed_conditions == ["kkm"]
    rep = check_corollary_1(inst(sp, disc, lambda x, y: 1, lambda x, y: 0, 0))
    assert not rep.conditions["majorant_diagonal"] and rep.evidence["majorant_diagonal"]["f"] == 1
    rng = np.random.default_rng(0)
    for _ in range(30):
        vals = {(x, y): Fraction(int(rng.integers(-2, 3))) for x in (1, 2) for y in (1, 2)}
        rep = check_corollary_1(inst(sp, disc, lambda x, y: vals[(x, y)], lambda x, y: vals[(x, y)], 0))
        assert rep.conditions["convex_upper_levels"]


def test_corollary_2_examples():
    assert check_corollary_2(zero_inst()).passed
    rng = np.random.default_rng(1)
    sp = AbstractConvexSpace.identity((1, 2, 3))
    for _ in range(30):
        vals = {(x, y): int(rng.integers(-2, 3)) for x in sp.points for y in sp.points}
        i = inst(sp, FiniteTopology.discrete(sp.points), lambda x, y: vals[(x, y)], lambda x, y: vals[(x, y)], 0)
        assert check_corollary_2(i).conditions["glsc"]
    f = lambda x, y: 1 if (y == "d" and x != "c") else 0  # noqa: E731
    rep = check_corollary_2(inst(CONST_C, FiniteTopology.discrete(CD), f, f, 0))
    assert not rep.conditions["quasiconcave"]


def test_corollaries_imply_inequality():
    rng = np.random.default_rng(10)
    seen = {1: 0, 2: 0}
    for _ in range(3000):
        i = random_instance(rng, max_points=3)
        for k, check in ((1, check_corollary_1), (2, check_corollary_2)):
            if check(i).passed:
                seen[k] += 1
                assert verify_conclusion_2(i).holds
    assert seen[1] > 20 and seen[2] > 20


def test_hypotheses_imply_conclusions_small():
    rng = np.random.default_rng(11)
    accepted = 0
    for _ in range(1500):
        i = random_instance(rng, max_points=3)
        rep = check_hypotheses(i)
        if rep.passed:
            accepted += 1
            x0 = solve_conclusion_1(i, rep)
            assert all(i.f[(x0, y)] <= i.gamma_level for y in i.space.points)
            assert verify_conclusion_2(i).holds
    assert accepted > 100
