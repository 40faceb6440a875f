"""Finite abstract convex spaces, KKM verification, minimax checks and
weighted / Pareto equilibria of finite multiobjective games, in exact
rational arithmetic."""
from .errors import (
    CapError,
    HypothesisFailure,
    InputError,
    KkmGameError,
    PreconditionError,
    TheoremViolation,
)
from .exact import NEG_INF, POS_INF, to_extended, to_rational
from .topology import (
    FiniteTopology,
    SetCorrespondence,
    classify_correspondence,
    closure,
    complement_correspondence,
    interior,
)
from .convex import (
    AbstractConvexSpace,
    KkmVerdict,
    check_glsc,
    check_kkm_principle,
    check_quasi,
    falsify_kkm_random,
    gamma_hull,
    is_gamma_convex,
    is_gamma_convex_relative,
    is_kkm_correspondence,
    product_space,
    subspace,
)
from .game import MultiobjectiveGame, WeightVector, deviate, in_orthant, payoff, product_strategy_space
from .minimax import (
    BranchEntry,
    CoercivityWitness,
    HypothesisReport,
    MinimaxCertificate,
    MinimaxInstance,
    check_corollary_1,
    check_corollary_2,
    check_hypotheses,
    solve_conclusion_1,
    verify_conclusion_2,
)
from .equilibrium import (
    EquilibriumCertificate,
    SweepReport,
    Verdict,
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

__version__ = "0.1.0"

__all__ = [
    "AbstractConvexSpace",
    "BranchEntry",
    "CapError",
    "CoercivityWitness",
    "EquilibriumCertificate",
    "FiniteTopology",
    "HypothesisFailure",
    "HypothesisReport",
    "InputError",
    "KkmGameError",
    "KkmVerdict",
    "MinimaxCertificate",
    "MinimaxInstance",
    "MultiobjectiveGame",
    "NEG_INF",
    "POS_INF",
    "PreconditionError",
    "SetCorrespondence",
    "SweepReport",
    "TheoremViolation",
    "Verdict",
    "WeightVector",
    "aggregate_f",
    "certify_via_minimax",
    "check_corollary_1",
    "check_corollary_2",
    "check_glsc",
    "check_hypotheses",
    "check_kkm_principle",
    "check_quasi",
    "classify_correspondence",
    "closure",
    "complement_correspondence",
    "deviate",
    "enumerate_pareto",
    "enumerate_weighted_nash",
    "falsify_kkm_random",
    "gamma_hull",
    "in_orthant",
    "interior",
    "is_gamma_convex",
    "is_gamma_convex_relative",
    "is_kkm_correspondence",
    "is_pareto_efficient_strategy",
    "is_pareto_equilibrium",
    "is_weighted_nash",
    "normalize_weights",
    "pareto_via_weights",
    "payoff",
    "product_space",
    "product_strategy_space",
    "solve_conclusion_1",
    "subspace",
    "to_extended",
    "to_rational",
    "verify_conclusion_2",
    "weight_grid",
    "weight_sweep",
]
