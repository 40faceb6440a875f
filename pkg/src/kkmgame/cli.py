"""Command-line entry point.

Exit codes: 0 affirmative verdict, 1 negative verdict, 2 input or
validation error, 3 enumeration cap exceeded.
"""
from __future__ import annotations

import argparse
import sys
import time
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional

from . import convex, equilibrium, io, minimax
from .errors import CapError, HypothesisFailure, InputError, PreconditionError
from .generators import CorpusBounds, generate_corpus, write_corpus

EXIT_OK, EXIT_NEGATIVE, EXIT_INPUT, EXIT_CAP = 0, 1, 2, 3

COMMANDS = ("verify", "solve", "pareto", "sweep", "kkm-check", "minimax-check", "corpus")

# one-line justification attached to each verdict kind
BASIS = {
    "weighted_nash": "no player lowers their weighted payoff by deviating alone",
    "pareto": "no player has a unilateral deviation improving some criterion without worsening any",
    "weak_pareto": "no player has a unilateral deviation improving every criterion",
    "kkm": "every closed-valued (or open-valued) KKM correspondence has the finite intersection property",
    "minimax": "hypotheses of the minimax inequality and its two conclusions",
}


@dataclass
class RunConfig:
    command: str
    game: Optional[Path] = None
    weights: Optional[Path] = None
    profile: Optional[Path] = None
    space: Optional[Path] = None
    topology: Optional[Path] = None
    instance: Optional[Path] = None
    g_function: Optional[str] = None
    resolution: int = 4
    enumerate: bool = False
    weak: bool = False
    mode: str = "closed"
    samples: Optional[int] = None
    seed: int = 0
    count: int = 1
    corollary: Optional[int] = None
    output: Optional[Path] = None
    caps: dict = field(default_factory=dict)
    bounds: dict = field(default_factory=dict)
    timings: bool = True

    def require(self, *names):
        for name in names:
            if getattr(self, name) is None:
                raise InputError(f"{self.command}: --{name.replace('_', '-')} is required")
        for key, value in self.caps.items():
            if value is not None and value < 1:
                raise InputError(f"{self.command}: cap {key} must be positive")


def _load_g(cfg: RunConfig, profiles):
    choice = cfg.g_function or "f"
    if choice in ("f", "zero"):
        return choice
    doc = io.read_json(choice)
    n = len(profiles)
    rows = io._matrix(doc.get("g"), n, choice, "g")
    return {(profiles[a], profiles[b]): rows[a][b] for a in range(n) for b in range(n)}


def _cert(c):
    return {"profile": list(c.profile), "kind": c.kind, "weights": c.weights,
            "evidence": c.evidence, "verified": c.verified, "basis": BASIS[c.kind]}


def _cmd_verify(cfg):
    cfg.require("game", "weights", "profile")
    game = io.load_game(cfg.game)
    w = io.load_weights(cfg.weights, game)
    x = io.load_profile(cfg.profile, game)
    v = equilibrium.is_weighted_nash(game, w, x)
    report = {
        "verdict": "weighted_nash" if v else "not_weighted_nash",
        "profile": list(x), "weights": w, "evidence": v.evidence, "basis": BASIS["weighted_nash"],
    }
    return (EXIT_OK if v else EXIT_NEGATIVE), report


def _cmd_solve(cfg):
    cfg.require("game", "weights")
    game = io.load_game(cfg.game)
    w = io.load_weights(cfg.weights, game)
    if cfg.enumerate:
        certs = equilibrium.enumerate_weighted_nash(game, w, cap=cfg.caps.get("profiles") or equilibrium.DEFAULT_PROFILE_CAP)
        report = {"verdict": "found" if certs else "none", "equilibria": [_cert(c) for c in certs]}
        return (EXIT_OK if certs else EXIT_NEGATIVE), report
    profiles = list(game.profiles())
    try:
        cert = equilibrium.certify_via_minimax(
            game, w, _load_g(cfg, profiles), kkm_cap=cfg.caps.get("kkm") or convex.DEFAULT_KKM_CAP
        )
    except HypothesisFailure as exc:
        return EXIT_NEGATIVE, {"verdict": "hypotheses_failed", "condition": exc.condition,
                               "message": str(exc), "report": exc.report}
    return EXIT_OK, {"verdict": "certified", "certificate": _cert(cert)}


def _cmd_pareto(cfg):
    cfg.require("game")
    game = io.load_game(cfg.game)
    if cfg.weights is not None and not cfg.enumerate:
        w = io.load_weights(cfg.weights, game)
        profiles = list(game.profiles())
        try:
            cert = equilibrium.pareto_via_weights(
                game, w, _load_g(cfg, profiles), kkm_cap=cfg.caps.get("kkm") or convex.DEFAULT_KKM_CAP
            )
        except HypothesisFailure as exc:
            return EXIT_NEGATIVE, {"verdict": "hypotheses_failed", "condition": exc.condition,
                                   "message": str(exc), "report": exc.report}
        return EXIT_OK, {"verdict": "certified", "certificate": _cert(cert)}
    certs = equilibrium.enumerate_pareto(game, weak=cfg.weak, cap=cfg.caps.get("profiles") or equilibrium.DEFAULT_PROFILE_CAP)
    if not cfg.enumerate:
        certs = certs[:1]
    report = {"verdict": "found" if certs else "none", "equilibria": [_cert(c) for c in certs]}
    return (EXIT_OK if certs else EXIT_NEGATIVE), report


def _cmd_sweep(cfg):
    cfg.require("game")
    game = io.load_game(cfg.game)
    res = equilibrium.weight_sweep(game, cfg.resolution, cap=cfg.caps.get("sweep") or equilibrium.DEFAULT_SWEEP_CAP)
    report = {
        "verdict": "found" if res.profiles else "none",
        "resolution": cfg.resolution,
        "note": "profiles found by weighted sweeps are a subset of the Pareto set, not all of it",
        "profiles": [{"profile": list(x), "kind": k, "basis": BASIS[k]} for x, k in res.profiles.items()],
        "by_weight": [
            {"weights": w, "profiles": [list(c.profile) for c in certs]} for w, certs in res.by_weight.items()
        ],
    }
    return (EXIT_OK if res.profiles else EXIT_NEGATIVE), report


def _cmd_kkm(cfg):
    cfg.require("space", "topology")
    space = io.load_space(cfg.space)
    topo = io.load_topology(cfg.topology)
    if cfg.samples is not None:
        verdict = convex.falsify_kkm_random(space, topo, cfg.mode, cfg.samples, cfg.seed)
    else:
        verdict = convex.check_kkm_principle(space, topo, cfg.mode, cap=cfg.caps.get("kkm") or convex.DEFAULT_KKM_CAP)
    report = {"verdict": "holds" if verdict.holds else "fails", "result": verdict, "basis": BASIS["kkm"]}
    if cfg.samples is not None and verdict.holds:
        report["note"] = "no counterexample sampled; this is not a proof"
    return (EXIT_OK if verdict.holds else EXIT_NEGATIVE), report


def _cmd_minimax(cfg):
    cfg.require("instance")
    inst = io.load_instance(cfg.instance)
    cap = cfg.caps.get("kkm") or convex.DEFAULT_KKM_CAP
    if cfg.corollary == 1:
        rep = minimax.check_corollary_1(inst, kkm_cap=cap)
    elif cfg.corollary == 2:
        rep = minimax.check_corollary_2(inst, kkm_cap=cap)
    elif cfg.corollary is None:
        rep = minimax.check_hypotheses(inst, kkm_cap=cap)
    else:
        raise InputError("minimax-check: --corollary must be 1 or 2")
    report = {"hypotheses": rep, "passed": rep.passed, "basis": BASIS["minimax"]}
    if cfg.corollary is None and rep.passed:
        report["x0"] = minimax.solve_conclusion_1(inst, rep)
    report["inf_sup_inequality"] = minimax.verify_conclusion_2(inst, kkm_cap=cap)
    report["verdict"] = "hypotheses_hold" if rep.passed else "hypotheses_fail"
    return (EXIT_OK if rep.passed else EXIT_NEGATIVE), report


def _cmd_corpus(cfg):
    if cfg.count < 1:
        raise InputError("corpus: --count must be at least 1")
    docs = generate_corpus(cfg.seed, cfg.count, CorpusBounds(**cfg.bounds))
    out_dir = cfg.output or Path("corpus")
    paths = write_corpus(docs, out_dir)
    for p in paths:  # round-trip closure
        io.load_game(p)
    return EXIT_OK, {"verdict": "written", "count": len(paths), "directory": str(out_dir)}


_DISPATCH = {
    "verify": _cmd_verify, "solve": _cmd_solve, "pareto": _cmd_pareto, "sweep": _cmd_sweep,
    "kkm-check": _cmd_kkm, "minimax-check": _cmd_minimax, "corpus": _cmd_corpus,
}


def run(cfg: RunConfig) -> tuple[int, dict]:
    """Execute one command; returns ``(exit_code, report)``."""
    start = time.perf_counter()
    try:
        code, report = _DISPATCH[cfg.command](cfg)
    except CapError as exc:
        code, report = EXIT_CAP, {"verdict": "cap_exceeded", "error": str(exc), "size": exc.size, "cap": exc.cap}
    except (InputError, PreconditionError) as exc:
        code, report = EXIT_INPUT, {"verdict": "input_error", "error": str(exc)}
    report = {"command": cfg.command, "exit_code": code, "seed": cfg.seed, **report}
    if cfg.timings:
        report["timings"] = {"seconds": round(time.perf_counter() - start, 6)}
    return code, report


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="kkmgame", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--output", "-o", type=Path, help="write the JSON report here instead of stdout")
        p.add_argument("--no-timings", dest="timings", action="store_false", help="omit wall-clock timings")
        return p

    p = common(sub.add_parser("verify", help="check one profile for weighted Nash equilibrium"))
    p.add_argument("--game", type=Path)
    p.add_argument("--weights", type=Path)
    p.add_argument("--profile", type=Path)

    p = common(sub.add_parser("solve", help="certify (or enumerate) weighted Nash equilibria"))
    p.add_argument("--game", type=Path)
    p.add_argument("--weights", type=Path)
    p.add_argument("--enumerate", action="store_true")
    p.add_argument("--g", dest="g_function", help="'f', 'zero' or a JSON file with a dense 'g' matrix")
    p.add_argument("--kkm-cap", type=int)
    p.add_argument("--profile-cap", type=int)

    p = common(sub.add_parser("pareto", help="find Pareto or weak Pareto equilibria"))
    p.add_argument("--game", type=Path)
    p.add_argument("--weak", action="store_true")
    p.add_argument("--enumerate", action="store_true")
    p.add_argument("--weights", type=Path, help="certify through weights instead of enumerating")
    p.add_argument("--g", dest="g_function")
    p.add_argument("--kkm-cap", type=int)
    p.add_argument("--profile-cap", type=int)

    p = common(sub.add_parser("sweep", help="weighted Nash equilibria over a weight grid"))
    p.add_argument("--game", type=Path)
    p.add_argument("--resolution", type=int, default=4)
    p.add_argument("--sweep-cap", type=int)

    p = common(sub.add_parser("kkm-check", help="check the (partial) KKM principle"))
    p.add_argument("--space", type=Path)
    p.add_argument("--topology", type=Path)
    p.add_argument("--mode", choices=("closed", "open"), default="closed")
    p.add_argument("--samples", type=int)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--kkm-cap", type=int)

    p = common(sub.add_parser("minimax-check", help="check a minimax-inequality instance"))
    p.add_argument("--instance", type=Path)
    p.add_argument("--corollary", type=int, choices=(1, 2))
    p.add_argument("--kkm-cap", type=int)

    p = common(sub.add_parser("corpus", help="write a reproducible random game corpus"))
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--count", type=int, default=1)
    p.add_argument("--max-players", type=int, default=3)
    p.add_argument("--max-strategies", type=int, default=4)
    p.add_argument("--max-criteria", type=int, default=3)
    return parser


def config_from_args(args: argparse.Namespace) -> RunConfig:
    ns = vars(args).copy()
    caps = {
        "kkm": ns.pop("kkm_cap", None),
        "profiles": ns.pop("profile_cap", None),
        "sweep": ns.pop("sweep_cap", None),
    }
    if ns["command"] == "corpus":
        ns["bounds"] = {
            "max_players": ns.pop("max_players"),
            "max_strategies": ns.pop("max_strategies"),
            "max_criteria": ns.pop("max_criteria"),
        }
    return RunConfig(caps=caps, **ns)


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    cfg = config_from_args(args)
    try:
        cfg.require()
    except InputError as exc:
        print(exc, file=sys.stderr)
        return EXIT_INPUT
    code, report = run(cfg)
    text = io.dumps(report)
    if cfg.output is not None and cfg.command != "corpus":
        cfg.output.write_text(text)
    else:
        sys.stdout.write(text)
    return code


if __name__ == "__main__":
    sys.exit(main())
