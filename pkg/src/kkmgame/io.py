"""JSON file formats: topologies, spaces, games, weights, profiles, instances.

Every loader raises :class:`InputError` naming the file and the field.
Numbers are read exactly (JSON floats go through their decimal text).
"""
from __future__ import annotations

import dataclasses
import json
import math
from fractions import Fraction
from pathlib import Path

import numpy as np

from .convex import AbstractConvexSpace
from .errors import InputError
from .exact import as_json_number, to_extended, to_rational
from .game import MultiobjectiveGame, WeightVector
from .minimax import BranchEntry, CoercivityWitness, MinimaxInstance
from .topology import FiniteTopology, SetCorrespondence

GAMMA_RULES = ("identity", "full")


def _where(source, fieldname):
    return f"{source}: field '{fieldname}'" if fieldname else f"{source}"


def _err(source, fieldname, msg):
    return InputError(f"{_where(source, fieldname)}: {msg}")


def read_json(path) -> dict:
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as exc:
        raise InputError(f"{path}: cannot read file ({exc.strerror})") from None
    try:
        doc = json.loads(text, parse_float=Fraction)
    except json.JSONDecodeError as exc:
        raise InputError(f"{path}: invalid JSON ({exc})") from None
    if not isinstance(doc, dict):
        raise InputError(f"{path}: top level must be a JSON object")
    return doc


def _field(doc, name, source, kind=None):
    if name not in doc:
        raise _err(source, name, "missing")
    value = doc[name]
    if kind is not None and not isinstance(value, kind):
        raise _err(source, name, f"expected {kind.__name__ if isinstance(kind, type) else 'list'}")
    return value


def _labels(value, source, fieldname):
    if not isinstance(value, list):
        raise _err(source, fieldname, "expected a list of labels")
    for v in value:
        if not isinstance(v, str):
            raise _err(source, fieldname, f"labels must be strings, got {v!r}")
    return value


def _rethrow(source, fieldname, exc):
    return _err(source, fieldname, str(exc))


# -- topology -----------------------------------------------------------------
def topology_from_dict(doc: dict, source="<topology>") -> FiniteTopology:
    points = _labels(_field(doc, "points", source), source, "points")
    opens = _field(doc, "opens", source, list)
    fam = [frozenset(_labels(o, source, f"opens[{j}]")) for j, o in enumerate(opens)]
    try:
        return FiniteTopology(tuple(points), frozenset(fam))
    except InputError as exc:
        raise _rethrow(source, "opens", exc) from None


def topology_to_dict(t: FiniteTopology) -> dict:
    order = {p: j for j, p in enumerate(t.points)}
    opens = [sorted(o, key=order.__getitem__) for o in t.opens]
    opens.sort(key=lambda o: (len(o), [order[p] for p in o]))
    return {"points": list(t.points), "opens": opens}


def load_topology(path) -> FiniteTopology:
    return topology_from_dict(read_json(path), source=str(path))


# -- spaces -------------------------------------------------------------------
def space_from_dict(doc: dict, source="<space>") -> AbstractConvexSpace:
    points = _labels(_field(doc, "points", source), source, "points")
    seeds = _labels(doc.get("seeds", points), source, "seeds")
    try:
        if "gamma_rule" in doc:
            rule = doc["gamma_rule"]
            if not isinstance(rule, str):
                raise _err(source, "gamma_rule", "expected a string")
            return AbstractConvexSpace.from_rule(tuple(points), rule, seeds=tuple(seeds))
        entries = _field(doc, "gamma", source, list)
        table = {}
        for j, e in enumerate(entries):
            if not isinstance(e, dict) or "A" not in e or "value" not in e:
                raise _err(source, f"gamma[{j}]", "expected an object with 'A' and 'value'")
            a = frozenset(_labels(e["A"], source, f"gamma[{j}].A"))
            v = _labels(e["value"], source, f"gamma[{j}].value")
            if not v:
                raise _err(source, f"gamma[{j}].value", "gamma values must be nonempty")
            table[a] = frozenset(v)
        return AbstractConvexSpace(tuple(points), tuple(seeds), table)
    except InputError as exc:
        if str(exc).startswith(str(source)):
            raise
        raise _rethrow(source, "gamma", exc) from None


def space_to_dict(space: AbstractConvexSpace) -> dict:
    pidx = {p: j for j, p in enumerate(space.points)}
    sidx = {s: j for j, s in enumerate(space.seeds)}
    gamma = []
    for amask in range(1, 1 << len(space.seeds)):
        a = [space.seeds[j] for j in range(len(space.seeds)) if amask >> j & 1]
        value = sorted(space.gamma[frozenset(a)], key=pidx.__getitem__)
        gamma.append({"A": [str(s) for s in sorted(a, key=sidx.__getitem__)], "value": [str(p) for p in value]})
    return {"points": [str(p) for p in space.points], "seeds": [str(s) for s in space.seeds], "gamma": gamma}


def load_space(path) -> AbstractConvexSpace:
    return space_from_dict(read_json(path), source=str(path))


# -- games --------------------------------------------------------------------
def _convexity_entry(value, strategies, source, fieldname, base_dir):
    if isinstance(value, dict):
        return space_from_dict(value, source=f"{source}:{fieldname}")
    if not isinstance(value, str):
        raise _err(source, fieldname, "expected a gamma_rule string, a space file path or an object")
    if value in GAMMA_RULES or value.startswith("constant:"):
        try:
            return AbstractConvexSpace.from_rule(tuple(strategies), value)
        except InputError as exc:
            raise _rethrow(source, fieldname, exc) from None
    path = Path(value)
    if not path.is_absolute() and base_dir is not None:
        path = Path(base_dir) / path
    return load_space(path)


def game_from_dict(doc: dict, source="<game>", base_dir=None) -> MultiobjectiveGame:
    players = _field(doc, "players", source, list)
    if not players:
        raise _err(source, "players", "at least one player is required")
    ids, strategies, criteria = [], [], []
    for j, p in enumerate(players):
        where = f"players[{j}]"
        if not isinstance(p, dict):
            raise _err(source, where, "expected an object")
        pid = p.get("id")
        if not isinstance(pid, str):
            raise _err(source, f"{where}.id", "expected a string id")
        strat = _labels(p.get("strategies"), source, f"{where}.strategies")
        k = p.get("criteria", 1)
        if not isinstance(k, int) or isinstance(k, bool) or k < 1:
            raise _err(source, f"{where}.criteria", "expected a positive integer")
        ids.append(pid)
        strategies.append(tuple(strat))
        criteria.append(k)
    payoffs_doc = _field(doc, "payoffs", source, dict)
    shape = tuple(len(s) for s in strategies)
    tensors = []
    for pid, k in zip(ids, criteria):
        fieldname = f"payoffs.{pid}"
        if pid not in payoffs_doc:
            raise _err(source, fieldname, "missing")
        tensors.append(_payoff_tensor(payoffs_doc[pid], shape, k, source, fieldname))
    convexity = None
    if doc.get("convexity") is not None:
        cdoc = doc["convexity"]
        if not isinstance(cdoc, dict):
            raise _err(source, "convexity", "expected an object keyed by player id")
        convexity = tuple(
            _convexity_entry(cdoc[pid], strat, source, f"convexity.{pid}", base_dir) if pid in cdoc else None
            for pid, strat in zip(ids, strategies)
        )
    try:
        return MultiobjectiveGame(tuple(ids), tuple(strategies), tuple(criteria), tuple(tensors), convexity)
    except InputError as exc:
        raise _rethrow(source, "", exc) from None


def _payoff_tensor(value, shape, k, source, fieldname):
    def walk(node, depth, path):
        if depth == len(shape):
            if not isinstance(node, list) or len(node) != k:
                raise _err(source, fieldname + path, f"expected a vector of {k} criteria")
            out = []
            for c in node:
                try:
                    out.append(to_rational(c))
                except ValueError as exc:
                    raise _err(source, fieldname + path, str(exc)) from None
            return out
        if not isinstance(node, list) or len(node) != shape[depth]:
            raise _err(source, fieldname + path, f"ragged payoff tensor: expected {shape[depth]} entries")
        return [walk(c, depth + 1, f"{path}[{j}]") for j, c in enumerate(node)]

    nested = walk(value, 0, "")
    arr = np.empty(shape + (k,), dtype=object)
    for idx in np.ndindex(*shape):
        node = nested
        for j in idx:
            node = node[j]
        arr[idx] = node
    return arr


def game_to_dict(game: MultiobjectiveGame) -> dict:
    doc = {
        "players": [
            {"id": pid, "strategies": list(strat), "criteria": k}
            for pid, strat, k in zip(game.players, game.strategies, game.criteria)
        ],
        "payoffs": {pid: _nested(game.payoffs[i]) for i, pid in enumerate(game.players)},
    }
    if game.convexity is not None:
        doc["convexity"] = {
            pid: space_to_dict(sp) for pid, sp in zip(game.players, game.convexity) if sp is not None
        }
    return doc


def _nested(arr):
    if arr.ndim == 1:
        return [as_json_number(v) for v in arr]
    return [_nested(sub) for sub in arr]


def load_game(path) -> MultiobjectiveGame:
    path = Path(path)
    return game_from_dict(read_json(path), source=str(path), base_dir=path.parent)


# -- weights and profiles -------------------------------------------------------
def weights_from_dict(doc: dict, game: MultiobjectiveGame, source="<weights>") -> WeightVector:
    wdoc = _field(doc, "weights", source, dict)
    vals = []
    for pid, k in zip(game.players, game.criteria):
        fieldname = f"weights.{pid}"
        if pid not in wdoc:
            raise _err(source, fieldname, "missing")
        v = wdoc[pid]
        if not isinstance(v, list) or len(v) != k:
            raise _err(source, fieldname, f"expected a list of {k} rationals")
        try:
            vals.append(WeightVector((v,))[0])
        except InputError as exc:
            raise _err(source, fieldname, str(exc).split(": ", 1)[-1]) from None
    return WeightVector(tuple(vals))


def weights_to_dict(w: WeightVector, game: MultiobjectiveGame) -> dict:
    return {"weights": {pid: [as_json_number(c) for c in wi] for pid, wi in zip(game.players, w.values)}}


def load_weights(path, game) -> WeightVector:
    return weights_from_dict(read_json(path), game, source=str(path))


def profile_from_dict(doc: dict, game: MultiobjectiveGame, source="<profile>") -> tuple:
    pdoc = _field(doc, "profile", source, dict)
    try:
        return game.as_profile(pdoc)
    except InputError as exc:
        raise _rethrow(source, "profile", exc) from None


def load_profile(path, game) -> tuple:
    return profile_from_dict(read_json(path), game, source=str(path))


# -- minimax instances ----------------------------------------------------------
def _matrix(value, n, source, fieldname):
    if not isinstance(value, list) or len(value) != n or any(not isinstance(r, list) or len(r) != n for r in value):
        raise _err(source, fieldname, f"expected a {n}x{n} matrix")
    try:
        return [[to_extended(c) for c in row] for row in value]
    except ValueError as exc:
        raise _err(source, fieldname, str(exc)) from None


def _witness(doc, source):
    if not isinstance(doc, dict):
        raise _err(source, "witness", "expected an object")
    k = _labels(_field(doc, "k_set", source), source, "witness.k_set")
    a = doc.get("variant_a")
    b = doc.get("variant_b")
    entries = None
    if b is not None:
        if not isinstance(b, list):
            raise _err(source, "witness.variant_b", "expected a list")
        entries = []
        for j, e in enumerate(b):
            where = f"witness.variant_b[{j}]"
            if not isinstance(e, dict):
                raise _err(source, where, "expected an object")
            entries.append(BranchEntry(
                frozenset(_labels(e.get("n_set"), source, where + ".n_set")),
                frozenset(_labels(e.get("x_prime"), source, where + ".x_prime")),
                frozenset(_labels(e.get("l_set"), source, where + ".l_set")),
            ))
    try:
        return CoercivityWitness(
            frozenset(k),
            None if a is None else frozenset(_labels(a, source, "witness.variant_a")),
            None if entries is None else tuple(entries),
        )
    except InputError as exc:
        raise _rethrow(source, "witness", exc) from None


def instance_from_dict(doc: dict, source="<instance>", base_dir=None) -> MinimaxInstance:
    def resolve(name):
        ref = _field(doc, name, source)
        if isinstance(ref, dict):
            return ref, f"{source}:{name}"
        if not isinstance(ref, str):
            raise _err(source, name, "expected a file path")
        path = Path(ref)
        if not path.is_absolute() and base_dir is not None:
            path = Path(base_dir) / path
        return read_json(path), str(path)

    sdoc, ssrc = resolve("space")
    tdoc, tsrc = resolve("topology")
    space = space_from_dict(sdoc, ssrc)
    topology = topology_from_dict(tdoc, tsrc)
    n = len(space.points)
    f = _matrix(_field(doc, "f", source), n, source, "f")
    g = _matrix(_field(doc, "g", source), n, source, "g")
    try:
        gamma = to_extended(_field(doc, "gamma_level", source))
    except ValueError as exc:
        raise _err(source, "gamma_level", str(exc)) from None
    witness = _witness(doc["witness"], source) if doc.get("witness") is not None else None
    try:
        return MinimaxInstance.from_matrices(space, topology, f, g, gamma, witness)
    except InputError as exc:
        raise _rethrow(source, "", exc) from None


def load_instance(path) -> MinimaxInstance:
    path = Path(path)
    return instance_from_dict(read_json(path), source=str(path), base_dir=path.parent)


def instance_to_dict(inst: MinimaxInstance) -> dict:
    pts = inst.space.points
    doc = {
        "space": space_to_dict(inst.space),
        "topology": topology_to_dict(inst.topology),
        "f": [[as_json_number(inst.f[(x, y)]) for y in pts] for x in pts],
        "g": [[as_json_number(inst.g[(x, y)]) for y in pts] for x in pts],
        "gamma_level": as_json_number(inst.gamma_level),
    }
    if inst.witness is not None:
        w = inst.witness
        order = {p: j for j, p in enumerate(pts)}
        srt = lambda s: sorted(s, key=order.__getitem__)  # noqa: E731
        wd = {"k_set": srt(w.k_set)}
        if w.variant_a is not None:
            wd["variant_a"] = srt(w.variant_a)
        if w.variant_b is not None:
            wd["variant_b"] = [
                {"n_set": srt(e.n_set), "x_prime": srt(e.x_prime), "l_set": srt(e.l_set)} for e in w.variant_b
            ]
        doc["witness"] = wd
    return doc


# -- reports ------------------------------------------------------------------
def to_jsonable(obj):
    """Recursively convert results into JSON-ready structures."""
    if isinstance(obj, bool) or obj is None or isinstance(obj, str):
        return obj
    if isinstance(obj, (int, Fraction)):
        return as_json_number(Fraction(obj))
    if isinstance(obj, float):
        return as_json_number(obj) if math.isinf(obj) else obj
    if isinstance(obj, np.bool_):
        return bool(obj)
    if isinstance(obj, np.integer):
        return int(obj)
    if isinstance(obj, WeightVector):
        return [[to_jsonable(c) for c in w] for w in obj.values]
    if isinstance(obj, SetCorrespondence):
        return {str(z): sorted(map(str, obj.values[z])) for z in obj.domain}
    if isinstance(obj, (frozenset, set)):
        return sorted((to_jsonable(v) for v in obj), key=str)
    if isinstance(obj, (list, tuple)):
        return [to_jsonable(v) for v in obj]
    if isinstance(obj, dict):
        return {str(k) if not isinstance(k, tuple) else ",".join(map(str, k)): to_jsonable(v) for k, v in obj.items()}
    if dataclasses.is_dataclass(obj):
        return {f.name: to_jsonable(getattr(obj, f.name)) for f in dataclasses.fields(obj) if not f.name.startswith("_")}
    return str(obj)


def dumps(doc) -> str:
    return json.dumps(to_jsonable(doc), indent=2, sort_keys=True) + "\n"
