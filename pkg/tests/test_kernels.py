import os
import subprocess
import sys

import numpy as np
import pytest

from kkmgame import _accel, _kernels
from kkmgame import AbstractConvexSpace, FiniteTopology, check_kkm_principle
from kkmgame.convex import _candidates, _topology_masks
from kkmgame.generators import random_space, random_topology

needs_numba = pytest.mark.skipif(_kernels._kkm_dfs_jit is None, reason="numba not installed")


def problem(space, topology, mode="closed"):
    cands = _candidates(space, _topology_masks(space, topology, mode))
    flat = np.array([m for c in cands for m in c], dtype=np.int64)
    offsets = np.zeros(len(cands) + 1, dtype=np.int64)
    offsets[1:] = np.cumsum([len(c) for c in cands])
    return np.array(space.gamma_masks, dtype=np.int64), flat, offsets, len(space.seeds)


def backends():
    out = ["numpy", "python"]
    if _kernels._kkm_dfs_jit is not None:
        out.append("numba")
    return out


def test_backends_agree_on_random_spaces():
    rng = np.random.default_rng(11)
    for _ in range(300):
        pts = tuple(range(int(rng.integers(1, 5))))
        sp = random_space(rng, pts)
        topo = random_topology(rng, pts)
        prob = problem(sp, topo)
        results = {b: tuple(_kernels.kkm_search(*prob, backend=b)) for b in backends()}
        assert len(set(results.values())) == 1, results


def test_numpy_chunking_preserves_first_hit(monkeypatch):
    sp = AbstractConvexSpace.identity(tuple(range(4)))
    prob = problem(sp, FiniteTopology.discrete(sp.points))
    whole = tuple(_kernels.kkm_search(*prob, backend="numpy"))
    monkeypatch.setattr(_kernels, "_CHUNK_CELLS", 64)
    assert tuple(_kernels.kkm_search(*prob, backend="numpy")) == whole
    assert tuple(_kernels.kkm_search(*prob, backend="python")) == whole


def test_verdicts_agree_across_backends():
    rng = np.random.default_rng(12)
    for _ in range(100):
        pts = tuple(range(int(rng.integers(2, 5))))
        sp = random_space(rng, pts)
        topo = random_topology(rng, pts)
        verdicts = {
            b: check_kkm_principle(sp, topo, exhaustive=True, backend=b) for b in backends()
        }
        first = next(iter(verdicts.values()))
        for v in verdicts.values():
            assert v.holds == first.holds and v.counterexample == first.counterexample


def test_unknown_backend():
    sp = AbstractConvexSpace.identity((0, 1))
    with pytest.raises(ValueError):
        _kernels.kkm_search(*problem(sp, FiniteTopology.discrete((0, 1))), backend="gpu")


@needs_numba
def test_census_backends_agree():
    for topo in (FiniteTopology.discrete("ab"), FiniteTopology.indiscrete("ab"),
                 FiniteTopology("ab", [set(), {"a"}, {"a", "b"}])):
        for n_seeds in (1, 2):
            a = _kernels.structure_census(2, n_seeds, topo.closed_masks, backend="numba")
            b = _kernels.structure_census(2, n_seeds, topo.closed_masks, backend="python")
            assert tuple(a) == tuple(b)


def test_env_flag_selects_numpy_path():
    code = "from kkmgame import _accel; print(_accel.USE_NUMBA)"
    env = dict(os.environ, **{_accel.DISABLE_ENV: "1"})
    out = subprocess.run([sys.executable, "-c", code], env=env, capture_output=True, text=True, check=True)
    assert out.stdout.strip() == "False"
