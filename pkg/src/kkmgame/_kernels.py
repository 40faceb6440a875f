"""Hot loops for the KKM-principle search.

Both backends solve the same problem.  Given

* ``gamma[A]``: point mask of the structure value at seed-subset mask ``A``
  (``gamma[0]`` unused),
* per-seed candidate value masks, flattened into ``cand`` with ``offsets``
  (seed ``j`` owns ``cand[offsets[j]:offsets[j+1]]``, ascending),

find the lexicographically first assignment (seed 0 most significant) whose
values cover every ``gamma[A]`` by the union over ``A`` and whose total
intersection is empty.  They return the chosen candidate position per seed,
or ``-1`` entries if there is none.
"""
from __future__ import annotations

import numpy as np

from . import _accel


def _kkm_dfs(gamma, cand, offsets, n):
    pos = np.empty(n, dtype=np.int64)
    result = np.full(n, -1, dtype=np.int64)
    union = np.zeros(1 << n, dtype=np.int64)
    inter = np.zeros(n + 1, dtype=np.int64)
    inter[0] = -1  # all bits
    d = 0
    pos[0] = offsets[0]
    while d >= 0:
        if pos[d] == offsets[d + 1]:
            d -= 1
            if d >= 0:
                pos[d] += 1
            continue
        v = cand[pos[d]]
        base = 1 << d
        ok = True
        for s in range(base):
            u = union[s] | v
            union[base | s] = u
            if gamma[base | s] & ~u != 0:
                ok = False
                break
        if not ok:
            pos[d] += 1
            continue
        inter[d + 1] = inter[d] & v
        if d == n - 1:
            if inter[n] == 0:
                for j in range(n):
                    result[j] = pos[j]
                return result
            pos[d] += 1
        else:
            d += 1
            pos[d] = offsets[d]
    return result


_kkm_dfs_jit = _accel.njit(_kkm_dfs)

# leaves x subset-masks per numpy chunk
_CHUNK_CELLS = 1 << 22


def _kkm_scan_numpy(gamma, cand, offsets, n):
    """Vectorised brute force over all assignments, in lexicographic chunks."""
    result = np.full(n, -1, dtype=np.int64)
    radices = [int(offsets[j + 1] - offsets[j]) for j in range(n)]
    total = 1
    for r in radices:
        total *= r
    if total == 0:
        return result
    n_sub = 1 << n
    chunk = max(1, _CHUNK_CELLS // n_sub)
    gamma = np.asarray(gamma, dtype=np.int64)
    for start in range(0, total, chunk):
        stop = min(total, start + chunk)
        digits = np.unravel_index(np.arange(start, stop, dtype=np.int64), radices)
        values = np.stack(
            [cand[offsets[j] + digits[j]] for j in range(n)], axis=1
        )
        m = stop - start
        union = np.zeros((m, n_sub), dtype=np.int64)
        for j in range(n):
            base = 1 << j
            union[:, base:2 * base] = union[:, :base] | values[:, j:j + 1]
        covered = np.all((gamma[None, 1:] & ~union[:, 1:]) == 0, axis=1)
        empty = np.bitwise_and.reduce(values, axis=1) == 0
        hits = np.flatnonzero(covered & empty)
        if hits.size:
            k = hits[0]
            for j in range(n):
                result[j] = offsets[j] + digits[j][k]
            return result
    return result


def kkm_search(gamma, cand, offsets, n, backend=None):
    """Dispatch to the compiled DFS or the numpy scan.

    ``backend`` is ``"numba"``, ``"numpy"``, ``"python"`` (uncompiled DFS) or
    ``None`` for the default chosen by :mod:`kkmgame._accel`.
    """
    gamma = np.ascontiguousarray(gamma, dtype=np.int64)
    cand = np.ascontiguousarray(cand, dtype=np.int64)
    offsets = np.ascontiguousarray(offsets, dtype=np.int64)
    if backend is None:
        backend = "numba" if _accel.USE_NUMBA and _kkm_dfs_jit is not None else "numpy"
    if backend == "numba":
        if _kkm_dfs_jit is None:
            raise RuntimeError("numba backend requested but numba is unavailable")
        return _kkm_dfs_jit(gamma, cand, offsets, n)
    if backend == "numpy":
        return _kkm_scan_numpy(gamma, cand, offsets, n)
    if backend == "python":
        return _kkm_dfs(gamma, cand, offsets, n)
    raise ValueError(f"unknown backend {backend!r}")



def _cands_for(gamma, n, allowed):
    counts = np.zeros(n + 1, dtype=np.int64)
    for j in range(n):
        g = gamma[1 << j]
        for v in allowed:
            if v & g == g:
                counts[j + 1] += 1
    offsets = np.cumsum(counts)
    cand = np.empty(offsets[n], dtype=np.int64)
    k = 0
    for j in range(n):
        g = gamma[1 << j]
        for v in allowed:
            if v & g == g:
                cand[k] = v
                k += 1
    return cand, offsets


def _make_census(dfs, cands_for, wrap):
    """Build the census loop over a given DFS; ``wrap`` compiles (or not)."""

    def holds(gamma, n, allowed):
        common = -1
        for j in range(n):
            common &= gamma[1 << j]
        if common != 0:
            return True
        cand, offsets = cands_for(gamma, n, allowed)
        return dfs(gamma, cand, offsets, n)[0] < 0

    holds = wrap(holds)

    def census(n_points, n_seeds, allowed):
        full = (1 << n_points) - 1
        n_sub = 1 << n_seeds
        total = full ** (n_sub - 1)
        gamma = np.zeros(n_sub, dtype=np.int64)
        sub_gamma = np.zeros(n_sub, dtype=np.int64)
        idx = np.empty(n_seeds, dtype=np.int64)
        n_holds = 0
        violations = 0
        first = -1
        for t in range(total):
            r = t
            for a in range(1, n_sub):
                gamma[a] = r % full + 1
                r //= full
            if not holds(gamma, n_seeds, allowed):
                continue
            n_holds += 1
            for s in range(1, n_sub - 1):
                # restrict to the seeds in mask s, re-indexed in order
                m = 0
                for j in range(n_seeds):
                    if s >> j & 1:
                        idx[m] = j
                        m += 1
                for b in range(1, 1 << m):
                    a = 0
                    for q in range(m):
                        if b >> q & 1:
                            a |= 1 << idx[q]
                    sub_gamma[b] = gamma[a]
                if not holds(sub_gamma[: 1 << m], m, allowed):
                    violations += 1
                    if first < 0:
                        first = t
                    break
        return total, n_holds, violations, first

    return wrap(census)


_structure_census_py = _make_census(_kkm_dfs, _cands_for, lambda f: f)
_structure_census_jit = (
    None if _kkm_dfs_jit is None
    else _make_census(_kkm_dfs_jit, _accel.njit(_cands_for), _accel.njit)
)


def structure_census(n_points, n_seeds, allowed, backend=None):
    """Every structure table with ``n_seeds`` seeds over one topology
    (``allowed``: its closed or open masks).

    Returns ``(tables, holds, violations, first_violation)`` where a violation
    is a table satisfying the principle with some seed restriction that does
    not; ``first_violation`` is the table index or -1.
    """
    allowed = np.ascontiguousarray(sorted(int(a) for a in allowed), dtype=np.int64)
    if backend is None:
        backend = "numba" if _accel.USE_NUMBA and _structure_census_jit is not None else "python"
    if backend == "numba":
        return _structure_census_jit(n_points, n_seeds, allowed)
    return _structure_census_py(n_points, n_seeds, allowed)
