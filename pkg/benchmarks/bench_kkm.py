"""Compare the compiled and numpy KKM kernels.

The workload is the worst case for the search: a constant structure on a
discrete topology, checked with shortcuts disabled, so every candidate
family is visited (``2**(n*(n-1))`` of them on ``n`` points).

    python3 benchmarks/bench_kkm.py [--max-points 5] [--repeat 3]
"""
from __future__ import annotations

import argparse
import time

from kkmgame import AbstractConvexSpace, FiniteTopology, _accel, _kernels, check_kkm_principle
from kkmgame.convex import _check_kkm_cached


def best_time(fn, repeat):
    best = float("inf")
    for _ in range(repeat):
        _check_kkm_cached.cache_clear()
        t = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t)
    return best


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--max-points", type=int, default=5)
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args(argv)

    backends = ["numpy"]
    if _kernels._kkm_dfs_jit is not None:
        backends.insert(0, "numba")
        # compile outside the timed region
        pts = (0, 1)
        check_kkm_principle(AbstractConvexSpace.constant(pts, 0), FiniteTopology.discrete(pts),
                            exhaustive=True, backend="numba")
    else:
        print("numba not installed; timing the numpy path only")
    print(f"default backend: {'numba' if _accel.USE_NUMBA else 'numpy'}")

    header = f"{'points':>6} {'families':>12} " + " ".join(f"{b + ' (s)':>12}" for b in backends)
    print(header + ("  speedup" if len(backends) == 2 else ""))
    for n in range(2, args.max_points + 1):
        pts = tuple(range(n))
        space = AbstractConvexSpace.constant(pts, 0)
        topo = FiniteTopology.discrete(pts)
        times = []
        for b in backends:
            def run(b=b):
                v = check_kkm_principle(space, topo, exhaustive=True, backend=b, cap=1 << 30)
                assert v.holds
            times.append(best_time(run, args.repeat))
        row = f"{n:>6} {2 ** (n * (n - 1)):>12} " + " ".join(f"{t:>12.5f}" for t in times)
        if len(times) == 2:
            row += f"  {times[1] / times[0]:7.1f}x"
        print(row)


if __name__ == "__main__":
    main()
