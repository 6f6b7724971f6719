"""Time the numba and numpy kernel backends on generated and synthetic pentagon sets.

    python benchmarks/bench_kernels.py [--synthetic N] [--repeat R]
"""

from __future__ import annotations

import argparse
import time

import numpy as np

from fairpent import kernels
from fairpent.geometry import regular_polygon
from fairpent.patch import generate_patch


def best_of(fn, repeat):
    fn()  # warm-up, includes numba compilation
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        out = fn()
        times.append(time.perf_counter() - t0)
    return min(times), out


def workloads(V):
    L, A = kernels.polygon_features(V)
    F = np.column_stack([L[:, 2], A[:, 2], A[:, 3]])
    half = len(V) // 2
    return {
        "min_pairwise_dihedral": lambda nb: kernels.min_pairwise_dihedral(L, A, use_numba=nb),
        "min_cross_dihedral": lambda nb: kernels.min_cross_dihedral(L[:half], A[:half], L[half:], A[half:], use_numba=nb),
        "min_pairwise_sidefig": lambda nb: kernels.min_pairwise_sidefig(F, use_numba=nb),
        "first_overlap": lambda nb: kernels.first_overlap(V, use_numba=nb),
    }


def synthetic(n, seed=0):
    """Non-overlapping jittered pentagons on a grid, all near-congruent so pruning cannot skip much."""
    rng = np.random.default_rng(seed)
    base = regular_polygon(5, radius=0.45).vertices
    side = int(np.ceil(np.sqrt(n)))
    cells = np.array([(i % side, i // side) for i in range(n)], dtype=float)
    return base[None] + rng.normal(scale=1e-3, size=(n, 5, 2)) + cells[:, None, :]


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--synthetic", type=int, default=2000)
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args(argv)

    sets = {"patch rings=2": generate_patch(rings=2).vertices, f"synthetic n={args.synthetic}": synthetic(args.synthetic)}
    backends = [False] + ([True] if kernels.HAVE_NUMBA else [])
    print(f"{'dataset':<22} {'kernel':<22} {'numpy [ms]':>11} {'numba [ms]':>11} {'speedup':>8}  same")
    for name, V in sets.items():
        for kname, fn in workloads(V).items():
            res = {nb: best_of(lambda: fn(nb), args.repeat) for nb in backends}
            t_np, out_np = res[False]
            if True in res:
                t_nb, out_nb = res[True]
                print(f"{name:<22} {kname:<22} {1e3 * t_np:11.2f} {1e3 * t_nb:11.2f} {t_np / t_nb:8.1f}  {out_np == out_nb}")
            else:
                print(f"{name:<22} {kname:<22} {1e3 * t_np:11.2f} {'-':>11} {'-':>8}  -")


if __name__ == "__main__":
    main()
