"""Compare the compiled deformation kernels against the pure NumPy fallback.

Usage: python benchmarks/bench_kernels.py [--n 1000000] [--repeat 5]
"""

import argparse
import random
import time

import numpy as np

from ramacity import _kernels_py

try:
    from ramacity import _kernels
except ImportError:
    _kernels = None

D = 5000.0


def make_points(n, seed=7):
    rng = random.Random(seed)
    # pre-converted array: time the kernels, not the list conversion
    return np.array(
        [
            (rng.uniform(-2 * D, 5 * D), rng.uniform(-2 * D, 2 * D), rng.uniform(0, 0.49 * D))
            for _ in range(n)
        ]
    )


def best_of(repeat, fn, *args):
    best = float("inf")
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn(*args)
        best = min(best, time.perf_counter() - t0)
    return best


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--n", type=int, default=1_000_000, help="points for deform_points")
    ap.add_argument("--pairs", type=int, default=1500, help="set size for pairwise_min_sqdist")
    ap.add_argument("--repeat", type=int, default=5, help="timing repeats (best-of)")
    args = ap.parse_args()

    pts = make_points(args.n)
    a = make_points(args.pairs, seed=8)
    b = make_points(args.pairs, seed=9)
    frame = (12.0, -7.0, 0.6, 0.8, D)

    rows = []
    t = best_of(args.repeat, _kernels_py.deform_points, pts, *frame)
    rows.append(("deform_points", "python", args.n, t, args.n / t / 1e6))
    t2 = best_of(args.repeat, _kernels_py.pairwise_min_sqdist, a, b)
    rows.append(("pairwise_min_sqdist", "python", args.pairs**2, t2, args.pairs**2 / t2 / 1e6))

    if _kernels is not None:
        tc = best_of(args.repeat, _kernels.deform_points, pts, *frame)
        rows.append(("deform_points", "cython", args.n, tc, args.n / tc / 1e6))
        tc2 = best_of(args.repeat, _kernels.pairwise_min_sqdist, a, b)
        rows.append(
            ("pairwise_min_sqdist", "cython", args.pairs**2, tc2, args.pairs**2 / tc2 / 1e6)
        )
        got = _kernels.deform_points(pts[:10000], *frame)
        want = _kernels_py.deform_points(pts[:10000], *frame)
        assert (got == want).all(), "backends disagree"
    else:
        print("compiled extension not available; timing pure path only")

    print(f"{'kernel':<22}{'backend':<9}{'items':>10}{'best s':>10}{'M items/s':>12}")
    for name, backend, items, secs, rate in rows:
        print(f"{name:<22}{backend:<9}{items:>10}{secs:>10.4f}{rate:>12.2f}")

    for name in ("deform_points", "pairwise_min_sqdist"):
        sel = {r[1]: r[3] for r in rows if r[0] == name}
        if "cython" in sel:
            print(f"{name}: cython is {sel['python'] / sel['cython']:.1f}x the pure path")


if __name__ == "__main__":
    main()
