"""Timing comparison of the compiled kernel extension vs the numpy
fallback on the three hot kernels (polynomial evaluation, log-norm,
Fubini-Study pullback density).

Run: python benchmarks/bench_kernels.py [--nodes 4096] [--degree 8] [--m 3]
"""
import argparse
import importlib
import os
import sys
import time

import numpy as np


def load_backends():
    os.environ.pop("DISCENV_PURE_PYTHON", None)
    import discenv.kernels as fast

    importlib.reload(fast)
    if fast.BACKEND != "cython":
        print("warning: compiled extension unavailable; comparing numpy "
              "against itself", file=sys.stderr)
    from discenv import _kernels_np as slow

    return fast, slow


def bench(fn, args, repeats: int = 50) -> float:
    fn(*args)  # warm up
    best = float("inf")
    for _ in range(repeats):
        t0 = time.perf_counter()
        fn(*args)
        best = min(best, time.perf_counter() - t0)
    return best


def main() -> int:
    ap = argparse.ArgumentParser()
    ap.add_argument("--nodes", type=int, default=4096)
    ap.add_argument("--degree", type=int, default=8)
    ap.add_argument("--m", type=int, default=3)
    ap.add_argument("--repeats", type=int, default=50)
    args = ap.parse_args()

    fast, slow = load_backends()
    rng = np.random.default_rng(0)
    coeffs = rng.standard_normal((args.degree + 1, args.m)) + \
        1j * rng.standard_normal((args.degree + 1, args.m))
    t = np.exp(2j * np.pi * rng.uniform(size=args.nodes)) * \
        rng.uniform(0.1, 1.0, args.nodes)

    print(f"nodes={args.nodes} degree={args.degree} m={args.m} "
          f"(best of {args.repeats})")
    print(f"{'kernel':<12} {'compiled':>12} {'numpy':>12} {'speedup':>9}")
    for name in ("eval_poly", "lognorm", "fs_density"):
        tf = bench(getattr(fast, name), (coeffs, t), args.repeats)
        ts = bench(getattr(slow, name), (coeffs, t), args.repeats)
        print(f"{name:<12} {tf * 1e6:>10.1f}us {ts * 1e6:>10.1f}us "
              f"{ts / tf:>8.2f}x")

    # cross-check agreement while we are here
    for name in ("eval_poly", "lognorm"):
        a = getattr(fast, name)(coeffs, t)
        b = getattr(slow, name)(coeffs, t)
        assert np.allclose(a, b, rtol=1e-12, atol=1e-12), name
    da, sa = fast.fs_density(coeffs, t)
    db, sb = slow.fs_density(coeffs, t)
    assert np.allclose(da, db, rtol=1e-9, atol=1e-12)
    assert np.allclose(sa, sb, rtol=1e-12)
    print("backend agreement OK")
    return 0


if __name__ == "__main__":
    sys.exit(main())
