"""Compare the numba and numpy kernel backends on representative workloads.

Run directly: python3 benchmarks/bench_backends.py [--quick]

Each case is timed best-of-N after a warmup call, so numba JIT compilation is
not counted. Both backends promise bit-identical outputs for equal inputs;
the digest column cross-checks that promise on every run.
"""

import argparse
import time

import numpy as np

from topoproj import amst, exact_emst, kernels
from topoproj.vamana import VamanaParams


def bench(fn, warmup=1, repeat=3):
    for _ in range(warmup):
        out = fn()
    best = float("inf")
    for _ in range(repeat):
        t0 = time.perf_counter()
        out = fn()
        best = min(best, time.perf_counter() - t0)
    return best, out


def build_cases(rng, quick):
    n_pairs = 100_000 if quick else 500_000
    n_prim = 1024 if quick else 3000
    n_amst = 400 if quick else 1200
    d = 16

    pts_prim = rng.standard_normal((n_prim, d))
    pts_amst = rng.standard_normal((n_amst, d))
    us = rng.integers(0, n_prim, n_pairs)
    vs = rng.integers(0, n_prim, n_pairs)

    # Each case returns a float digest; sums are cheap next to the kernel work
    # and equal digests mean equal outputs because both backends reduce in the
    # same order.
    return [
        (
            f"pair_dists ({n_pairs // 1000}k pairs, d={d})",
            lambda: float(kernels.get_backend().pair_dists(pts_prim, us, vs).sum()),
        ),
        (
            f"prim_mst (n={n_prim}, d={d})",
            lambda: float(sum(a.sum() for a in kernels.get_backend().prim_mst(pts_prim))),
        ),
        (
            f"exact_emst (n={n_prim}, d={d})",
            lambda: float(exact_emst(pts_prim).ws.sum()),
        ),
        (
            f"amst R=24 L=40 (n={n_amst}, d={d})",
            lambda: float(amst(pts_amst, VamanaParams(R=24, L=40), seed=0).ws.sum()),
        ),
    ]


def main():
    ap = argparse.ArgumentParser(description="benchmark the kernel backends")
    ap.add_argument("--quick", action="store_true", help="smaller sizes, fewer repeats")
    args = ap.parse_args()

    repeat = 2 if args.quick else 3
    cases = build_cases(np.random.default_rng(42), args.quick)

    timings = {}
    digests = {}
    for backend in ("numba", "numpy"):
        try:
            kernels.set_backend(backend)
        except (ValueError, ImportError) as exc:
            print(f"skipping {backend}: {exc}")
            continue
        for label, fn in cases:
            best, digest = bench(fn, warmup=1, repeat=repeat)
            timings[(label, backend)] = best
            digests.setdefault(label, []).append(digest)

    width = max(len(label) for label, _ in cases)
    print(f"{'case':<{width}}  {'numba':>9}  {'numpy':>9}  {'speedup':>8}  match")
    for label, _ in cases:
        t_nb = timings.get((label, "numba"))
        t_np = timings.get((label, "numpy"))
        if t_nb is None or t_np is None:
            continue
        seen = digests[label]
        match = "yes" if all(x == seen[0] for x in seen) else "NO"
        print(f"{label:<{width}}  {t_nb:>8.4f}s  {t_np:>8.4f}s  {t_np / t_nb:>7.1f}x  {match}")


if __name__ == "__main__":
    main()
