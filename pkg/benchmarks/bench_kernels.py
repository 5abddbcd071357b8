"""Benchmark the compiled kernels against the pure-NumPy fallback.

Run: python benchmarks/bench_kernels.py [--repeat N]
"""

from __future__ import annotations

import argparse
import time

import numpy as np

from figmine.features.patches import EPS_CONTRAST
from figmine.kernels import get_backend


def bench(fn, repeat):
    best = float("inf")
    for _ in range(repeat):
        t0 = time.perf_counter()
        out = fn()
        best = min(best, time.perf_counter() - t0)
    return best, out


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()

    try:
        compiled = get_backend("compiled")
    except Exception as e:
        print(f"compiled backend unavailable ({e}); nothing to compare")
        return
    numpy_b = get_backend("numpy")
    rng = np.random.default_rng(0)

    # smo_solve: one binary problem on an RBF kernel matrix
    n = 600
    X = rng.standard_normal((n, 12))
    y = np.where(X[:, 0] + 0.3 * rng.standard_normal(n) > 0, 1.0, -1.0)
    d2 = ((X[:, None, :] - X[None, :, :]) ** 2).sum(axis=2)
    K = np.exp(-0.5 * d2)
    rows = [("kernel", "compiled", "numpy", "speedup")]

    t_c, out_c = bench(lambda: compiled.smo_solve(K, y, 10.0, 1e-3, 100000), args.repeat)
    t_n, out_n = bench(lambda: numpy_b.smo_solve(K, y, 10.0, 1e-3, 100000), args.repeat)
    assert np.allclose(out_c[0], out_n[0]) and out_c[2] == out_n[2]
    rows.append(("smo_solve", f"{t_c:.4f}s", f"{t_n:.4f}s", f"{t_n / t_c:.1f}x"))

    # assign_nearest: patch-to-centroid assignment at codebook scale
    P = rng.standard_normal((200000, 36))
    C = rng.standard_normal((200, 36))
    t_c, a_c = bench(lambda: compiled.assign_nearest(P, C), args.repeat)
    t_n, a_n = bench(lambda: numpy_b.assign_nearest(P, C), args.repeat)
    assert np.array_equal(a_c, a_n)
    rows.append(("assign_nearest", f"{t_c:.4f}s", f"{t_n:.4f}s", f"{t_n / t_c:.1f}x"))

    # encode_histogram: dense patch histogram for one normalized image
    img = rng.random((128, 128))
    mean = rng.standard_normal(36) * 0.01
    W = np.eye(36) + 0.01 * rng.standard_normal((36, 36))
    t_c, h_c = bench(
        lambda: compiled.encode_histogram(img, mean, W, C, 6, EPS_CONTRAST), args.repeat
    )
    t_n, h_n = bench(
        lambda: numpy_b.encode_histogram(img, mean, W, C, 6, EPS_CONTRAST), args.repeat
    )
    assert np.array_equal(h_c, h_n)
    rows.append(("encode_histogram", f"{t_c:.4f}s", f"{t_n:.4f}s", f"{t_n / t_c:.1f}x"))

    widths = [max(len(r[i]) for r in rows) for i in range(4)]
    for r in rows:
        print("  ".join(v.ljust(w) for v, w in zip(r, widths)))


if __name__ == "__main__":
    main()
