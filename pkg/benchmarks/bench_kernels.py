"""Benchmark the compiled kernels against their pure-Python fallbacks.

Run: python3 benchmarks/bench_kernels.py
"""

import time

import numpy as np

from valsweep._kernels import BACKEND, _pykernels

if BACKEND == "cython":
    from valsweep._kernels import _cykernels as _fast
else:
    _fast = None


def _time(fn, *args, repeats=5):
    best = float("inf")
    for _ in range(repeats):
        t0 = time.perf_counter()
        out = fn(*args)
        best = min(best, time.perf_counter() - t0)
    return best, out


def bench_gini(n=200_000, seed=0):
    rng = np.random.default_rng(seed)
    vals = np.sort(rng.normal(size=n))
    y = rng.integers(0, 2, size=n).astype(float)
    w = rng.uniform(0.5, 1.5, size=n)
    return ("gini_split_scan",
            (vals, y, w, 20))


def bench_hist(n=200_000, seed=1):
    rng = np.random.default_rng(seed)
    codes = rng.integers(0, 256, size=(n, 20), dtype=np.uint8)
    idx = np.arange(n, dtype=np.int64)
    g = rng.normal(size=n)
    h = rng.uniform(0.1, 0.3, size=n)
    return ("hist_build", (codes, idx, g, h, 256))


def bench_svm(n=4000, d=30, seed=2):
    rng = np.random.default_rng(seed)
    X = np.ascontiguousarray(rng.normal(size=(n, d)))
    y = np.where(rng.random(n) < 0.5, -1.0, 1.0)
    return ("svm_dual_cd", (X, y, np.full(n, 1.0), 1e-6, 50))


def main():
    print(f"active backend: {BACKEND}")
    if _fast is None:
        print("compiled kernels unavailable; nothing to compare")
        return
    print(f"{'kernel':<18}{'python (s)':>12}{'cython (s)':>12}{'speedup':>9}")
    for maker in (bench_gini, bench_hist, bench_svm):
        name, args = maker()
        t_py, out_py = _time(getattr(_pykernels, name), *args)
        t_cy, out_cy = _time(getattr(_fast, name), *args)
        flat = lambda o: np.concatenate(
            [np.ravel(np.asarray(x, dtype=float)) for x in (
                o if isinstance(o, tuple) else (o,))])
        agree = np.allclose(flat(out_py), flat(out_cy), rtol=1e-9, atol=1e-9)
        print(f"{name:<18}{t_py:>12.4f}{t_cy:>12.4f}{t_py / t_cy:>8.1f}x"
              + ("" if agree else "  [MISMATCH]"))


if __name__ == "__main__":
    main()
