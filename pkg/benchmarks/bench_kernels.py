#!/usr/bin/env python3
"""Benchmark the compiled sampling kernels against the numpy fallback.

Runs each kernel on identical inputs, checks that the two backends agree,
and prints a timing table.  Usage:

    python benchmarks/bench_kernels.py [--n 1000000] [--repeat 5]
"""

from __future__ import annotations

import argparse
import time

import numpy as np

from chaos_lab.kernels import _reference

try:
    from chaos_lab.kernels import _fast
except ImportError:
    _fast = None


def best_of(repeat, fn, *args):
    times = []
    for _ in range(repeat):
        start = time.perf_counter()
        fn(*args)
        times.append(time.perf_counter() - start)
    return min(times)


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--n", type=int, default=1_000_000, help="samples per kernel call")
    parser.add_argument("--repeat", type=int, default=5, help="timing repetitions (best-of)")
    args = parser.parse_args()

    if _fast is None:
        print("compiled extension not available; nothing to compare")
        return 1

    rng = np.random.default_rng(0)
    n = args.n

    xi_wide = np.ascontiguousarray(rng.standard_normal((n // 10, 100)))
    lam = np.ascontiguousarray(rng.standard_normal(100) / 10.0)
    xi_combo = np.ascontiguousarray(rng.standard_normal((n, 2)))
    coefs = np.array([1.0, -0.5, 0.25])
    degrees = np.array([[1, 1], [2, 0], [0, 2]], dtype=np.int64)
    x = np.ascontiguousarray(rng.standard_normal(n))

    cases = [
        ("second_chaos_batch (d=100)", "second_chaos_batch", (xi_wide, lam)),
        ("hermite_combo_batch (3 terms)", "hermite_combo_batch", (xi_combo, coefs, degrees)),
        ("power_sums (p=16)", "power_sums", (x, 16)),
        ("bin_counts (202 bins)", "bin_counts", (x, -6.0, 6.0, 200)),
    ]

    print(f"{'kernel':<32} {'numpy':>10} {'cython':>10} {'speedup':>8}")
    for label, name, inputs in cases:
        ref_fn = getattr(_reference, name)
        fast_fn = getattr(_fast, name)
        ref_out = ref_fn(*inputs)
        fast_out = fast_fn(*inputs)
        if name == "bin_counts":
            assert np.array_equal(ref_out, fast_out), f"{name}: backends disagree"
        else:
            np.testing.assert_allclose(ref_out, fast_out, rtol=1e-10, atol=1e-10)
        t_ref = best_of(args.repeat, ref_fn, *inputs)
        t_fast = best_of(args.repeat, fast_fn, *inputs)
        print(f"{label:<32} {t_ref * 1e3:>8.2f}ms {t_fast * 1e3:>8.2f}ms {t_ref / t_fast:>7.2f}x")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
