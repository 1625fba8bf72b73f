"""Compiled kernels against the numpy fallback.

    python3 benchmarks/bench_kernels.py [--repeat 5]

Times each kernel on both backends, checks that the results agree and
prints one line per kernel with the speed-up.
"""

import argparse
import time

import numpy as np

from selberg_afe import kernels
from selberg_afe.datum import builtin


def _best(fn, repeat):
    best = float("inf")
    for _ in range(repeat):
        t0 = time.perf_counter()
        out = fn()
        best = min(best, time.perf_counter() - t0)
    return best, out


def cases():
    rng = np.random.default_rng(1)
    z = rng.uniform(0.1, 5, 200) + 1j * rng.uniform(-300, 300, 200)
    a = np.ascontiguousarray(builtin("rankin_selberg_delta").coefficients(20_000))
    w = np.linspace(1, 0, a.size)
    return {
        "loggamma (200 points)": lambda k: k.loggamma(z),
        "power_sums (l<=8, N=5000)": lambda k: k.power_sums(z[:4], 8, 5000),
        "dirichlet_sums (m<=4, N=20000)": lambda k: k.dirichlet_sums(a, 0.5 + 400j, 4),
        "dirichlet_sums weighted": lambda k: k.dirichlet_sums(a, 0.5 + 400j, 4, w),
    }


def main():
    p = argparse.ArgumentParser()
    p.add_argument("--repeat", type=int, default=5)
    args = p.parse_args()
    impls = kernels.backends()
    if "cython" not in impls:
        print("compiled extension not built; only the numpy fallback is available")
    print(f"{'kernel':34s} {'python [ms]':>12s} {'cython [ms]':>12s} {'speed-up':>9s} "
          f"{'max rel diff':>13s}")
    for name, fn in cases().items():
        tp, ref = _best(lambda: fn(impls["python"]), args.repeat)
        if "cython" in impls:
            tc, out = _best(lambda: fn(impls["cython"]), args.repeat)
            diff = np.max(np.abs(np.asarray(out) - ref) / np.maximum(np.abs(ref), 1e-300))
            print(f"{name:34s} {1e3 * tp:12.2f} {1e3 * tc:12.2f} {tp / tc:9.1f} {diff:13.2e}")
        else:
            print(f"{name:34s} {1e3 * tp:12.2f} {'-':>12s}")


if __name__ == "__main__":
    main()
