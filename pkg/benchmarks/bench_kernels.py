"""Benchmark the compiled dilogarithm kernels against the NumPy fallback.

Usage: python benchmarks/bench_kernels.py [N]

Times li2 and bloch_wigner on N random complex points with both backends
and reports throughput plus the maximum pointwise disagreement.
"""

import sys
import time

import numpy as np

from reglab import _slowmath

try:
    from reglab import _fastmath
except ImportError:
    _fastmath = None


def bench(fn, z, repeats=5):
    best = float("inf")
    for _ in range(repeats):
        t0 = time.perf_counter()
        out = fn(z)
        best = min(best, time.perf_counter() - t0)
    return best, out


def main():
    n = int(sys.argv[1]) if len(sys.argv) > 1 else 200_000
    rng = np.random.default_rng(7)
    z = (rng.normal(size=n) + 1j * rng.normal(size=n)) * np.exp(
        rng.uniform(-2, 2, size=n)
    )

    backends = [("numpy fallback", _slowmath)]
    if _fastmath is not None:
        backends.append(("compiled", _fastmath))
    else:
        print("compiled extension not available; benchmarking fallback only")

    results = {}
    for label, mod in backends:
        for name, fn in (("li2", mod.li2_flat), ("bloch_wigner", mod.bw_flat)):
            t, out = bench(fn, z)
            results[(label, name)] = (t, out)
            print(f"{label:16s} {name:13s} {n / t / 1e6:8.2f} Mpts/s  ({t * 1e3:8.2f} ms)")

    if _fastmath is not None:
        for name in ("li2", "bloch_wigner"):
            a = results[("numpy fallback", name)][1]
            b = results[("compiled", name)][1]
            print(f"max |fallback - compiled| for {name}: {np.max(np.abs(a - b)):.3e}")
        t_slow = results[("numpy fallback", "bloch_wigner")][0]
        t_fast = results[("compiled", "bloch_wigner")][0]
        print(f"bloch_wigner speedup: {t_slow / t_fast:.2f}x")


if __name__ == "__main__":
    main()
