"""Benchmark the compiled kernel-evaluation core against the numpy fallback.

Times kernel_sum -- the hot loop behind every estimator and risk call --
for both backends over a grid of (n, m) shapes, checks they agree to
floating-point tolerance, and prints a speedup table.

Run:  python3 benchmarks/benchmark_backends.py [--threads N]
"""

import argparse
import time

import numpy as np

from gkde import _core_np

try:
    from gkde import _corex
except ImportError:
    _corex = None


def _time_call(fn, xs, b, data, threads, min_repeat=3):
    best = float("inf")
    for _ in range(min_repeat):
        t0 = time.perf_counter()
        out = fn(xs, b, data, threads)
        best = min(best, time.perf_counter() - t0)
    return best, out


def run(threads: int) -> None:
    if _corex is None:
        print("compiled extension not importable; nothing to compare")
        return
    rng = np.random.default_rng(0)
    print(f"{'n':>8} {'m':>6} {'numpy':>10} {'compiled':>10} {'speedup':>8}  max rel diff")
    for n, m in [(1_000, 200), (10_000, 400), (100_000, 400), (100_000, 2_000)]:
        data = rng.gamma(4.0, 0.2, size=n)
        xs = np.linspace(0.0, 3.0, m)
        b = 0.02
        t_np, out_np = _time_call(_core_np.kernel_sum, xs, b, data, threads)
        t_cx, out_cx = _time_call(_corex.kernel_sum, xs, b, data, threads)
        scale = np.maximum(np.abs(out_np), 1e-300)
        rel = float(np.max(np.abs(out_np - out_cx) / scale))
        print(
            f"{n:>8} {m:>6} {t_np * 1e3:>9.1f}ms {t_cx * 1e3:>9.1f}ms "
            f"{t_np / t_cx:>7.1f}x  {rel:.2e}"
        )


if __name__ == "__main__":
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--threads", type=int, default=0, help="0 = all available cores")
    run(ap.parse_args().threads)
