#!/usr/bin/env python3
"""Benchmark the compiled gain kernels against the numpy fallback.

Times ``gain_into`` for every measure over a large xi buffer, which is the
per-bin hot path of the denoiser, plus one realistic frame-sized case.

Usage:
    python3 benchmarks/bench_gains.py [--size 1000000] [--repeats 20]
"""

import argparse
import time

import numpy as np

from riskshrink import _gains_py
from riskshrink.shrinkage import BACKEND, ShrinkageKind, _KIND_ID

try:
    from riskshrink import _gains
except ImportError:
    _gains = None


def _time_backend(impl, kind_id, xi, out, repeats):
    best = float("inf")
    for _ in range(repeats):
        t0 = time.perf_counter()
        impl.gain_into(kind_id, xi, 1.75, out)
        best = min(best, time.perf_counter() - t0)
    return best


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--size", type=int, default=1_000_000)
    parser.add_argument("--repeats", type=int, default=20)
    args = parser.parse_args()

    if _gains is None:
        print("compiled backend not built; run pip install -e . first")
        return 1

    rng = np.random.default_rng(0)
    print(f"active backend at import: {BACKEND}")
    for size, label in ((args.size, "bulk"), (320, "one frame")):
        xi = 10.0 ** rng.uniform(-4.0, 6.0, size)
        out = np.empty_like(xi)
        print(f"\n{label}: {size} bins, best of {args.repeats}")
        print(f"{'kind':<10s} {'compiled':>12s} {'numpy':>12s} {'speedup':>9s}")
        for kind in ShrinkageKind:
            kid = _KIND_ID[kind]
            t_c = _time_backend(_gains, kid, xi, out, args.repeats)
            t_p = _time_backend(_gains_py, kid, xi, out, args.repeats)
            print(
                f"{kind.value:<10s} {t_c * 1e3:>10.3f}ms {t_p * 1e3:>10.3f}ms "
                f"{t_p / t_c:>8.1f}x"
            )
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
