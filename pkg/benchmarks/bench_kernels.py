"""Benchmark the compiled kernels against the numpy fallback.

Usage: python benchmarks/bench_kernels.py [n_words]
"""

import sys
import time

import numpy as np

from lpcodec import _kernels_py

try:
    from lpcodec import _kernels
except ImportError:
    _kernels = None


def bench(fn, *args, repeats=5):
    best = float("inf")
    for _ in range(repeats):
        t0 = time.perf_counter()
        fn(*args)
        best = min(best, time.perf_counter() - t0)
    return best


def main():
    n = int(sys.argv[1]) if len(sys.argv) > 1 else 10_000_000
    rng = np.random.default_rng(0)
    words = rng.integers(0, 256, size=n, dtype=np.uint8)
    sm_words = words.copy()
    sm_words[sm_words == 0x80] = 0x7F

    cases = [
        ("xor_msb", lambda impl: impl.xor_msb(words)),
        ("xnor_msb", lambda impl: impl.xnor_msb(words)),
        ("sm_encode", lambda impl: impl.sm_encode(sm_words)),
        ("sm_decode", lambda impl: impl.sm_decode(sm_words)),
        ("xor_const", lambda impl: impl.xor_const(words, 0x80)),
        ("decorrelate", lambda impl: impl.decorrelate(words, 0x00, False)),
        ("decorrelate_xnor", lambda impl: impl.decorrelate(words, 0xFF, True)),
        ("correlate", lambda impl: impl.correlate(words, 0x00, False)),
        ("lane_counts", lambda impl: impl.lane_counts(words)),
    ]

    print(f"{n} words per call, best of 5 (throughput in Gword/s)")
    header = f"{'kernel':<18}{'numpy':>12}{'compiled':>12}{'speedup':>10}"
    print(header)
    print("-" * len(header))
    for name, call in cases:
        t_py = bench(call, _kernels_py)
        line = f"{name:<18}{n / t_py / 1e9:>12.2f}"
        if _kernels is not None:
            t_cy = bench(call, _kernels)
            line += f"{n / t_cy / 1e9:>12.2f}{t_py / t_cy:>9.1f}x"
        else:
            line += f"{'n/a':>12}{'n/a':>10}"
        print(line)


if __name__ == "__main__":
    main()
