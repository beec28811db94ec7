"""Time the compiled and pure-Python series kernels on the same workloads.

Run with ``python3 benchmarks/bench_kernels.py [--repeat N]``.
"""

from __future__ import annotations

import argparse
import timeit
from fractions import Fraction as F

from levicivita import _kernels
from levicivita.core import embed_real, inverse, make_dq, nth_root

d = make_dq(1)
x = sum((F(k + 1, k + 2) * make_dq(F(k, 3)) for k in range(12)), embed_real(3))
y = 1 - d + F(1, 3) * make_dq(F(1, 2))

WORKLOADS = {
    "mul (12 x 12 terms)": lambda: x * x,
    "power (1+d)^20": lambda: (1 + d) ** 20,
    "inverse to order 24": lambda: inverse(y, 24),
    "sqrt to order 16": lambda: nth_root(1 + d, 2, 16),
}


def run(repeat):
    backends = _kernels.available()
    rows = []
    for name, fn in WORKLOADS.items():
        times = {}
        for b in backends:
            _kernels.use_backend(b)
            n, _ = timeit.Timer(fn).autorange()
            times[b] = min(timeit.repeat(fn, number=n, repeat=repeat)) / n
        rows.append((name, times))
    return backends, rows


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args()
    prev = _kernels.BACKEND
    try:
        backends, rows = run(args.repeat)
    finally:
        _kernels.use_backend(prev)
    head = f"{'workload':<24}" + "".join(f"{b + ' (us)':>16}" for b in backends)
    if "cython" in backends:
        head += f"{'speedup':>10}"
    print(head)
    for name, t in rows:
        line = f"{name:<24}" + "".join(f"{t[b] * 1e6:>16.1f}" for b in backends)
        if "cython" in backends:
            line += f"{t['python'] / t['cython']:>9.2f}x"
        print(line)
    if "cython" not in backends:
        print("compiled kernels not built; only the pure-Python backend was timed")


if __name__ == "__main__":
    main()
