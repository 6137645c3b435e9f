"""Time each hot kernel under the numba and numpy backends.

    python3 benchmarks/bench_kernels.py [--repeat 3] [--scale 1.0]

Numba times exclude compilation (one warm-up call per kernel).
"""
import argparse
import math
import time

import numpy as np

from hiddenforest import _backend, kernels
from hiddenforest.arith import factorize


def cases(scale):
    lo = 10**9
    width = int(4_000_000 * scale)
    primes = kernels.primes_upto(math.isqrt(lo + width))
    xs = list(range(134043, 134047))
    ps, owners = [], []
    for i, x in enumerate(xs):
        for p in factorize(x).primes:
            ps.append(p)
            owners.append(i)
    ps, owners = np.array(ps, dtype=np.int64), np.array(owners, dtype=np.int64)
    mask = np.random.default_rng(0).random(width) < 0.7
    side = int(1500 * math.sqrt(scale))
    N = int(5000 * math.sqrt(scale))
    hist = np.zeros(300 + 1, dtype=np.int64)
    hist[1:] = 1

    def scan():
        run = np.zeros(side, dtype=np.int64)
        return kernels.scan_rows(1, side, 3, 1, side, 1, False, run)

    return {
        "omega_segment": lambda: kernels.omega_segment(lo, lo + width - 1, primes),
        "first_run": lambda: kernels.first_run(mask, 64),
        "hit_mask": lambda: kernels.hit_mask(lo, lo + width - 1, ps, owners, 15),
        "scan_rows": scan,
        "coprime_counts": lambda: kernels.coprime_counts(N),
        "gcd_histogram_step": lambda: kernels.gcd_histogram_step(hist, 300),
    }


def best_of(fn, repeat):
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t0)
    return min(times)


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--scale", type=float, default=1.0)
    args = ap.parse_args()
    backends = ["numpy"] + (["numba"] if _backend.HAVE_NUMBA else [])
    table = {}
    for name in backends:
        with _backend.use_backend(name):
            for kernel, fn in cases(args.scale).items():
                fn()  # warm-up / compile
                table.setdefault(kernel, {})[name] = best_of(fn, args.repeat)
    print(f"{'kernel':<20}" + "".join(f"{b:>12}" for b in backends) + ("     speedup" if len(backends) > 1 else ""))
    for kernel, row in table.items():
        line = f"{kernel:<20}" + "".join(f"{row[b]:>11.4f}s" for b in backends)
        if len(backends) > 1:
            line += f"{row['numpy'] / row['numba']:>11.1f}x"
        print(line)


if __name__ == "__main__":
    main()
