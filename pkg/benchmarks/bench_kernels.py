"""Compare the compiled and pure-Python kernels on representative workloads.

    python benchmarks/bench_kernels.py [--repeat 3]

Prints one line per workload with the best wall time of each backend and the
speed-up. Results are checked for equality before timing is reported.
"""

from __future__ import annotations

import argparse
import random
import sys
import time

from abelcover import kernels


def best_time(fn, repeat):
    best = float("inf")
    result = None
    for _ in range(repeat):
        t0 = time.perf_counter()
        result = fn()
        best = min(best, time.perf_counter() - t0)
    return best, result


def workloads():
    rng = random.Random(0)
    fams = []
    for _ in range(200):
        N = rng.randint(6, 12)
        rows = [[rng.randrange(N) for _ in range(7)] for _ in range(3)]
        for r in rows:
            r[-1] = (r[-1] - sum(r)) % N
        fams.append((N, rows))
    yield "dim_sg_raw  200 families N<=12 m=3 s=7", \
        lambda k: [k.dim_sg_raw(N, rows) for N, rows in fams]
    yield "scan_shard  N=6 m=2 s=4 all shards, dim S(G) filter", \
        lambda k: [k.scan_shard(6, 2, 4, first, True) for first in range(1, 36)]
    yield "scan_shard  N=2 m=3 s=6 all shards, dim S(G) filter", \
        lambda k: [k.scan_shard(2, 3, 6, first, True) for first in range(1, 8)]
    yield "hw_terms    p=29 exponents (24,24,20,16) degree 28", \
        lambda k: sorted(k.hw_terms([24, 24, 20, 16], 28, 29, 1))
    yield "hw_terms    p=13 six exponents (12,...,7) degree 24", \
        lambda k: sorted(k.hw_terms([12, 11, 10, 9, 8, 7], 24, 13, -1))


def main(argv=None):
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--repeat", type=int, default=3)
    args = parser.parse_args(argv)
    if kernels.compiled is None:
        print("compiled extension not available; build with `pip install -e .`", file=sys.stderr)
        return 1
    print(f"{'workload':55s} {'cython':>10s} {'python':>10s} {'speed-up':>9s}")
    for name, fn in workloads():
        tc, rc = best_time(lambda: fn(kernels.compiled), args.repeat)
        tp, rp = best_time(lambda: fn(kernels.pure), args.repeat)
        if rc != rp:
            print(f"{name}: backends disagree", file=sys.stderr)
            return 2
        print(f"{name:55s} {tc * 1e3:8.1f}ms {tp * 1e3:8.1f}ms {tp / tc:8.1f}x")
    return 0


if __name__ == "__main__":
    sys.exit(main())
