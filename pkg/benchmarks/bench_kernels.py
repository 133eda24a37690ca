"""Compiled-vs-fallback timings for the hot kernels.

Runs each kernel on identical prepared inputs through both backends,
checks they agree, and prints per-call times.  Usage:

    python3 benchmarks/bench_kernels.py [--reps N]
"""

import argparse
import time

import numpy as np

from qpadic import _kernels_py as kpy

try:
    from qpadic import _kernels_cy as kcy
except ImportError:
    kcy = None

from qpadic.kernels import _prepare


def best_of(fn, reps):
    times = []
    for _ in range(reps):
        t0 = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t0)
    return min(times)


def bench_count_mismatch(reps):
    p = 2
    ident = _prepare(p, [(3, 2, 0, 0), (0, 0, 2, -3)], 200_000)
    unit = _prepare(p, [(0, 0, 0, 0)], 200_000)
    dead = _prepare(p, [(1, 2, 0, 0), (0, 0, 2, -3)], 200_000)
    cases = [
        ("count_mismatch pair", lambda impl: impl.count_mismatch(
            ident, unit, False, -200_000, 200_000)),
        ("count_mismatch vs 0", lambda impl: impl.count_mismatch(
            dead, unit, True, -200_000, 200_000)),
    ]
    for name, call in cases:
        want = call(kpy)
        row(name, "400001 pts",
            best_of(lambda: call(kpy), reps),
            None if kcy is None else best_of(lambda: call(kcy), reps))
        if kcy is not None:
            assert call(kcy) == want


def bench_act_fill(reps):
    prep = _prepare(2, [(5, 3, 2, -7)], 500_000)
    i, pm, pn, j = (int(v) for v in prep[0])
    L = 1_000_001
    img_a = np.empty(L, dtype=np.int64)
    alive_a = np.empty(L, dtype=np.uint8)
    img_b = np.empty(L, dtype=np.int64)
    alive_b = np.empty(L, dtype=np.uint8)
    kpy.act_fill(i, pm, pn, j, -500_000, img_a, alive_a)
    row("act_fill", "10^6 pts",
        best_of(lambda: kpy.act_fill(i, pm, pn, j, -500_000, img_a, alive_a), reps),
        None if kcy is None else
        best_of(lambda: kcy.act_fill(i, pm, pn, j, -500_000, img_b, alive_b), reps))
    if kcy is not None:
        assert (img_a == img_b).all() and (alive_a == alive_b).all()


def bench_greedy(reps):
    G = 2**18
    close = np.arange(0, G, 9, dtype=np.int64)

    def run(impl):
        blocked = np.zeros(G, dtype=np.uint8)
        return impl.greedy_count(close.copy(), blocked)

    want = run(kpy)
    row("greedy_count", "G=2^18",
        best_of(lambda: run(kpy), max(1, reps // 4)),
        None if kcy is None else best_of(lambda: run(kcy), reps))
    if kcy is not None:
        assert run(kcy) == want


def row(name, size, t_py, t_c):
    if t_c is None:
        print(f"{name:<22} {size:>10} {t_py * 1e3:>10.2f} ms {'-':>10} {'-':>8}")
    else:
        print(f"{name:<22} {size:>10} {t_py * 1e3:>10.2f} ms "
              f"{t_c * 1e3:>7.2f} ms {t_py / t_c:>7.1f}x")


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--reps", type=int, default=7)
    args = ap.parse_args()
    print(f"{'kernel':<22} {'input':>10} {'fallback':>13} {'compiled':>10} "
          f"{'speedup':>8}")
    if kcy is None:
        print("(compiled extension not importable; fallback only)")
    bench_count_mismatch(args.reps)
    bench_act_fill(args.reps)
    bench_greedy(args.reps)


if __name__ == "__main__":
    main()
