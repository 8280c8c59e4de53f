"""Compare the numba kernels against the numpy fallback.

    python3 benchmarks/bench_kernels.py [--repeat 5] [--quick]

Each case checks that both backends return the same result before timing.
The first numba call is excluded (compilation is cached on disk anyway).
"""
import argparse
import time

import numpy as np

from soficlab.kernels import _numba as nb
from soficlab.kernels import _numpy as npk
from soficlab.perm import all_permutations
from soficlab.stability import commutator, higman


def best_of(fn, repeat):
    times = []
    for _ in range(repeat):
        t = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t)
    return min(times)


def cases(quick):
    rng = np.random.default_rng(0)
    h_codes, h_off = higman().encode()
    c_codes, c_off = commutator().encode()
    n = 12
    B = 2000 if quick else 20000
    tuples = np.stack([np.stack([rng.permutation(n) for _ in range(4)]) for _ in range(B)])
    yield "tuple_energy higman", lambda k: k.tuple_energy(tuples, h_codes, h_off)

    table = all_permutations(5 if quick else 6)
    m = len(table)
    yield "exhaustive_min commutator", lambda k: k.exhaustive_min(table, 2, c_codes, c_off, 0, m * m)

    steps = 2000 if quick else 20000
    start = np.stack([rng.permutation(n) for _ in range(4)]).astype(np.int64)
    gen = rng.integers(0, 4, steps)
    a = rng.integers(0, n, steps)
    b = (a + rng.integers(1, n, steps)) % n
    u = rng.random(steps)
    yield "anneal_run higman", lambda k: k.anneal_run(start, h_codes, h_off, gen, a, b, u, 0.5, 0.995)[:2]

    k_, nn = 2, (14 if quick else 18)
    idx = np.stack([(np.arange(nn) - g) % nn for g in range(2)], axis=1)
    allowed = np.array([True, True, True, False])
    yield "count_pattern_colorings golden", lambda k: k.count_pattern_colorings(k_, nn, idx, allowed, nn)

    dim = 80 if quick else 200
    mat = rng.integers(0, 3, size=(dim, dim))
    yield "rank_mod_p", lambda k: k.rank_mod_p(mat, 3)


def same(x, y):
    if isinstance(x, tuple):
        return all(same(a, b) for a, b in zip(x, y))
    return np.array_equal(np.asarray(x), np.asarray(y))


def main():
    ap = argparse.ArgumentParser(description=__doc__.split("\n")[0])
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--quick", action="store_true")
    args = ap.parse_args()
    print(f"{'case':34s} {'numpy [s]':>10s} {'numba [s]':>10s} {'speedup':>8s}")
    for name, fn in cases(args.quick):
        ref = fn(npk)
        got = fn(nb)  # also triggers compilation
        if not same(ref, got):
            raise SystemExit(f"backends disagree on {name}")
        t_np = best_of(lambda: fn(npk), args.repeat)
        t_nb = best_of(lambda: fn(nb), args.repeat)
        print(f"{name:34s} {t_np:10.4f} {t_nb:10.4f} {t_np / t_nb:8.1f}x")


if __name__ == "__main__":
    main()
