import math
from fractions import Fraction
from itertools import product

import numpy as np
import pytest

from soficlab.config import CapExceeded, Caps
from soficlab.entropy import (BUILTIN_SHIFTS, Subshift, amenable_bound_check, box, boundary_ops,
                              cyclic_sofic_map, fibonacci, format_subshift, full_shift, golden_mean,
                              greedy_tiling, h_estimate, interval, lucas, parse_subshift,
                              sofic_entropy_count, word_count, word_counts)
from soficlab.perm import Permutation


def brute_words(Y, n):
    return sum(Y.word_ok(w) for w in product(range(Y.k), repeat=n))


def brute_sofic(perms, k, allowed):
    n, f = perms[0].n, len(perms)
    inv = [s.inverse() for s in perms]
    total = 0
    for c in product(range(k), repeat=n):
        ok = True
        for i in range(n):
            code = 0
            for s in inv:
                code = code * k + c[s(i)]
            if not allowed[code]:
                ok = False
                break
        total += ok
    return total


def test_examples():
    assert word_count(full_shift(2), 5) == 32
    assert word_count(golden_mean(), 5) == 13 == fibonacci(7)
    fixed = BUILTIN_SHIFTS["fixed"]()
    assert word_counts(fixed, 6)[1:] == [1] * 6
    assert h_estimate(fixed, 6).estimate == 0


@pytest.mark.parametrize("name", sorted(BUILTIN_SHIFTS))
def test_counts_against_enumeration(name):
    Y = BUILTIN_SHIFTS[name]()
    nmax = 8 if Y.k == 2 else 6
    assert word_counts(Y, nmax)[1:] == [brute_words(Y, n) for n in range(1, nmax + 1)]


def test_random_shifts_against_enumeration(rng):
    for _ in range(20):
        k = int(rng.integers(2, 4))
        words = {tuple(int(c) for c in rng.integers(0, k, size=int(rng.integers(1, 4))))
                 for _ in range(int(rng.integers(1, 4)))}
        Y = Subshift(k, tuple(sorted(words)))
        assert word_counts(Y, 6)[1:] == [brute_words(Y, n) for n in range(1, 7)]


@pytest.mark.parametrize("k", [2, 3])
def test_full_shift_entropy(k):
    est = h_estimate(full_shift(k), 10)
    assert est.estimate == math.log(k) and est.argmin == 1


def test_golden_fibonacci_and_estimate():
    est = h_estimate(golden_mean(), 25)
    assert est.counts[1:] == [fibonacci(n + 2) for n in range(1, 26)]
    assert abs(est.estimate - math.log((1 + math.sqrt(5)) / 2)) < 0.01
    assert all(a >= b for a, b in zip(est.running, est.running[1:]))
    assert est.estimate >= math.log((1 + math.sqrt(5)) / 2)


def test_boundary_examples():
    F = interval(0, 10)
    m, p, d = boundary_ops(F, [(0,)])
    assert m == p == set(F) and not d
    m, p, d = boundary_ops(F, [(0,), (1,)])
    assert m == set(interval(0, 9)) and p == set(interval(-1, 10)) and len(d) == 2
    _, _, d = boundary_ops(box((5, 5)), [(0, 0), (1, 0)])
    assert len(d) == 10


def test_tiling_examples():
    r = greedy_tiling([(0,)], interval(0, 10), [(0,)])
    assert len(r.tiles) == 10 and r.density == 1 and r.bound == 1
    r = greedy_tiling(interval(0, 3), interval(0, 30), interval(-2, 3))
    assert r.tiles == [(3 * i,) for i in range(10)]
    assert r.density == Fraction(1, 3) and r.boundary_size == 8
    assert r.bound == Fraction(1, 5) - Fraction(8, 30) and r.holds
    r = greedy_tiling(box((2, 2)), box((10, 10)))
    assert r.holds and r.disjoint and r.covers_interior


@pytest.mark.parametrize("m,N", [(2, 30), (2, 100), (3, 30), (3, 100), (4, 17)])
def test_tiling_density(m, N):
    r = greedy_tiling(interval(0, m), interval(0, N))
    assert r.holds and r.disjoint and r.covers_interior


def test_tiling_needs_identity():
    with pytest.raises(ValueError):
        greedy_tiling([(1,)], interval(0, 5))


def test_amenable_bound():
    g = amenable_bound_check(golden_mean(), 2, 12)
    assert g.count_F == fibonacci(14) and g.count_E == 3 and g.holds
    assert amenable_bound_check(BUILTIN_SHIFTS["no000"](), 3, 15).holds
    assert amenable_bound_check(full_shift(2), 2, 10).vacuous


def test_sofic_examples():
    perms = cyclic_sofic_map(range(2), 10)
    full = np.ones(4, dtype=bool)
    assert sofic_entropy_count(perms, 2, full).count == 1024
    _, mask = golden_mean().window_oracle()
    assert sofic_entropy_count(perms, 2, mask).count == 123 == lucas(10)
    _, fmask = BUILTIN_SHIFTS["fixed"]().window_oracle()
    assert sofic_entropy_count(cyclic_sofic_map([0], 8), 2, fmask).count == 1


def test_sofic_against_brute_force(rng):
    for _ in range(15):
        n, k, f = int(rng.integers(2, 8)), int(rng.integers(2, 4)), int(rng.integers(1, 3))
        perms = [Permutation.random(n, rng) for _ in range(f)]
        allowed = rng.random(k ** f) < 0.6
        assert sofic_entropy_count(perms, k, allowed).count == brute_sofic(perms, k, allowed)


def test_sofic_delta_is_monotone():
    perms = cyclic_sofic_map(range(2), 10)
    _, mask = golden_mean().window_oracle()
    counts = [sofic_entropy_count(perms, 2, mask, d).count for d in (0, Fraction(1, 10), Fraction(1, 4))]
    assert counts == sorted(counts) and counts[0] == 123


def test_sofic_cap():
    with pytest.raises(CapExceeded):
        sofic_entropy_count(cyclic_sofic_map([0], 12), 2, np.ones(2, bool), caps=Caps(colorings=1000))


def test_lucas_fibonacci():
    assert [lucas(n) for n in range(8)] == [2, 1, 3, 4, 7, 11, 18, 29]
    assert [fibonacci(n) for n in range(8)] == [0, 1, 1, 2, 3, 5, 8, 13]


def test_subshift_text_round_trip():
    for Y in (golden_mean(), BUILTIN_SHIFTS["no000"](),
              Subshift(2, (), ("0", "1"), frozenset({(0, 0), (0, 1), (1, 0)}))):
        back = parse_subshift(format_subshift(Y))
        assert back.forbidden == Y.forbidden and back.allowed == Y.allowed and back.window == Y.window


def test_bundled_window_file():
    from soficlab import data_path
    Y = parse_subshift(open(data_path("golden_window.txt")).read())
    f, mask = Y.window_oracle()
    assert sofic_entropy_count(cyclic_sofic_map(range(f), 12), 2, mask).count == lucas(12)
