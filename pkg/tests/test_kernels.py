"""The numba kernels and the numpy fallback must agree bit for bit."""
import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from soficlab import kernels
from soficlab.kernels import _numba as nb
from soficlab.kernels import _numpy as npk
from soficlab.perm import Permutation, all_permutations, word_eval
from soficlab.stability import baumslag_solitar, commutator, higman, thompson_f

PRESENTATIONS = [higman(), thompson_f(), commutator(), baumslag_solitar(2, 3)]


def random_tuples(rng, B, g, n):
    return np.stack([np.stack([rng.permutation(n) for _ in range(g)]) for _ in range(B)])


def test_backend_selected():
    assert kernels.BACKEND in ("numba", "numpy")


@pytest.mark.parametrize("p", PRESENTATIONS, ids=lambda p: p.name)
def test_relator_moved_parity_and_oracle(p, rng):
    codes, offs = p.encode()
    t = random_tuples(rng, 40, p.num_gens, 7)
    a, b = npk.relator_moved(t, codes, offs), nb.relator_moved(t, codes, offs)
    assert np.array_equal(a, b)
    for i in range(5):
        perms = [Permutation(r) for r in t[i]]
        for k, r in enumerate(p.relators):
            assert word_eval(r, perms).moved_points() == a[i, k]


@pytest.mark.parametrize("p", PRESENTATIONS, ids=lambda p: p.name)
def test_tuple_energy_parity(p, rng):
    codes, offs = p.encode()
    t = random_tuples(rng, 100, p.num_gens, 6)
    assert np.array_equal(npk.tuple_energy(t, codes, offs), nb.tuple_energy(t, codes, offs))


def test_moved_counts_parity(rng):
    t = random_tuples(rng, 30, 3, 9)
    assert np.array_equal(npk.moved_counts(t), nb.moved_counts(t))


@settings(max_examples=60, deadline=None)
@given(st.integers(1, 7), st.sampled_from([2, 3, 5, 7]), st.integers(0, 2**32 - 1))
def test_rank_parity(n, p, seed):
    rng = np.random.default_rng(seed)
    m = rng.integers(0, p, size=(n, n))
    if n > 1 and seed % 2:
        m[-1] = (m[0] + m[1]) % p
    assert npk.rank_mod_p(m, p) == nb.rank_mod_p(m, p)


def test_count_colorings_parity(rng):
    for _ in range(10):
        n, k, f = int(rng.integers(2, 9)), int(rng.integers(2, 4)), int(rng.integers(1, 3))
        idx = np.stack([rng.permutation(n) for _ in range(f)], axis=1)
        allowed = rng.random(k ** f) < 0.7
        mg = int(rng.integers(0, n + 1))
        assert npk.count_pattern_colorings(k, n, idx, allowed, mg) == nb.count_pattern_colorings(k, n, idx, allowed, mg)


def test_anneal_parity(rng):
    codes, offs = higman().encode()
    n, steps = 6, 400
    start = random_tuples(rng, 1, 4, n)[0]
    gen = rng.integers(0, 4, steps)
    a = rng.integers(0, n, steps)
    b = (a + rng.integers(1, n, steps)) % n
    u = rng.random(steps)
    x = npk.anneal_run(start, codes, offs, gen, a, b, u, 0.5, 0.995)
    y = nb.anneal_run(start, codes, offs, gen, a, b, u, 0.5, 0.995)
    assert np.array_equal(x[0], y[0]) and np.array_equal(x[2], y[2])
    assert x[1] == y[1] and x[3] == y[3] and x[4] == y[4]


def test_exhaustive_min_parity():
    codes, offs = commutator().encode()
    table = all_permutations(4)
    m = len(table)
    assert npk.exhaustive_min(table, 2, codes, offs, 0, m * m) == nb.exhaustive_min(table, 2, codes, offs, 0, m * m)
    assert npk.exhaustive_min(table, 2, codes, offs, 100, 300) == nb.exhaustive_min(table, 2, codes, offs, 100, 300)
