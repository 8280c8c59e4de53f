from fractions import Fraction
from itertools import permutations, product

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from soficlab.config import Caps, CapExceeded
from soficlab.perm import (Permutation, block_embed, direct_tensor, format_perm, hamming_distance,
                           hamming_length, parse_perm, tensor_power_perm, word_eval)


def perms(max_n=7):
    return st.integers(1, max_n).flatmap(
        lambda n: st.permutations(list(range(n))).map(Permutation))


def moved(images):
    return sum(1 for i, x in enumerate(images) if i != x)


def test_hamming_examples():
    assert hamming_length(Permutation.identity(7)) == 0
    assert hamming_length(Permutation([1, 0, 2, 3])) == Fraction(1, 2)
    assert hamming_length(Permutation.cycle(5)) == 1


def test_composition_convention():
    s, t = Permutation([1, 2, 0]), Permutation([0, 2, 1])
    st_ = s * t
    assert all(st_(i) == s(t(i)) for i in range(3))


def test_word_eval_examples():
    x, y = Permutation([1, 0, 2]), Permutation([0, 2, 1])
    c = word_eval([(0, 1), (1, 1), (0, -1), (1, -1)], [x, y])
    # brute force x(y(x^-1(y^-1(i))))
    xi, yi = x.inverse(), y.inverse()
    assert list(c.images) == [x(y(xi(yi(i)))) for i in range(3)]
    assert c == Permutation.from_cycles(3, [(0, 2, 1)])
    three = Permutation.cycle(3)
    assert word_eval([(0, 3)], [three]).is_identity()
    assert word_eval([], [three]).is_identity()


def test_word_eval_errors():
    with pytest.raises(IndexError):
        word_eval([(2, 1)], [Permutation.identity(3)])
    with pytest.raises(TypeError):
        word_eval([(0, 1)], [Permutation.identity(3), np.eye(3)])
    with pytest.raises(TypeError):
        word_eval([(0, 1)], [Permutation.identity(3), Permutation.identity(4)])


def test_invalid_permutation():
    for bad in ([0, 0, 1], [1, 2, 3], []):
        with pytest.raises(ValueError):
            Permutation(bad)


def test_tensor_examples():
    assert tensor_power_perm(Permutation.identity(3), 3).is_identity()
    assert hamming_length(tensor_power_perm(Permutation.cycle(3), 2)) == 1
    assert hamming_length(tensor_power_perm(Permutation([1, 0, 2]), 2)) == Fraction(8, 9)
    t2 = Permutation([1, 0])
    assert hamming_length(direct_tensor(t2, Permutation.identity(3))) == 1
    assert hamming_length(direct_tensor(Permutation.identity(2), Permutation([1, 0, 2]))) == Fraction(2, 3)


def test_tensor_power_brute_force():
    # sigma^(x)k on tuples, encoded big-endian, against direct enumeration
    s = Permutation([2, 0, 1, 3])
    k, n = 3, 4
    t = tensor_power_perm(s, k)
    for tup in product(range(n), repeat=k):
        code = sum(c * n ** (k - 1 - j) for j, c in enumerate(tup))
        img = tuple(s(c) for c in tup)
        assert t(code) == sum(c * n ** (k - 1 - j) for j, c in enumerate(img))


def test_block_embed_examples():
    t = Permutation([1, 0])
    assert block_embed(Permutation.identity(3), 10).is_identity()
    assert hamming_length(block_embed(t, 6)) == 1
    assert hamming_length(block_embed(t, 7)) == Fraction(6, 7)
    with pytest.raises(ValueError):
        block_embed(t, 2)


def test_degree_cap():
    with pytest.raises(CapExceeded):
        tensor_power_perm(Permutation.cycle(10), 4, caps=Caps(degree=1000))


@settings(max_examples=60, deadline=None)
@given(perms(6), st.integers(1, 3))
def test_amplification_identity(s, k):
    assert hamming_length(tensor_power_perm(s, k)) == 1 - (1 - hamming_length(s)) ** k


@settings(max_examples=60, deadline=None)
@given(perms(5), perms(5))
def test_direct_tensor_fixed_points(a, b):
    assert 1 - hamming_length(direct_tensor(a, b)) == (1 - hamming_length(a)) * (1 - hamming_length(b))


@settings(max_examples=60, deadline=None)
@given(perms(6), st.integers(7, 40))
def test_block_embed_bound(s, N):
    if N <= s.n:
        return
    k = N // s.n
    assert abs(hamming_length(block_embed(s, N)) - hamming_length(s)) <= Fraction(1, k)


@settings(max_examples=80, deadline=None)
@given(perms(8))
def test_hamming_matches_oracle(s):
    assert hamming_length(s) == Fraction(moved(list(s.images)), s.n)
    assert s.cycle_count() == len(s.cycles())
    assert (s * s.inverse()).is_identity()


@settings(max_examples=60, deadline=None)
@given(perms(8))
def test_text_round_trip(s):
    assert parse_perm(format_perm(s)) == s
    assert parse_perm(format_perm(s).removeprefix("perm ")) == s


def test_hamming_distance_is_bi_invariant():
    rng = np.random.default_rng(0)
    for _ in range(50):
        a, b, c = (Permutation.random(6, rng) for _ in range(3))
        d = hamming_distance(a, b)
        assert d == hamming_length(a * b.inverse())
        assert hamming_distance(c * a, c * b) == d == hamming_distance(a * c, b * c)


def test_exhaustive_s4_axioms():
    ps = [Permutation(p) for p in permutations(range(4))]
    for x in ps:
        for y in ps:
            assert hamming_length(x * y) <= hamming_length(x) + hamming_length(y)
            assert hamming_length(x * y * x.inverse()) == hamming_length(y)


def test_parse_comma_form():
    assert parse_perm("4:1,0,2,3") == parse_perm("perm 4: 1 0 2 3")
