from fractions import Fraction
from itertools import permutations

import numpy as np
import pytest

from soficlab.groups import abelian_product, cyclic, dihedral, named_group, symmetric_table
from soficlab.perm import Permutation
from soficlab.rankalg import (GroupAlgebraElement, PrimeFieldMatrix, averaging_idempotent,
                              check_rank_axioms, finite_rank_ring_probe, format_group_algebra,
                              frobenius_trace_check, idempotent_trace_check, is_prime,
                              normalized_rank, parse_group_algebra, perm_rank_identity,
                              rank_lower_bound_probe, separated_set, subgroups)


def rank_oracle(a, p):
    """Rank as n minus the kernel dimension, counting kernel vectors by brute force."""
    n = a.shape[0]
    vecs = np.array(np.meshgrid(*[np.arange(p)] * n, indexing="ij")).reshape(n, -1)
    kernel = int(((a @ vecs) % p == 0).all(axis=0).sum())
    return n - round(np.log(kernel) / np.log(p))


def test_is_prime():
    assert [q for q in range(20) if is_prime(q)] == [2, 3, 5, 7, 11, 13, 17, 19]
    assert is_prime(2147483647)


def test_rank_examples():
    assert normalized_rank(PrimeFieldMatrix.identity(4, 3)) == 1
    assert normalized_rank(PrimeFieldMatrix.zeros(4, 3)) == 0
    rows = np.zeros((5, 5), dtype=np.int64)
    rows[0] = [1, 2, 0, 1, 0]
    rows[1] = [0, 1, 1, 0, 2]
    rows[2] = (rows[0] + 2 * rows[1]) % 3
    rows[4] = (2 * rows[0]) % 3
    assert normalized_rank(PrimeFieldMatrix(p=3, entries=rows)) == Fraction(2, 5)


def test_non_prime_rejected():
    with pytest.raises(ValueError):
        PrimeFieldMatrix.identity(3, 4)


@pytest.mark.parametrize("p", [2, 3, 5])
def test_rank_against_kernel_count(p, rng):
    for _ in range(30):
        n = int(rng.integers(1, 5))
        a = rng.integers(0, p, size=(n, n))
        if rng.random() < 0.5:
            a[-1] = (a[0] * int(rng.integers(p))) % p
        assert PrimeFieldMatrix(p=p, entries=a).rank() == rank_oracle(a, p)


@pytest.mark.parametrize("p", [2, 3, 5])
def test_rank_axioms(p, rng):
    for _ in range(40):
        n = int(rng.integers(1, 7))
        x, y = PrimeFieldMatrix.random(n, p, rng), PrimeFieldMatrix.random(n, p, rng)
        if rng.random() < 0.3:
            x = PrimeFieldMatrix.zeros(n, p)
        assert check_rank_axioms(x, y) == []


def test_perm_rank_examples():
    assert perm_rank_identity(Permutation.identity(4), 2)[:2] == (0, 0)
    assert perm_rank_identity(Permutation([1, 2, 3, 0]), 2)[:2] == (Fraction(3, 4),) * 2
    assert perm_rank_identity(Permutation([1, 0, 3, 2]), 5)[:2] == (Fraction(1, 2),) * 2


def test_perm_rank_exhaustive_small():
    for n in range(1, 5):
        for s in permutations(range(n)):
            assert perm_rank_identity(Permutation(s), 3)[2]


def test_rank_probe_examples():
    r = rank_lower_bound_probe([Permutation([1, 2, 0])], [1], 3)
    assert r.bound == 1 and r.value == 1 and r.holds
    c1 = Permutation([1, 2, 3, 4, 5, 0])
    c2 = Permutation([2, 0, 4, 1, 5, 3])
    r = rank_lower_bound_probe([c1, c2], [1, 1], 2)
    assert r.bound == Fraction(1, 4) and r.value >= Fraction(1, 4)


def test_rank_probe_flags_the_coincident_case():
    # two equal fixed-point-free permutations cancel over F_2: the sum is zero
    s = Permutation([1, 0])
    r = rank_lower_bound_probe([s, s], [1, 1], 2)
    assert r.value == 0 and r.bound == Fraction(1, 4) and not r.holds
    # the pairwise form of the bound accounts for the coincidence
    assert r.separation == 1 and r.value >= r.pair_bound


def test_rank_probe_witness_chain(rng):
    for _ in range(300):
        k, n, p = int(rng.integers(1, 5)), int(rng.integers(1, 11)), int(rng.choice([2, 3]))
        perms = [Permutation.random(n, rng) for _ in range(k)]
        lam = [int(v) for v in rng.integers(1, p, size=k)]
        r = rank_lower_bound_probe(perms, lam, p)
        assert r.value >= r.witness >= r.pair_bound
        assert r.holds == (r.value >= r.bound)


def test_separated_set_property(rng):
    for _ in range(50):
        perms = [Permutation.random(9, rng) for _ in range(3)]
        D = separated_set(perms)
        imgs = [s(a) for a in D for s in perms]
        assert len(imgs) == len(set(imgs))


def test_rank_probe_errors():
    with pytest.raises(ValueError):
        rank_lower_bound_probe([Permutation([0, 1])], [2], 2)
    with pytest.raises(ValueError):
        rank_lower_bound_probe([Permutation([0, 1]), Permutation([0])], [1, 1], 3)


def test_finite_rank_ring(rng):
    one = PrimeFieldMatrix.identity(3, 2)
    assert finite_rank_ring_probe([(one, one)]) == 0
    jordan = PrimeFieldMatrix(p=2, entries=np.eye(3, k=1, dtype=np.int64))
    assert finite_rank_ring_probe([(jordan, PrimeFieldMatrix(p=2, entries=jordan.entries.T))]) == 0
    pairs = [(PrimeFieldMatrix.random(4, 3, rng), PrimeFieldMatrix.random(4, 3, rng)) for _ in range(100)]
    assert finite_rank_ring_probe(pairs) == 0


# -- group algebras -------------------------------------------------------------------------

def test_ga_examples():
    s3 = symmetric_table(3)
    e = GroupAlgebraElement.one(s3, 3)
    assert (e.tau(0), e.tau(1)) == (1, 0)
    g = next(x for x in range(6) if s3.orders()[x] == 3)
    a = GroupAlgebraElement.basis(s3, 3, g) + GroupAlgebraElement.basis(s3, 3, int(s3.table[g, g]))
    assert a.tau(1) == 2
    c4 = cyclic(4)
    x = GroupAlgebraElement.basis(c4, 2, 1)
    assert x * GroupAlgebraElement.basis(c4, 2, int(c4.inverse(1))) == GroupAlgebraElement.one(c4, 2)


def test_ga_mismatch():
    with pytest.raises(ValueError):
        GroupAlgebraElement.one(cyclic(3), 2) + GroupAlgebraElement.one(cyclic(3), 3)


def dense_mul(a, b):
    """Convolution through dense coefficient vectors."""
    g, p = a.group, a.p
    va, vb = np.zeros(g.order, dtype=np.int64), np.zeros(g.order, dtype=np.int64)
    for k, c in a.coeffs.items():
        va[k] = c
    for k, c in b.coeffs.items():
        vb[k] = c
    out = np.zeros(g.order, dtype=np.int64)
    for x in range(g.order):
        for y in range(g.order):
            out[g.table[x, y]] += va[x] * vb[y]
    return {k: int(c) % p for k, c in enumerate(out) if c % p}


def test_ga_convolution_oracle(rng):
    g = named_group("D4")
    for p in (2, 3):
        for _ in range(20):
            a = GroupAlgebraElement.random(g, p, rng)
            b = GroupAlgebraElement.random(g, p, rng)
            assert (a * b).coeffs == dense_mul(a, b)


GROUPS = {"C6": lambda p: cyclic(6), "S3": lambda p: symmetric_table(3),
          "D4": lambda p: dihedral(4), "CpxCp": lambda p: abelian_product([p, p])}


@pytest.mark.parametrize("p", [2, 3, 5])
@pytest.mark.parametrize("name", sorted(GROUPS))
def test_frobenius(name, p, rng):
    g = GROUPS[name](p)
    for _ in range(15):
        a = GroupAlgebraElement.random(g, p, rng)
        b = GroupAlgebraElement.random(g, p, rng)
        assert frobenius_trace_check(a, b).ok


def test_frobenius_single_term():
    g = dihedral(4)
    a = GroupAlgebraElement.basis(g, 3, 5, 2)
    r = frobenius_trace_check(a, GroupAlgebraElement.zero(g, 3))
    assert r.ok


def test_idempotent_examples():
    s3 = symmetric_table(3)
    assert idempotent_trace_check(GroupAlgebraElement.one(s3, 2)).traces[0] == 1
    assert idempotent_trace_check(GroupAlgebraElement.zero(s3, 2)).ok
    H = next(h for h in subgroups(s3) if len(h) == 3)
    e = averaging_idempotent(s3, H, 2)
    assert e * e == e
    r = idempotent_trace_check(e)
    assert r.ok and r.traces[0] == 1


def test_idempotent_rejects():
    s3 = symmetric_table(3)
    with pytest.raises(ValueError):
        idempotent_trace_check(GroupAlgebraElement.basis(s3, 2, 1))
    with pytest.raises(ValueError):
        averaging_idempotent(s3, next(h for h in subgroups(s3) if len(h) == 2), 2)


def test_subgroups_of_s3():
    assert sorted(len(h) for h in subgroups(symmetric_table(3))) == [1, 2, 2, 2, 3, 6]


def test_galg_text_round_trip():
    g = symmetric_table(3)
    e = averaging_idempotent(g, subgroups(g)[-2], 2)
    back = parse_group_algebra(format_group_algebra(e, "S3"), lambda ref: g)
    assert back == e


def test_orders_follow_the_group_not_its_address():
    # groups of equal order are created and dropped repeatedly; freed ids get reused
    for _ in range(50):
        for make in (lambda: cyclic(6), lambda: symmetric_table(3)):
            g = make()
            x = GroupAlgebraElement.basis(g, 3, 1)
            assert x._orders.tolist() == g.orders().tolist()
