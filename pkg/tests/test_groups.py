from fractions import Fraction
from itertools import permutations

import numpy as np
import pytest

from soficlab.config import CapExceeded, Caps
from soficlab.groups import (TableGroup, abelian_product, alternating, check_length_axioms, cyclic,
                             dihedral, format_table_group, named_group, parse_table_group,
                             quaternion_matrices, symmetric, symmetric_table, table_from_perms,
                             trivial_length, unitary_group)
from soficlab.perm import Permutation

CORPUS_REFS = ["C1", "C2", "C6", "C12", "S3", "S4", "A4", "D4", "D6", "Q8", "Q8:op",
               "C2xC2", "C2xC2xC2", "C3xC3", "S3:trivial"]


@pytest.mark.parametrize("ref", CORPUS_REFS)
def test_length_axioms_on_corpus(ref):
    g = named_group(ref)
    assert check_length_axioms(g).ok


def test_group_orders():
    orders = {"C6": 6, "S4": 24, "A4": 12, "D4": 8, "D6": 12, "Q8": 8, "C2xC3": 6}
    for ref, m in orders.items():
        assert named_group(ref).order == m


def test_table_convention():
    g = symmetric_table(3)
    for a in range(6):
        for b in range(6):
            pa, pb = g.payload[a], g.payload[b]
            assert g.payload[g.table[a, b]] == pa * pb


def test_quaternion_relations():
    g = named_group("Q8")
    assert not g.is_abelian()
    orders = sorted(g.orders().tolist())
    assert orders == [1, 2, 4, 4, 4, 4, 4, 4]


def test_bad_length_is_reported():
    g = cyclic(4).with_lengths([0, 1, 0, 1])
    rep = check_length_axioms(g)
    assert not rep.ok and any("faithful" in v for v in rep.violations)


def test_sampled_axioms_on_perm_group():
    assert check_length_axioms(symmetric(9), samples=500).ok


def test_perm_group_lengths_exact():
    g = symmetric(4)
    el = g.elements()
    assert len(el) == 24
    assert g.length(el[-1]) == Fraction(1)  # 3 2 1 0 moves every point


def test_enum_cap():
    with pytest.raises(CapExceeded):
        symmetric(8).elements(Caps(enum=5040))


def test_table_text_round_trip(tmp_path):
    for ref in ("D4", "C2xC3", "A4"):
        g = named_group(ref)
        t = parse_table_group(format_table_group(g))
        assert np.array_equal(t.table, g.table)
        assert t.lengths == g.lengths
        path = tmp_path / f"{ref}.txt"
        path.write_text(format_table_group(g))
        assert named_group(str(path)).order == g.order


def test_table_requires_group():
    with pytest.raises(ValueError):
        TableGroup(np.array([[0, 1], [1, 1]]), [0, 1])


def test_trivial_length():
    g = trivial_length(symmetric_table(3))
    assert g.lengths == [Fraction(0)] + [Fraction(1)] * 5 or sorted(g.lengths) == [0, 1, 1, 1, 1, 1]


# -- catalog of small groups ----------------------------------------------------

from collections import Counter

from soficlab.smallgroups import (KNOWN_COUNTS, automorphisms, cyclic_extension, element_orders,
                                  isomorphism, small_groups)


def test_small_group_counts():
    c = Counter(g.order for g in small_groups(24))
    assert tuple(c[n] for n in range(1, 25)) == KNOWN_COUNTS


def test_small_groups_pairwise_non_isomorphic():
    gs = small_groups(24)
    for i, g in enumerate(gs):
        for h in gs[i + 1:]:
            if g.order == h.order:
                assert isomorphism(g.table, h.table) is None


def test_small_groups_are_groups():
    for g in small_groups(24):
        t = g.table
        # associativity over all triples
        assert np.array_equal(t[t[:, :, None], np.arange(g.order)[None, None, :]],
                              t[np.arange(g.order)[:, None, None], t[None, :, :]])


def test_catalog_contains_named_groups():
    gs = small_groups(24)
    for ref in ("S4", "A4", "D6", "Q8", "C2xC2xC2", "C3xC3", "D4"):
        h = named_group(ref)
        assert sum(isomorphism(h.table, g.table) is not None for g in gs if g.order == h.order) == 1


def test_automorphism_counts():
    assert len(automorphisms(cyclic(8).table)) == 4
    assert len(automorphisms(symmetric_table(3).table)) == 6
    assert len(automorphisms(named_group("Q8").table)) == 24
    assert len(automorphisms(abelian_product([2, 2, 2]).table)) == 168


def test_element_orders_and_extension():
    assert sorted(element_orders(symmetric_table(3).table).tolist()) == [1, 2, 2, 2, 3, 3]
    c3 = cyclic(3).table
    # C3 extended by the inversion automorphism with t^2 = 1 is S_3
    phi = np.array([0, 2, 1])
    g = cyclic_extension(c3, 2, phi, 0)
    assert isomorphism(g, symmetric_table(3).table) is not None
