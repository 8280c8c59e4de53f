from fractions import Fraction
from itertools import product

import pytest
from hypothesis import given, settings, strategies as st

from soficlab.config import CapExceeded, Caps
from soficlab.formula import (CORPUS, Abs, Clamp, Const, Diff, FormulaSyntaxError, Inf, Len, Max,
                              Min, MissingAssignment, Sampled, Scale, Sum, Sup, corpus_asts,
                              evaluate, is_sentence, parse_formula, sentence_series, to_text)
from soficlab.groups import cyclic, named_group, symmetric, symmetric_table
from soficlab.perm import Permutation, block_embed


from oracles import oracle


SMALL = ["C1", "C2", "C5", "C6", "S3", "D4", "Q8", "Q8:op", "C2xC2", "A4"]


def test_parse_examples():
    a = parse_formula("sup x . sup y . len(x*y*x^-1*y^-1)")
    assert a == Sup("x", Sup("y", Len((("x", 1), ("y", 1), ("x", -1), ("y", -1)))))
    assert parse_formula("len(1)") == Len(())
    b = parse_formula("sup x . min(abs(len(x) - 1), len(x))")
    assert isinstance(b, Sup) and isinstance(b.body, Min)


@pytest.mark.parametrize("text", [
    "sup x . len(y)", "sup x . sup x . len(x)", "len(x", "sup sup . len(1)", "2 *", "len(x^)",
    "max()",
])
def test_parse_errors(text):
    with pytest.raises(FormulaSyntaxError):
        parse_formula(text)


def test_error_position():
    with pytest.raises(FormulaSyntaxError) as exc:
        parse_formula("sup x .\n  len(x) $")
    assert exc.value.line == 2


def test_evaluate_examples():
    comm = parse_formula(CORPUS["commutator"])
    assert evaluate(comm, cyclic(6)).value == 0
    assert evaluate(comm, symmetric_table(3)).value == 1
    nz = parse_formula(CORPUS["near_zero_or_one"])
    assert evaluate(nz, symmetric_table(3)).value == Fraction(1, 3)
    assert evaluate(parse_formula("len(1)"), symmetric_table(4)).value == 0


def test_bound_kinds():
    g = symmetric_table(3)
    s = Sampled(4, seed=1)
    assert evaluate(parse_formula("sup x . len(x)"), g, mode=s).bound == "lower"
    assert evaluate(parse_formula("inf x . len(x)"), g, mode=s).bound == "upper"
    assert evaluate(parse_formula("sup x . inf y . len(x*y)"), g, mode=s).bound == "mixed"
    assert evaluate(parse_formula("1 - sup x . len(x)"), g, mode=s).bound == "upper"
    assert evaluate(parse_formula("sup x . len(x)"), g).bound == "exact"


def test_free_variables_need_assignment():
    a = parse_formula("len(x*y)", params=("x", "y"))
    g = symmetric_table(3)
    with pytest.raises(MissingAssignment):
        evaluate(a, g, {"x": 1})
    assert evaluate(a, g, {"x": 1, "y": 1}).value == oracle(a, g, {"x": 1, "y": 1})


def test_enum_cap():
    with pytest.raises(CapExceeded):
        evaluate(parse_formula("sup x . len(x)"), symmetric(8), caps=Caps(enum=5040))


@pytest.mark.parametrize("ref", SMALL)
def test_corpus_matches_oracle(ref):
    g = named_group(ref)
    for name, ast in corpus_asts().items():
        got = evaluate(ast, g).value
        want = oracle(ast, g)
        if g.exact:
            assert got == want, name
        else:
            assert abs(float(got) - float(want)) < 1e-12, name


def test_perm_group_agrees_with_table():
    for name, ast in corpus_asts().items():
        assert evaluate(ast, symmetric(4)).value == evaluate(ast, symmetric_table(4)).value, name


def test_series_examples():
    r = sentence_series(parse_formula("sup x . len(x)"), range(2, 7))
    assert [v for _, v in r["values"]] == [1] * 5
    r = sentence_series(parse_formula(CORPUS["commutator"]), [3, 4, 5])
    assert [v for _, v in r["values"]] == [1, 1, 1]
    r = sentence_series(parse_formula(CORPUS["balanced"]), range(2, 6))
    # min over the Hamming spectrum {0} u {k/n : 2 <= k <= n} of max(l, 1 - l)
    want = [min(max(Fraction(k, n), 1 - Fraction(k, n)) for k in [0] + list(range(2, n + 1)))
            for n in range(2, 6)]
    assert [v for _, v in r["values"]] == want
    assert r["differences"] == [b - a for a, b in zip(want, want[1:])]


def test_sampled_brackets_exact():
    g = symmetric_table(5)
    for text in ("sup x . len(x)", "inf x . max(len(x), 1 - len(x))", CORPUS["near_zero_or_one"]):
        ast = parse_formula(text)
        exact = evaluate(ast, g).value
        r = evaluate(ast, g, mode=Sampled(10, seed=3))
        if r.bound == "lower":
            assert r.value <= exact
        else:
            assert r.value >= exact


def test_sampled_deterministic():
    ast = parse_formula("sup x . inf y . len(x*y^2)")
    g = symmetric(6)
    a = evaluate(ast, g, mode=Sampled(8, seed=5)).value
    b = evaluate(ast, g, mode=Sampled(8, seed=5)).value
    assert a == b


def test_commutator_sentence_under_block_embedding():
    # phi on S_n versus phi on the image of S_n inside S_{kn + r}
    ast = parse_formula(CORPUS["commutator"])
    for n, N in ((3, 7), (3, 10), (4, 9)):
        k = N // n
        base = symmetric_table(n)
        imgs = [block_embed(p, N).images for p in base.payload]
        from soficlab.groups import table_from_perms
        sub = table_from_perms(imgs)
        assert abs(evaluate(ast, base).value - evaluate(ast, sub).value) <= Fraction(1, k)


# -- printer round trip --------------------------------------------------------

names = st.sampled_from(["x", "y", "z"])
words = st.lists(st.tuples(names, st.integers(-3, 3).filter(bool)), max_size=4).map(tuple)
rationals = st.fractions(min_value=-3, max_value=3, max_denominator=6)


def trees(depth):
    leaf = st.one_of(words.map(Len), rationals.map(lambda q: Const(abs(q))))
    if depth == 0:
        return leaf
    sub = trees(depth - 1)
    return st.one_of(
        leaf,
        st.lists(sub, min_size=1, max_size=3).map(lambda a: Max(tuple(a))),
        st.lists(sub, min_size=1, max_size=3).map(lambda a: Min(tuple(a))),
        st.tuples(sub, sub).map(lambda t: Sum(*t)),
        st.tuples(sub, sub).map(lambda t: Diff(*t)),
        st.tuples(rationals.filter(lambda q: q > 0), sub).map(lambda t: Scale(*t)),
        sub.map(Abs), sub.map(Clamp),
        st.tuples(names, sub).map(lambda t: Sup(*t)),
        st.tuples(names, sub).map(lambda t: Inf(*t)),
    )


def close_over(node):
    # bind every free variable so the tree is a sentence, without duplicates
    from soficlab.formula import free_variables
    for v in sorted(free_variables(node)):
        node = Sup(v, node)
    return node


def has_duplicate_binder(node, bound=frozenset()):
    from soficlab.formula.ast import children
    if isinstance(node, (Sup, Inf)):
        if node.var in bound:
            return True
        bound = bound | {node.var}
    return any(has_duplicate_binder(c, bound) for c in children(node))


@settings(max_examples=200, deadline=None)
@given(trees(3))
def test_print_parse_round_trip(tree):
    tree = close_over(tree)
    if has_duplicate_binder(tree):
        return
    assert is_sentence(tree)
    assert parse_formula(to_text(tree)) == tree


@settings(max_examples=40, deadline=None)
@given(trees(2))
def test_random_sentences_match_oracle(tree):
    tree = close_over(tree)
    if has_duplicate_binder(tree):
        return
    g = symmetric_table(3)
    assert evaluate(tree, g).value == oracle(tree, g)
