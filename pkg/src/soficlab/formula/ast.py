"""Formula syntax tree and canonical printer."""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator, Union

WordT = tuple[tuple[str, int], ...]


@dataclass(frozen=True)
class Len:
    word: WordT


@dataclass(frozen=True)
class Const:
    value: Fraction


@dataclass(frozen=True)
class Max:
    args: tuple["Node", ...]


@dataclass(frozen=True)
class Min:
    args: tuple["Node", ...]


@dataclass(frozen=True)
class Sum:
    a: "Node"
    b: "Node"


@dataclass(frozen=True)
class Diff:
    a: "Node"
    b: "Node"


@dataclass(frozen=True)
class Scale:
    q: Fraction
    a: "Node"


@dataclass(frozen=True)
class Abs:
    a: "Node"


@dataclass(frozen=True)
class Clamp:
    a: "Node"


@dataclass(frozen=True)
class Sup:
    var: str
    body: "Node"


@dataclass(frozen=True)
class Inf:
    var: str
    body: "Node"


Node = Union[Len, Const, Max, Min, Sum, Diff, Scale, Abs, Clamp, Sup, Inf]
Quant = (Sup, Inf)


def children(node: Node) -> tuple[Node, ...]:
    if isinstance(node, (Max, Min)):
        return node.args
    if isinstance(node, (Sum, Diff)):
        return (node.a, node.b)
    if isinstance(node, (Scale, Abs, Clamp)):
        return (node.a,)
    if isinstance(node, Quant):
        return (node.body,)
    return ()


def walk(node: Node) -> Iterator[Node]:
    yield node
    for c in children(node):
        yield from walk(c)


def free_variables(node: Node, bound: frozenset = frozenset()) -> set[str]:
    if isinstance(node, Len):
        return {v for v, _ in node.word if v not in bound}
    if isinstance(node, Quant):
        return free_variables(node.body, bound | {node.var})
    out: set[str] = set()
    for c in children(node):
        out |= free_variables(c, bound)
    return out


def is_sentence(node: Node) -> bool:
    return not free_variables(node)


def quantifier_kinds(node: Node) -> set[str]:
    return {("sup" if isinstance(n, Sup) else "inf") for n in walk(node) if isinstance(n, Quant)}


def _fmt_q(q: Fraction) -> str:
    q = Fraction(q)
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


def _fmt_word(word: WordT) -> str:
    if not word:
        return "1"
    return "*".join(v if e == 1 else f"{v}^{e}" for v, e in word)


# precedence: 0 quantifier, 1 sum/diff, 2 scale, 3 atom
def _prec(node: Node) -> int:
    if isinstance(node, Quant):
        return 0
    if isinstance(node, (Sum, Diff)):
        return 1
    if isinstance(node, Scale):
        return 2
    return 3


def to_text(node: Node) -> str:
    """Canonical text; ``parse_formula(to_text(a)) == a`` for every tree."""
    if isinstance(node, Len):
        return f"len({_fmt_word(node.word)})"
    if isinstance(node, Const):
        return _fmt_q(node.value)
    if isinstance(node, Max):
        return "max(" + ", ".join(to_text(a) for a in node.args) + ")"
    if isinstance(node, Min):
        return "min(" + ", ".join(to_text(a) for a in node.args) + ")"
    if isinstance(node, Abs):
        return f"abs({to_text(node.a)})"
    if isinstance(node, Clamp):
        return f"clamp({to_text(node.a)})"
    if isinstance(node, Sup):
        return f"sup {node.var} . {to_text(node.body)}"
    if isinstance(node, Inf):
        return f"inf {node.var} . {to_text(node.body)}"
    if isinstance(node, Scale):
        inner = to_text(node.a)
        if _prec(node.a) < 3:
            inner = f"({inner})"
        return f"{_fmt_q(node.q)} * {inner}"
    if isinstance(node, (Sum, Diff)):
        left = to_text(node.a)
        if _prec(node.a) < 1:
            left = f"({left})"
        right = to_text(node.b)
        if _prec(node.b) < 2:  # left-associative
            right = f"({right})"
        op = "+" if isinstance(node, Sum) else "-"
        return f"{left} {op} {right}"
    raise TypeError(f"not a formula node: {node!r}")
