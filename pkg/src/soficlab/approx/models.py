"""Abstract source groups for approximate morphisms.

A model supplies multiplication, inversion and, where it can, a canonical
key for each element. ``decides`` says whether equal keys are equivalent to
equal elements; when it is false (finitely presented groups reduced by a
bounded rewriting) products whose key is not recognised are reported as
unresolved instead of being guessed.
"""
from __future__ import annotations

from fractions import Fraction
from typing import Hashable, Sequence

import numpy as np

from ..groups import TableGroup


class GroupModel:
    name = "group"
    decides = True

    def identity(self):
        raise NotImplementedError

    def mul(self, a, b):
        raise NotImplementedError

    def inv(self, a):
        raise NotImplementedError

    def key(self, a) -> Hashable:
        return a

    def is_identity(self, a) -> bool | None:
        return self.key(a) == self.key(self.identity())

    def length(self, a) -> Fraction:
        """Trivial length on the source group."""
        return Fraction(0) if self.is_identity(a) else Fraction(1)

    def format(self, a) -> str:
        return str(a)

    def parse(self, text: str):
        raise NotImplementedError


class LatticeModel(GroupModel):
    """Z^d with integer vectors stored as tuples."""

    def __init__(self, d: int):
        if d < 1:
            raise ValueError("dimension must be positive")
        self.d = d
        self.name = f"Z^{d}"

    def identity(self):
        return (0,) * self.d

    def mul(self, a, b):
        return tuple(x + y for x, y in zip(a, b))

    def inv(self, a):
        return tuple(-x for x in a)

    def format(self, a) -> str:
        return ",".join(str(x) for x in a)

    def parse(self, text: str):
        vals = tuple(int(t) for t in text.replace("(", "").replace(")", "").split(","))
        if len(vals) != self.d:
            raise ValueError(f"expected {self.d} coordinates in {text!r}")
        return vals


class TableModel(GroupModel):
    def __init__(self, group: TableGroup):
        self.group = group
        self.name = group.name

    def identity(self):
        return int(self.group.identity())

    def mul(self, a, b):
        return int(self.group.table[a, b])

    def inv(self, a):
        return int(self.group.inverse(a))

    def format(self, a) -> str:
        return self.group.names[a]

    def parse(self, text: str):
        return self.group.index(text.strip())


class ProductModel(GroupModel):
    def __init__(self, m0: GroupModel, m1: GroupModel):
        self.m0, self.m1 = m0, m1
        self.name = f"{m0.name}x{m1.name}"
        self.decides = m0.decides and m1.decides

    def identity(self):
        return (self.m0.identity(), self.m1.identity())

    def mul(self, a, b):
        return (self.m0.mul(a[0], b[0]), self.m1.mul(a[1], b[1]))

    def inv(self, a):
        return (self.m0.inv(a[0]), self.m1.inv(a[1]))

    def key(self, a):
        return (self.m0.key(a[0]), self.m1.key(a[1]))

    def is_identity(self, a):
        x, y = self.m0.is_identity(a[0]), self.m1.is_identity(a[1])
        if x is False or y is False:
            return False
        if x is None or y is None:
            return None
        return True

    def format(self, a) -> str:
        return f"{self.m0.format(a[0])}|{self.m1.format(a[1])}"

    def parse(self, text: str):
        l, r = text.split("|")
        return (self.m0.parse(l), self.m1.parse(r))


class FreeProductModel(GroupModel):
    """Normal forms are tuples of (factor, element) syllables alternating factors."""

    def __init__(self, m0: GroupModel, m1: GroupModel):
        self.factors = (m0, m1)
        self.name = f"{m0.name}*{m1.name}"
        self.decides = m0.decides and m1.decides

    def identity(self):
        return ()

    def syllable(self, factor: int, x) -> tuple:
        return () if self.factors[factor].is_identity(x) else ((factor, x),)

    def mul(self, a, b):
        out = list(a)
        for f, x in b:
            if out and out[-1][0] == f:
                y = self.factors[f].mul(out[-1][1], x)
                out.pop()
                if not self.factors[f].is_identity(y):
                    out.append((f, y))
            else:
                out.append((f, x))
        return tuple(out)

    def inv(self, a):
        return tuple((f, self.factors[f].inv(x)) for f, x in reversed(a))

    def key(self, a):
        return tuple((f, self.factors[f].key(x)) for f, x in a)

    def is_identity(self, a):
        return len(a) == 0

    def format(self, a) -> str:
        if not a:
            return "1"
        return ".".join(f"{f}:{self.factors[f].format(x)}" for f, x in a)

    def parse(self, text: str):
        text = text.strip()
        if text == "1":
            return ()
        out = ()
        for part in text.split("."):
            f, x = part.split(":", 1)
            out = self.mul(out, self.syllable(int(f), self.factors[int(f)].parse(x)))
        return out


Letter = tuple[int, int]


def free_reduce(word: Sequence[Letter]) -> tuple:
    out: list[Letter] = []
    for g, e in word:
        if out and out[-1][0] == g and out[-1][1] == -e:
            out.pop()
        else:
            out.append((g, e))
    return tuple(out)


def expand_word(word: Sequence[Letter]) -> tuple:
    """Spell ``(g, e)`` factors with |e| > 1 as unit letters."""
    return tuple((g, 1 if e > 0 else -1) for g, e in word for _ in range(abs(e)))


def invert_word(word: Sequence[Letter]) -> tuple:
    return tuple((g, -e) for g, e in reversed(word))


class PresentationModel(GroupModel):
    """Finitely presented group; elements are freely reduced words.

    Products are shortened by a bounded Dehn-style rewriting: a subword that
    is more than half of a cyclic conjugate of a relator (or its inverse) is
    replaced by the inverse of the remaining part. Only the free group
    (no relators) has its word problem decided by this normal form.
    """

    def __init__(self, gens: Sequence[str], relators: Sequence[Sequence[Letter]] = (),
                 name: str = "presentation", max_rewrites: int = 10_000):
        self.gens = list(gens)
        self.relators = [free_reduce(expand_word(r)) for r in relators]
        self.name = name
        self.decides = not any(self.relators)
        self.max_rewrites = max_rewrites
        pieces = []
        for r in self.relators:
            for rr in (r, invert_word(r)):
                for s in range(len(rr)):
                    c = rr[s:] + rr[:s]
                    pieces.append(c)
        self._cyclic = pieces

    def identity(self):
        return ()

    def reduce(self, w) -> tuple:
        w = free_reduce(w)
        for _ in range(self.max_rewrites):
            changed = False
            for c in self._cyclic:
                L = len(c)
                for k in range(L, L // 2, -1):
                    u = c[:k]
                    for s in range(len(w) - k + 1):
                        if w[s:s + k] == u:
                            w = free_reduce(w[:s] + invert_word(c[k:]) + w[s + k:])
                            changed = True
                            break
                    if changed:
                        break
                if changed:
                    break
            if not changed:
                return w
        return w

    def mul(self, a, b):
        return self.reduce(tuple(a) + tuple(b))

    def inv(self, a):
        return invert_word(a)

    def is_identity(self, a):
        r = self.reduce(a)
        if not r:
            return True
        return False if self.decides else None

    def format(self, a) -> str:
        if not a:
            return "1"
        return " ".join(self.gens[g] if e == 1 else f"{self.gens[g]}^{e}" for g, e in a)

    def parse(self, text: str):
        from ..stability.presentation import parse_word
        return self.reduce(expand_word(parse_word(text, self.gens)))


def lattice_box(shape: Sequence[int], origin: Sequence[int] | None = None) -> list[tuple]:
    """Points of the box prod [o_i, o_i + s_i) in lexicographic order."""
    origin = tuple(origin) if origin is not None else (0,) * len(shape)
    grids = np.indices(tuple(shape)).reshape(len(shape), -1).T
    return [tuple(int(v) + o for v, o in zip(row, origin)) for row in grids]
