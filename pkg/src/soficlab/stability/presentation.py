"""Group presentations: built-in relator systems, text format, kernel encoding."""
from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Sequence

import numpy as np

Letter = tuple[int, int]

_FACTOR = re.compile(r"^([A-Za-z][A-Za-z0-9_]*)(?:\^(-?\d+))?$")


def free_reduce(word: Sequence[Letter]) -> tuple:
    out: list[Letter] = []
    for g, e in word:
        if out and out[-1][0] == g and out[-1][1] == -e:
            out.pop()
        else:
            out.append((g, e))
    return tuple(out)


def expand(word: Sequence[Letter]) -> tuple:
    return tuple((g, 1 if e > 0 else -1) for g, e in word for _ in range(abs(e)))


def parse_word(text: str, gens: Sequence[str]) -> list[Letter]:
    """Whitespace-separated factors ``name[^int]``; ``1`` is the empty word."""
    out = []
    for tok in text.split():
        if tok == "1":
            continue
        m = _FACTOR.match(tok)
        if not m:
            raise ValueError(f"bad factor {tok!r}")
        name, e = m.group(1), int(m.group(2) or 1)
        if name not in gens:
            raise ValueError(f"unknown generator {name!r}")
        if e:
            out.append((list(gens).index(name), e))
    return out


@dataclass(frozen=True)
class Presentation:
    gens: tuple[str, ...]
    relators: tuple[tuple[Letter, ...], ...]
    name: str = ""

    def __post_init__(self):
        if not self.gens:
            raise ValueError("a presentation needs at least one generator")
        if len(set(self.gens)) != len(self.gens):
            raise ValueError("repeated generator names")
        rels = tuple(free_reduce(expand(r)) for r in self.relators)
        for r in rels:
            for g, _ in r:
                if not 0 <= g < len(self.gens):
                    raise ValueError(f"relator uses unknown generator index {g}")
        object.__setattr__(self, "relators", rels)

    @property
    def num_gens(self) -> int:
        return len(self.gens)

    def encode(self) -> tuple[np.ndarray, np.ndarray]:
        """Kernel encoding: letters +(j+1) / -(j+1), concatenated with offsets."""
        codes, offsets = [], [0]
        for r in self.relators:
            codes.extend((g + 1) * e for g, e in r)
            offsets.append(len(codes))
        return np.asarray(codes, dtype=np.int64), np.asarray(offsets, dtype=np.int64)

    def format_word(self, w: Sequence[Letter]) -> str:
        if not w:
            return "1"
        out, i = [], 0
        w = list(w)
        while i < len(w):
            g, e = w[i]
            j = i
            while j + 1 < len(w) and w[j + 1] == (g, e):
                j += 1
            k = (j - i + 1) * e
            out.append(self.gens[g] if k == 1 else f"{self.gens[g]}^{k}")
            i = j + 1
        return " ".join(out)

    def to_text(self) -> str:
        lines = ["gens: " + " ".join(self.gens)]
        lines += ["rel: " + self.format_word(r) for r in self.relators]
        return "\n".join(lines) + "\n"


def _w(*pairs) -> tuple:
    return tuple(pairs)


def higman() -> Presentation:
    """a_{i+1} a_i a_{i+1}^-1 a_i^-2 for i mod 4."""
    rels = []
    for i in range(4):
        j = (i + 1) % 4
        rels.append(_w((j, 1), (i, 1), (j, -1), (i, -2)))
    return Presentation(("a0", "a1", "a2", "a3"), tuple(rels), "higman")


def commutator_word(x: Sequence[Letter], y: Sequence[Letter]) -> tuple:
    inv = lambda w: tuple((g, -e) for g, e in reversed(w))
    return tuple(x) + tuple(y) + inv(x) + inv(y)


def thompson_f() -> Presentation:
    """[a b^-1, a^-1 b a] and [a b^-1, a^-2 b a^2]."""
    u = _w((0, 1), (1, -1))
    v1 = _w((0, -1), (1, 1), (0, 1))
    v2 = _w((0, -2), (1, 1), (0, 2))
    return Presentation(("a", "b"), (commutator_word(u, v1), commutator_word(u, v2)), "thompsonF")


def baumslag_solitar(m: int, n: int) -> Presentation:
    """a b^m a^-1 b^-n."""
    return Presentation(("a", "b"), (_w((0, 1), (1, m), (0, -1), (1, -n)),), f"bs({m},{n})")


def commutator() -> Presentation:
    return Presentation(("x", "y"), (_w((0, 1), (1, 1), (0, -1), (1, -1)),), "commutator")


_BS = re.compile(r"^(?:bs|baumslag_solitar)\((-?\d+),\s*(-?\d+)\)$")


def builtin(name: str) -> Presentation:
    key = name.strip()
    simple = {"higman": higman, "thompsonF": thompson_f, "thompsonf": thompson_f,
              "commutator": commutator}
    if key in simple:
        return simple[key]()
    m = _BS.match(key)
    if m:
        return baumslag_solitar(int(m.group(1)), int(m.group(2)))
    raise ValueError(f"unknown presentation {name!r} (higman, thompsonF, commutator, bs(m,n))")


def parse_presentation(text: str, name: str = "") -> Presentation:
    gens: list[str] | None = None
    rels = []
    for ln in text.splitlines():
        ln = ln.split("#", 1)[0].strip()
        if not ln:
            continue
        if ln.startswith("gens:"):
            gens = ln[5:].split()
        elif ln.startswith("rel:"):
            if gens is None:
                raise ValueError("'gens:' must come before 'rel:'")
            rels.append(tuple(parse_word(ln[4:], gens)))
        elif ln.strip() == "presentation":
            continue
        else:
            raise ValueError(f"unknown presentation line {ln!r}")
    if not gens:
        raise ValueError("missing 'gens:' line")
    return Presentation(tuple(gens), tuple(rels), name)
