"""Permutations of {0..n-1} with the normalized Hamming length.

Composition convention: ``(s * t)(i) == s(t(i))``. Words evaluate left to
right, so the word ``x y`` is the permutation ``x * y``.
"""
from __future__ import annotations

import re
from fractions import Fraction
from typing import Iterable, Sequence

import numpy as np

from .config import DEFAULT_CAPS, CapExceeded

Word = Sequence[tuple[int, int]]


class Permutation:
    """Immutable bijection of ``range(n)`` stored as its image array."""

    __slots__ = ("_img", "_key")

    def __init__(self, images: Iterable[int], *, check: bool = True):
        img = np.array(images, dtype=np.int64).reshape(-1)
        if check:
            n = img.size
            if n == 0:
                raise ValueError("permutation degree must be positive")
            seen = np.zeros(n, dtype=bool)
            if img.min() < 0 or img.max() >= n:
                raise ValueError("images out of range")
            seen[img] = True
            if not seen.all():
                raise ValueError("images are not a bijection")
        img.setflags(write=False)
        self._img = img
        self._key = None

    @classmethod
    def identity(cls, n: int) -> "Permutation":
        return cls(np.arange(n), check=False)

    @classmethod
    def cycle(cls, n: int, points: Sequence[int] | None = None) -> "Permutation":
        """The cycle ``points[0] -> points[1] -> ... -> points[0]`` (default: full n-cycle)."""
        pts = list(range(n)) if points is None else list(points)
        img = np.arange(n)
        for a, b in zip(pts, pts[1:] + pts[:1]):
            img[a] = b
        return cls(img)

    @classmethod
    def from_cycles(cls, n: int, cycles: Iterable[Sequence[int]]) -> "Permutation":
        p = cls.identity(n)
        for c in cycles:
            p = p * cls.cycle(n, c)
        return p

    @classmethod
    def random(cls, n: int, rng: np.random.Generator) -> "Permutation":
        return cls(rng.permutation(n), check=False)

    @property
    def n(self) -> int:
        return int(self._img.size)

    @property
    def images(self) -> np.ndarray:
        return self._img

    def __call__(self, i: int) -> int:
        return int(self._img[i])

    def __mul__(self, other: "Permutation") -> "Permutation":
        if not isinstance(other, Permutation):
            return NotImplemented
        if other.n != self.n:
            raise ValueError(f"degree mismatch: {self.n} vs {other.n}")
        return Permutation(self._img[other._img], check=False)

    def inverse(self) -> "Permutation":
        inv = np.empty_like(self._img)
        inv[self._img] = np.arange(self.n)
        return Permutation(inv, check=False)

    def __pow__(self, e: int) -> "Permutation":
        base = self if e >= 0 else self.inverse()
        e = abs(e)
        out = Permutation.identity(self.n)
        while e:
            if e & 1:
                out = out * base
            base = base * base
            e >>= 1
        return out

    def is_identity(self) -> bool:
        return bool((self._img == np.arange(self.n)).all())

    def fixed_points(self) -> int:
        return int((self._img == np.arange(self.n)).sum())

    def moved_points(self) -> int:
        return self.n - self.fixed_points()

    def cycles(self) -> list[tuple[int, ...]]:
        seen = np.zeros(self.n, dtype=bool)
        out = []
        for s in range(self.n):
            if seen[s]:
                continue
            c = [s]
            seen[s] = True
            j = int(self._img[s])
            while j != s:
                c.append(j)
                seen[j] = True
                j = int(self._img[j])
            out.append(tuple(c))
        return out

    def cycle_count(self) -> int:
        """Number of cycles, fixed points included."""
        return len(self.cycles())

    def cycle_type(self) -> tuple[int, ...]:
        return tuple(sorted((len(c) for c in self.cycles()), reverse=True))

    def order(self) -> int:
        from math import lcm
        return lcm(*(len(c) for c in self.cycles()))

    def key(self) -> bytes:
        if self._key is None:
            self._key = self._img.tobytes()
        return self._key

    def __eq__(self, other) -> bool:
        return isinstance(other, Permutation) and self.n == other.n and self.key() == other.key()

    def __hash__(self) -> int:
        return hash(self.key())

    def __lt__(self, other: "Permutation") -> bool:
        return tuple(self._img) < tuple(other._img)

    def __repr__(self) -> str:
        return f"Permutation({self._img.tolist()})"

    def to_text(self) -> str:
        return format_perm(self)


def hamming_length(s: Permutation) -> Fraction:
    """Fraction of points moved by ``s``."""
    return Fraction(s.moved_points(), s.n)


def hamming_distance(s: Permutation, t: Permutation) -> Fraction:
    return hamming_length(s * t.inverse())


def word_eval(word: Word, assignment: Sequence, *, identity=None):
    """Evaluate ``prod_k x[letter_k] ** exp_k`` left to right.

    ``assignment`` holds Permutations or square numpy matrices; an empty word
    needs either a non-empty assignment or an explicit ``identity``.
    """
    if assignment:
        first = assignment[0]
        kind = type(first)
        for a in assignment:
            if type(a) is not kind:
                raise TypeError("mixed carriers in assignment")
            if isinstance(a, Permutation) and a.n != first.n:
                raise TypeError("mixed degrees in assignment")
            if isinstance(a, np.ndarray) and a.shape != first.shape:
                raise TypeError("mixed matrix dimensions in assignment")
    if identity is None:
        if not assignment:
            raise ValueError("empty assignment: pass identity explicitly")
        first = assignment[0]
        identity = (Permutation.identity(first.n) if isinstance(first, Permutation)
                    else np.eye(first.shape[0], dtype=first.dtype))
    out = identity
    for letter, e in word:
        if not 0 <= letter < len(assignment):
            raise IndexError(f"letter index {letter} has no assigned element")
        x = assignment[letter]
        if isinstance(x, Permutation):
            out = out * x ** e
        else:
            out = out @ np.linalg.matrix_power(x, e)
    return out


def _check_degree(n: int, caps) -> None:
    if n > caps.degree:
        raise CapExceeded(f"degree {n} exceeds cap {caps.degree}")


def direct_tensor(s0: Permutation, s1: Permutation, *, caps=DEFAULT_CAPS) -> Permutation:
    """``(s0 (x) s1)(i*m + j) = s0(i)*m + s1(j)``."""
    m = s1.n
    _check_degree(s0.n * m, caps)
    return Permutation(np.add.outer(s0.images * m, s1.images).ravel(), check=False)


def tensor_power_perm(s: Permutation, k: int, *, caps=DEFAULT_CAPS) -> Permutation:
    """k-fold tensor power acting on tuples (i1..ik) encoded big-endian."""
    if k < 1:
        raise ValueError("k must be positive")
    _check_degree(s.n ** k, caps)
    out = s
    for _ in range(k - 1):
        out = direct_tensor(out, s, caps=caps)
    return out


def block_embed(s: Permutation, N: int, *, caps=DEFAULT_CAPS) -> Permutation:
    """Copies of ``s`` on the ``N // n`` leading blocks, identity on the remainder."""
    n = s.n
    if N <= n:
        raise ValueError(f"target degree {N} must exceed {n}")
    _check_degree(N, caps)
    k = N // n
    img = np.arange(N, dtype=np.int64)
    img[:k * n] = (np.arange(k)[:, None] * n + s.images[None, :]).ravel()
    return Permutation(img, check=False)


def all_permutations(n: int) -> np.ndarray:
    """Every permutation of ``range(n)`` as rows, in lexicographic order."""
    from itertools import permutations
    if n == 0:
        return np.zeros((1, 0), dtype=np.int64)
    return np.array(list(permutations(range(n))), dtype=np.int64).reshape(-1, n)


_PERM_RE = re.compile(r"^\s*(?:perm\s+)?(\d+)\s*:\s*(.*?)\s*$")


def parse_perm(text: str) -> Permutation:
    """Parse ``perm n: i0 i1 ...`` (the ``perm`` keyword is optional; images
    may also be separated by commas, as in ``4:1,0,2,3``)."""
    m = _PERM_RE.match(text.replace(",", " "))
    if not m:
        raise ValueError(f"malformed permutation: {text!r}")
    n = int(m.group(1))
    imgs = [int(t) for t in m.group(2).split()]
    if len(imgs) != n:
        raise ValueError(f"expected {n} images, got {len(imgs)}")
    return Permutation(imgs)


def format_perm(s: Permutation) -> str:
    return f"perm {s.n}: " + " ".join(str(int(i)) for i in s.images)


def format_fraction(q) -> str:
    q = Fraction(q)
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"
