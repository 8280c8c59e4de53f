"""Entropy counts for subshifts: words over Z, Folner tilings, the amenable
subshift bound and sofic counts through a permutation model of the window.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product
from typing import Callable, Iterable, Sequence

import numpy as np

from . import kernels
from .config import DEFAULT_CAPS, CapExceeded
from .perm import Permutation


@dataclass(frozen=True)
class Subshift:
    """Subshift of finite type on the alphabet [0, k).

    Either ``forbidden`` words (over Z) or a window with its ``allowed``
    patterns (tuples indexed like the window) must be given.
    """

    k: int
    forbidden: tuple[tuple[int, ...], ...] = ()
    window: tuple[str, ...] = ()
    allowed: frozenset = frozenset()
    name: str = ""

    def __post_init__(self):
        if self.k < 1:
            raise ValueError("alphabet size must be positive")
        for w in self.forbidden:
            if not w or any(not 0 <= c < self.k for c in w):
                raise ValueError(f"bad forbidden word {w!r}")
        for p in self.allowed:
            if len(p) != len(self.window) or any(not 0 <= c < self.k for c in p):
                raise ValueError(f"bad allowed pattern {p!r}")

    @property
    def memory(self) -> int:
        return max((len(w) for w in self.forbidden), default=1)

    def word_ok(self, w: Sequence[int]) -> bool:
        s = tuple(w)
        for f in self.forbidden:
            L = len(f)
            for i in range(len(s) - L + 1):
                if s[i:i + L] == f:
                    return False
        return True

    def window_oracle(self, m: int | None = None) -> tuple[int, np.ndarray]:
        """(|F|, allowed mask over base-k codes) for the sofic count.

        For a forbidden-word shift the window is F = {0, ..., m-1} and the
        pattern at i is (c_{i-0}, ..., c_{i-m+1}); it is allowed when the
        word it spells left to right avoids every forbidden word.
        """
        if self.window:
            f = len(self.window)
            mask = np.zeros(self.k ** f, dtype=np.bool_)
            for p in self.allowed:
                mask[_encode(p, self.k)] = True
            return f, mask
        m = m or self.memory
        mask = np.zeros(self.k ** m, dtype=np.bool_)
        for p in product(range(self.k), repeat=m):
            mask[_encode(p, self.k)] = self.word_ok(p[::-1])
        return m, mask


def _encode(p: Sequence[int], k: int) -> int:
    c = 0
    for d in p:
        c = c * k + int(d)
    return c


def full_shift(k: int) -> Subshift:
    return Subshift(k, (), name=f"full{k}")


def golden_mean() -> Subshift:
    return Subshift(2, ((1, 1),), name="golden")


BUILTIN_SHIFTS: dict[str, Callable[[], Subshift]] = {
    "full2": lambda: full_shift(2),
    "full3": lambda: full_shift(3),
    "golden": golden_mean,
    "no000": lambda: Subshift(2, ((0, 0, 0),), name="no000"),
    "fixed": lambda: Subshift(2, ((1,),), name="fixed"),
}


# -- counting over Z -------------------------------------------------------------------

def word_counts(Y: Subshift, n_max: int, *, caps=DEFAULT_CAPS) -> list[int]:
    """[|Y_0|, |Y_1|, ..., |Y_nmax|] by dynamic programming on the last m-1 symbols."""
    if Y.window:
        raise ValueError("word counting needs a forbidden-word subshift")
    m = Y.memory
    by_len: dict[int, list[tuple[int, ...]]] = {}
    for f in Y.forbidden:
        by_len.setdefault(len(f), []).append(f)
    forb = {L: set(ws) for L, ws in by_len.items()}
    counts = [1]
    states: dict[tuple, int] = {(): 1}
    for _ in range(n_max):
        nxt: dict[tuple, int] = {}
        for s, c in states.items():
            for a in range(Y.k):
                w = s + (a,)
                if any(len(w) >= L and w[-L:] in ws for L, ws in forb.items()):
                    continue
                key = w[-(m - 1):] if m > 1 else ()
                nxt[key] = nxt.get(key, 0) + c
        if len(nxt) > caps.memo_states:
            raise CapExceeded(f"{len(nxt)} suffix states exceed the memo cap {caps.memo_states}")
        states = nxt
        counts.append(sum(states.values()))
    return counts


def word_count(Y: Subshift, n: int, *, caps=DEFAULT_CAPS) -> int:
    return word_counts(Y, n, caps=caps)[n]


@dataclass
class EntropyEstimate:
    counts: list[int]  # counts[n] = |Y_n|, n = 0..nmax
    values: list[float]  # (1/n) log |Y_n| for n = 1..nmax
    estimate: float  # min over n, a certified upper bound on h
    argmin: int
    ratio_estimate: float  # log(|Y_nmax| / |Y_nmax-1|)
    running: list[float] = field(default_factory=list)


def _less_rate(a: int, n: int, b: int, m: int) -> bool:
    """Exact test of a^(1/n) < b^(1/m) on positive integers."""
    return a ** m < b ** n


def h_estimate(Y: Subshift, n_max: int, *, caps=DEFAULT_CAPS) -> EntropyEstimate:
    if n_max < 1:
        raise ValueError("n_max must be at least 1")
    counts = word_counts(Y, n_max, caps=caps)
    for a in range(1, n_max + 1):
        for b in range(1, n_max + 1 - a):
            if counts[a + b] > counts[a] * counts[b]:
                raise AssertionError(f"submultiplicativity fails at ({a}, {b})")
    values = [math.log(c) / n if c else -math.inf for n, c in enumerate(counts) if n > 0]
    # the running minimum compares rates exactly, so ties keep the smallest n
    best, running = 0, []
    for n in range(1, n_max + 1):
        c = counts[n]
        if best == 0 or (counts[best] and (c == 0 or _less_rate(c, n, counts[best], best))):
            best = n
        running.append(values[best - 1])
    est = values[best - 1]
    if counts[n_max] and counts[n_max - 1]:
        ratio = math.log(counts[n_max] / counts[n_max - 1])
    else:
        ratio = -math.inf
    return EntropyEstimate(counts, values, est, best, ratio, running)


# -- sets in a group: boundaries and tilings ------------------------------------------------

Elem = tuple


def _mul(a: Elem, b: Elem) -> Elem:
    return tuple(x + y for x, y in zip(a, b))


def _inv(a: Elem) -> Elem:
    return tuple(-x for x in a)


def interval(lo: int, hi: int) -> list[Elem]:
    return [(i,) for i in range(lo, hi)]


def box(shape: Sequence[int], origin: Sequence[int] | None = None) -> list[Elem]:
    from .approx.models import lattice_box
    return lattice_box(shape, origin)


def boundary_ops(F: Iterable[Elem], E: Iterable[Elem], mul=_mul, inv=_inv) -> tuple[set, set, set]:
    """(F^-E, F^+E, boundary) with F^-E = {x : xE in F}, F^+E = {x : xE meets F}."""
    F = set(map(tuple, F))
    E = [tuple(e) for e in E]
    if not E:
        raise ValueError("E is empty")
    plus = {mul(f, inv(e)) for f in F for e in E}
    minus = {x for x in plus if all(mul(x, e) in F for e in E)}
    return minus, plus, plus - minus


def product_set(A: Iterable[Elem], B: Iterable[Elem], mul=_mul) -> set:
    return {mul(a, b) for a in A for b in B}


@dataclass
class TilingReport:
    tiles: list
    density: Fraction  # |T cap F^-E| / |F|
    bound: Fraction  # 1/|E'| - |d_E' F| / |F|
    holds: bool
    covers_interior: bool
    boundary_size: int
    disjoint: bool


def greedy_tiling(E: Sequence[Elem], F: Sequence[Elem], E_prime: Sequence[Elem] | None = None,
                  region: Sequence[Elem] | None = None, mul=_mul, inv=_inv) -> TilingReport:
    """Greedy maximal set T of translates xE inside the region (default F),
    taken in lexicographic order and pairwise disjoint.

    E' defaults to E E^-1. By maximality every x with xE inside the region
    lies in some tile translate of E'; the report records this together with
    the density bound for F.
    """
    E = [tuple(e) for e in E]
    ident = tuple(0 for _ in E[0])
    if ident not in E:
        raise ValueError("E must contain the identity")
    Ep = sorted(product_set(E, [inv(e) for e in E], mul)) if E_prime is None else [tuple(e) for e in E_prime]
    if not product_set(E, [inv(e) for e in E], mul) <= set(Ep):
        raise ValueError("E' must contain E E^-1")
    F = [tuple(x) for x in F]
    R = set(F if region is None else map(tuple, region))
    candidates, _, _ = boundary_ops(R, E, mul, inv)
    used: set = set()
    tiles = []
    for x in sorted(candidates):
        cells = [mul(x, e) for e in E]
        if any(c in used for c in cells):
            continue
        used.update(cells)
        tiles.append(x)
    covered = product_set(tiles, Ep, mul)
    interior, _, _ = boundary_ops(R, Ep, mul, inv)
    covers = interior <= covered and candidates <= covered
    Fm, _, _ = boundary_ops(F, E, mul, inv)
    _, _, bd = boundary_ops(F, Ep, mul, inv)
    density = Fraction(len(set(tiles) & Fm), len(F))
    bound = Fraction(1, len(Ep)) - Fraction(len(bd), len(F))
    disjoint = len(used) == len(tiles) * len(E)
    return TilingReport(tiles, density, bound, density >= bound, covers, len(bd), disjoint)


@dataclass
class AmenableBound:
    lhs: float
    rhs: float | None
    holds: bool | None
    count_F: int
    count_E: int
    vacuous: bool


def amenable_bound_check(Y: Subshift, m: int, N: int, *, caps=DEFAULT_CAPS) -> AmenableBound:
    """Compare (1/|F|) log|Y_F| with the tiling bound for E = [0, m), F = [0, N).

    rhs = log k - (1/|E'| - |d_E' F|/|F|) log(k^|E| / (k^|E| - 1)), E' = E - E.
    """
    counts = word_counts(Y, max(m, N), caps=caps)
    yF, yE = counts[N], counts[m]
    lhs = math.log(yF) / N if yF else -math.inf
    kE = Y.k ** m
    if yE >= kE:
        return AmenableBound(lhs, None, None, yF, yE, True)
    E = interval(0, m)
    Ep = sorted(product_set(E, [_inv(e) for e in E]))
    _, _, bd = boundary_ops(interval(0, N), Ep)
    coef = Fraction(1, len(Ep)) - Fraction(len(bd), N)
    rhs = math.log(Y.k) - float(coef) * math.log(kE / (kE - 1))
    return AmenableBound(lhs, rhs, lhs <= rhs + 1e-12, yF, yE, False)


# -- sofic counts ------------------------------------------------------------------------------

def cyclic_sofic_map(window: Sequence[int], n: int) -> list[Permutation]:
    """sigma_g = c^g for the n-cycle c: i -> i+1, one per window element g of Z."""
    return [Permutation((np.arange(n) + g) % n, check=False) for g in window]


@dataclass
class SoficCount:
    count: int
    n: int
    rate: float  # (1/n) log count
    exact: bool  # False when delta > 0 (the count is then a lower bound)
    min_good: int


def sofic_entropy_count(perms: Sequence[Permutation], k: int, allowed: np.ndarray,
                        delta: Fraction | float = 0, *, caps=DEFAULT_CAPS) -> SoficCount:
    """Colorings c of [0, n) whose pattern (c_{s_g^-1(i)})_{g in F} is allowed at
    every i (delta = 0) or at a fraction >= 1 - delta |F| of the i (delta > 0)."""
    if not perms:
        raise ValueError("empty window")
    n = perms[0].n
    f = len(perms)
    if any(s.n != n for s in perms):
        raise ValueError("window permutations must share one degree")
    allowed = np.asarray(allowed, dtype=np.bool_)
    if allowed.shape != (k ** f,):
        raise ValueError(f"allowed mask must have {k ** f} entries")
    if k ** n > caps.colorings:
        raise CapExceeded(f"{k}^{n} colorings exceed the cap {caps.colorings}")
    idx = np.stack([s.inverse().images for s in perms], axis=1)
    delta = Fraction(delta)
    if delta < 0:
        raise ValueError("delta must be nonnegative")
    min_good = n if delta == 0 else max(0, math.ceil((1 - delta * f) * n))
    count = int(kernels.count_pattern_colorings(k, n, idx, allowed, min_good))
    rate = math.log(count) / n if count else -math.inf
    return SoficCount(count, n, rate, delta == 0, min_good)


def lucas(n: int) -> int:
    a, b = 2, 1
    for _ in range(n):
        a, b = b, a + b
    return a


def fibonacci(n: int) -> int:
    a, b = 0, 1
    for _ in range(n):
        a, b = b, a + b
    return a


# -- text format --------------------------------------------------------------------------------

def parse_subshift(text: str) -> Subshift:
    lines = [ln.strip() for ln in text.splitlines() if ln.strip() and not ln.strip().startswith("#")]
    if not lines or not lines[0].startswith("shift"):
        raise ValueError("subshift text must start with 'shift k=<k>'")
    fields = dict(tok.split("=", 1) for tok in lines[0].split()[1:])
    k = int(fields["k"])
    forbidden, window, allowed = [], (), set()
    for ln in lines[1:]:
        kw, _, rest = ln.partition(" ")
        rest = rest.strip()
        if kw == "forbid":
            forbidden.append(_digits(rest))
        elif kw == "window":
            window = tuple(rest.split())
        elif kw == "allow":
            allowed.add(_digits(rest))
        else:
            raise ValueError(f"unknown subshift line {ln!r}")
    if forbidden and window:
        raise ValueError("give either forbidden words or a window, not both")
    return Subshift(k, tuple(forbidden), window, frozenset(allowed), name=fields.get("name", ""))


def _digits(s: str) -> tuple[int, ...]:
    toks = s.split()
    if len(toks) > 1:
        return tuple(int(t) for t in toks)
    return tuple(int(c) for c in s)


def format_subshift(Y: Subshift) -> str:
    lines = [f"shift k={Y.k}"]
    lines += ["forbid " + "".join(map(str, w)) for w in Y.forbidden]
    if Y.window:
        lines.append("window " + " ".join(Y.window))
        lines += ["allow " + "".join(map(str, p)) for p in sorted(Y.allowed)]
    return "\n".join(lines) + "\n"
