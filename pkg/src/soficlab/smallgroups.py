"""All finite groups of small order, one table per isomorphism class.

Every group of order below 60 is solvable, hence has a normal subgroup N of
prime index p and is a cyclic extension G = N<t> with t y t^-1 = phi(y) and
t^p = a, where phi is an automorphism of N fixing a and phi^p is conjugation
by a. Running over all such data for the already classified N and keeping one
representative per isomorphism class therefore produces every group.
"""
from __future__ import annotations

from collections import Counter
from functools import lru_cache

import numpy as np

from .groups import TableGroup

MAX_ORDER = 24

# number of isomorphism classes of groups of order n, n = 1..24
KNOWN_COUNTS = (1, 1, 1, 2, 1, 2, 1, 5, 2, 2, 1, 5, 1, 2, 1, 14, 1, 5, 1, 5, 2, 2, 1, 15)


def _primes_dividing(n: int) -> list[int]:
    return [p for p in range(2, n + 1) if n % p == 0 and all(p % q for q in range(2, p))]


def element_orders(table: np.ndarray) -> np.ndarray:
    m = len(table)
    e = int(np.nonzero((table == np.arange(m)).all(axis=1))[0][0])
    orders = np.ones(m, dtype=np.int64)
    cur = np.arange(m)
    for k in range(1, m + 1):
        done = cur == e
        orders[done & (orders == 1)] = k
        if k > 1 and (orders > 1).sum() == m - 1:
            break
        cur = table[cur, np.arange(m)]
    orders[e] = 1
    return orders


def _span(table: np.ndarray, gens: list[int]) -> set[int]:
    m = len(table)
    e = int(np.nonzero((table == np.arange(m)).all(axis=1))[0][0])
    seen, frontier = {e}, [e]
    while frontier:
        nxt = []
        for x in frontier:
            for g in gens:
                y = int(table[x, g])
                if y not in seen:
                    seen.add(y)
                    nxt.append(y)
        frontier = nxt
    return seen


def generators(table: np.ndarray) -> list[int]:
    """A small generating set, chosen greedily by decreasing element order."""
    orders = element_orders(table)
    gens: list[int] = []
    span = _span(table, gens)
    for x in sorted(range(len(table)), key=lambda i: (-orders[i], i)):
        if len(span) == len(table):
            break
        if x not in span:
            gens.append(x)
            span = _span(table, gens)
    return gens


def _extend(src: np.ndarray, gens: list[int], imgs: list[int], dst: np.ndarray) -> np.ndarray | None:
    """The homomorphism src -> dst sending gens to imgs, if it exists and is bijective."""
    m = len(src)
    e_src = int(np.nonzero((src == np.arange(m)).all(axis=1))[0][0])
    e_dst = int(np.nonzero((dst == np.arange(len(dst))).all(axis=1))[0][0])
    f = np.full(m, -1, dtype=np.int64)
    f[e_src] = e_dst
    frontier = [e_src]
    while frontier:
        nxt = []
        for x in frontier:
            for g, h in zip(gens, imgs):
                y = int(src[x, g])
                v = int(dst[f[x], h])
                if f[y] < 0:
                    f[y] = v
                    nxt.append(y)
                elif f[y] != v:
                    return None
        frontier = nxt
    if (f < 0).any() or len(np.unique(f)) != m:
        return None
    if not np.array_equal(f[src], dst[f[:, None], f[None, :]]):
        return None
    return f


def _search(src: np.ndarray, dst: np.ndarray, first_only: bool) -> list[np.ndarray]:
    gens = generators(src)
    so, do = element_orders(src), element_orders(dst)
    cands = [np.nonzero(do == so[g])[0] for g in gens]
    found = []

    def rec(k, imgs):
        if k == len(gens):
            f = _extend(src, gens, imgs, dst)
            if f is not None:
                found.append(f)
            return
        for h in cands[k]:
            rec(k + 1, imgs + [int(h)])
            if first_only and found:
                return

    rec(0, [])
    return found


def automorphisms(table: np.ndarray) -> list[np.ndarray]:
    return _search(table, table, first_only=False)


def isomorphism(a: np.ndarray, b: np.ndarray) -> np.ndarray | None:
    """A bijection f with f(xy) = f(x) f(y), or None."""
    if a.shape != b.shape:
        return None
    if invariant(a) != invariant(b):
        return None
    found = _search(a, b, first_only=True)
    return found[0] if found else None


def invariant(table: np.ndarray) -> tuple:
    """Isomorphism invariant: counts of (order x, order y, order xy) over all pairs
    together with the centralizer profile."""
    m = len(table)
    o = element_orders(table)
    triples = Counter(zip(np.repeat(o, m).tolist(), np.tile(o, m).tolist(), o[table].ravel().tolist()))
    comm = table == table.T
    cent = Counter(zip(o.tolist(), comm.sum(axis=1).tolist()))
    return m, tuple(sorted(triples.items())), tuple(sorted(cent.items()))


def cyclic_extension(N: np.ndarray, p: int, phi: np.ndarray, a: int) -> np.ndarray:
    """Table of N<t> with t y t^-1 = phi(y), t^p = a; element x t^i has index x + |N| i."""
    m = len(N)
    powers = [np.arange(m)]
    for _ in range(1, p):
        powers.append(phi[powers[-1]])
    size = m * p
    table = np.empty((size, size), dtype=np.int64)
    xs = np.arange(m)
    for i in range(p):
        for j in range(p):
            # (x t^i)(y t^j) = x phi^i(y) t^(i+j)
            block = N[xs[:, None], powers[i][xs][None, :]]
            k = i + j
            if k >= p:
                block = N[block, a]
                k -= p
            table[i * m:(i + 1) * m, j * m:(j + 1) * m] = block + k * m
    return table


def _conj_by(N: np.ndarray, a: int, inv_a: int) -> np.ndarray:
    """x -> a x a^-1 as an index array."""
    return N[N[a, :], inv_a]


@lru_cache(maxsize=None)
def _catalog(max_order: int) -> tuple[tuple[np.ndarray, ...], ...]:
    by_order: list[list[np.ndarray]] = [[], [np.zeros((1, 1), dtype=np.int64)]]
    for n in range(2, max_order + 1):
        found: list[np.ndarray] = []
        invs: list[tuple] = []
        for p in _primes_dividing(n):
            for N in by_order[n // p]:
                m = len(N)
                e = int(np.nonzero((N == np.arange(m)).all(axis=1))[0][0])
                inv = np.argmax(N == e, axis=1)
                for phi in automorphisms(N):
                    phip = np.arange(m)
                    for _ in range(p):
                        phip = phi[phip]
                    for a in np.nonzero(phi == np.arange(m))[0]:
                        a = int(a)
                        if not np.array_equal(phip, _conj_by(N, a, int(inv[a]))):
                            continue
                        G = cyclic_extension(N, p, phi, a)
                        key = invariant(G)
                        if any(k == key and isomorphism(G, H) is not None
                               for k, H in zip(invs, found)):
                            continue
                        found.append(G)
                        invs.append(key)
        by_order.append(found)
    return tuple(tuple(gs) for gs in by_order)


def small_groups(max_order: int = 24) -> list[TableGroup]:
    """Every group of order at most ``max_order`` (<= 24) up to isomorphism,
    with the trivial length. Names are ``G<order>.<index>`` in discovery order."""
    if not 1 <= max_order <= MAX_ORDER:
        raise ValueError(f"max_order must lie in [1, {MAX_ORDER}]")
    out = []
    for n, tables in enumerate(_catalog(max_order)):
        for i, t in enumerate(tables):
            e = int(np.nonzero((t == np.arange(n)).all(axis=1))[0][0])
            lengths = [0 if x == e else 1 for x in range(n)]
            out.append(TableGroup(t, lengths, name=f"G{n}.{i + 1}"))
    return out
