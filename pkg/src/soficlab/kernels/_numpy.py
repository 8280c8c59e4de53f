"""Pure-numpy implementations of the hot loops.

Every function here has a twin of the same name and signature in
``_numba.py``; results must agree exactly (integers only, no float
reductions except the annealing acceptance test, which consumes the same
pre-drawn uniforms in both).
"""
from __future__ import annotations

import math

import numpy as np


def moved_counts(perms):
    perms = np.asarray(perms, dtype=np.int64)
    n = perms.shape[-1]
    return (perms != np.arange(n)).sum(axis=-1).astype(np.int64)


def _apply_word(tuples, invs, codes, lo, hi):
    B, _, n = tuples.shape
    cur = np.broadcast_to(np.arange(n, dtype=np.int64), (B, n)).copy()
    # rightmost letter acts first
    for pos in range(hi - 1, lo - 1, -1):
        c = codes[pos]
        letter = tuples[:, c - 1, :] if c > 0 else invs[:, -c - 1, :]
        cur = np.take_along_axis(letter, cur, axis=1)
    return cur


def relator_moved(tuples, codes, offsets):
    """Moved-point counts of each encoded word on each tuple.

    ``tuples`` has shape (B, g, n); letters are ``+(j+1)`` for generator j and
    ``-(j+1)`` for its inverse; word r occupies ``codes[offsets[r]:offsets[r+1]]``.
    """
    tuples = np.ascontiguousarray(tuples, dtype=np.int64)
    B, g, n = tuples.shape
    invs = np.empty_like(tuples)
    rows = np.arange(n, dtype=np.int64)
    np.put_along_axis(invs, tuples, np.broadcast_to(rows, tuples.shape), axis=2)
    r = len(offsets) - 1
    out = np.zeros((B, r), dtype=np.int64)
    for k in range(r):
        cur = _apply_word(tuples, invs, codes, offsets[k], offsets[k + 1])
        out[:, k] = (cur != rows).sum(axis=1)
    return out


def tuple_energy(tuples, codes, offsets):
    """Integer defect numerator: max relator moved + n - min generator moved."""
    tuples = np.asarray(tuples, dtype=np.int64)
    n = tuples.shape[-1]
    rel = relator_moved(tuples, codes, offsets)
    relmax = rel.max(axis=1) if rel.shape[1] else np.zeros(len(tuples), np.int64)
    gmin = moved_counts(tuples).min(axis=1)
    return relmax + n - gmin


def rank_mod_p(mat, p):
    m = np.array(mat, dtype=np.int64) % p
    rows, cols = m.shape
    r = 0
    for c in range(cols):
        if r == rows:
            break
        nz = np.nonzero(m[r:, c])[0]
        if nz.size == 0:
            continue
        piv = r + nz[0]
        if piv != r:
            m[[r, piv]] = m[[piv, r]]
        inv = pow(int(m[r, c]), p - 2, p)
        m[r] = (m[r] * inv) % p
        below = m[r + 1:, c].copy()
        if below.any():
            m[r + 1:] = (m[r + 1:] - below[:, None] * m[r]) % p
        r += 1
    return r


def count_pattern_colorings(k, n, idx, allowed, min_good):
    """Count c in [0,k)^n with at least ``min_good`` positions whose pattern is allowed.

    Position i reads the pattern (c[idx[i,0]], ..., c[idx[i,f-1]]) encoded
    big-endian in base k.
    """
    idx = np.asarray(idx, dtype=np.int64)
    allowed = np.asarray(allowed, dtype=np.bool_)
    f = idx.shape[1]
    weights = k ** np.arange(f - 1, -1, -1, dtype=np.int64)
    place = k ** np.arange(n - 1, -1, -1, dtype=np.int64)
    total = k ** n
    chunk = max(1, min(total, (1 << 22) // max(n, 1)))
    count = 0
    for start in range(0, total, chunk):
        codes = np.arange(start, min(total, start + chunk), dtype=np.int64)
        digits = (codes[:, None] // place) % k
        pats = (digits[:, idx] * weights).sum(axis=2)
        good = allowed[pats].sum(axis=1)
        count += int((good >= min_good).sum())
    return count


def anneal_run(start, codes, offsets, prop_gen, prop_a, prop_b, uniforms,
               t0, cooling):
    """Metropolis walk; proposal multiplies one generator by a transposition.

    Returns (best tuple, best energy, final tuple, final energy, accepted).
    """
    cur = np.array(start, dtype=np.int64)
    n = cur.shape[1]
    e_cur = int(tuple_energy(cur[None], codes, offsets)[0])
    best = cur.copy()
    e_best = e_cur
    temp = t0
    accepted = 0
    for s in range(len(prop_gen)):
        j, a, b = prop_gen[s], prop_a[s], prop_b[s]
        cand = cur.copy()
        row = cand[j]
        # x_j <- x_j o (a b)
        row[a], row[b] = cur[j, b], cur[j, a]
        e_new = int(tuple_energy(cand[None], codes, offsets)[0])
        delta = (e_new - e_cur) / n
        if delta <= 0 or uniforms[s] < math.exp(-delta / temp):
            cur = cand
            e_cur = e_new
            accepted += 1
            if e_cur < e_best:
                e_best = e_cur
                best = cur.copy()
        temp *= cooling
    return best, e_best, cur, e_cur, accepted


def exhaustive_min(table, g, codes, offsets, lo, hi):
    """Minimum tuple energy over mixed-radix indices [lo, hi).

    Ties resolve to the smallest index, i.e. lexicographically first tuple.
    """
    table = np.asarray(table, dtype=np.int64)
    m, n = table.shape
    best_e = np.iinfo(np.int64).max
    best_i = -1
    chunk = max(1, (1 << 20) // max(1, g * n))
    place = m ** np.arange(g - 1, -1, -1, dtype=np.int64)
    for start in range(lo, hi, chunk):
        ids = np.arange(start, min(hi, start + chunk), dtype=np.int64)
        digits = (ids[:, None] // place) % m
        tuples = table[digits]
        e = tuple_energy(tuples, codes, offsets)
        k = int(np.argmin(e))
        if e[k] < best_e:
            best_e = int(e[k])
            best_i = int(ids[k])
    return best_e, best_i
