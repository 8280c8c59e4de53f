"""numba-compiled twins of ``_numpy``; identical signatures and results."""
from __future__ import annotations

import math

import numpy as np
from numba import njit


@njit(cache=True, nogil=True)
def _moved_counts_2d(perms):
    B, n = perms.shape
    out = np.zeros(B, np.int64)
    for b in range(B):
        s = 0
        for i in range(n):
            if perms[b, i] != i:
                s += 1
        out[b] = s
    return out


def moved_counts(perms):
    perms = np.ascontiguousarray(perms, dtype=np.int64)
    shape = perms.shape
    flat = perms.reshape(-1, shape[-1])
    return _moved_counts_2d(flat).reshape(shape[:-1])


@njit(cache=True, nogil=True)
def _word_moved(tup, inv, codes, lo, hi):
    n = tup.shape[1]
    moved = 0
    for i in range(n):
        x = i
        for pos in range(hi - 1, lo - 1, -1):
            c = codes[pos]
            if c > 0:
                x = tup[c - 1, x]
            else:
                x = inv[-c - 1, x]
        if x != i:
            moved += 1
    return moved


@njit(cache=True, nogil=True)
def _invert_tuple(tup, inv):
    g, n = tup.shape
    for j in range(g):
        for i in range(n):
            inv[j, tup[j, i]] = i


@njit(cache=True, nogil=True)
def _relator_moved(tuples, codes, offsets):
    B, g, n = tuples.shape
    r = offsets.shape[0] - 1
    out = np.zeros((B, r), np.int64)
    inv = np.empty((g, n), np.int64)
    for b in range(B):
        _invert_tuple(tuples[b], inv)
        for k in range(r):
            out[b, k] = _word_moved(tuples[b], inv, codes, offsets[k], offsets[k + 1])
    return out


def relator_moved(tuples, codes, offsets):
    return _relator_moved(np.ascontiguousarray(tuples, dtype=np.int64),
                          np.asarray(codes, dtype=np.int64),
                          np.asarray(offsets, dtype=np.int64))


@njit(cache=True, nogil=True)
def _energy_one(tup, inv, codes, offsets):
    g, n = tup.shape
    _invert_tuple(tup, inv)
    relmax = 0
    for k in range(offsets.shape[0] - 1):
        m = _word_moved(tup, inv, codes, offsets[k], offsets[k + 1])
        if m > relmax:
            relmax = m
    gmin = n
    for j in range(g):
        s = 0
        for i in range(n):
            if tup[j, i] != i:
                s += 1
        if s < gmin:
            gmin = s
    return relmax + n - gmin


@njit(cache=True, nogil=True)
def _tuple_energy(tuples, codes, offsets):
    B, g, n = tuples.shape
    out = np.empty(B, np.int64)
    inv = np.empty((g, n), np.int64)
    for b in range(B):
        out[b] = _energy_one(tuples[b], inv, codes, offsets)
    return out


def tuple_energy(tuples, codes, offsets):
    return _tuple_energy(np.ascontiguousarray(tuples, dtype=np.int64),
                         np.asarray(codes, dtype=np.int64),
                         np.asarray(offsets, dtype=np.int64))


@njit(cache=True, nogil=True)
def _rank_mod_p(m, p):
    rows, cols = m.shape
    r = 0
    for c in range(cols):
        if r == rows:
            break
        piv = -1
        for i in range(r, rows):
            if m[i, c] != 0:
                piv = i
                break
        if piv < 0:
            continue
        if piv != r:
            for j in range(cols):
                t = m[r, j]
                m[r, j] = m[piv, j]
                m[piv, j] = t
        # modular inverse by Fermat
        inv = 1
        base = m[r, c]
        e = p - 2
        while e > 0:
            if e & 1:
                inv = (inv * base) % p
            base = (base * base) % p
            e >>= 1
        for j in range(cols):
            m[r, j] = (m[r, j] * inv) % p
        for i in range(r + 1, rows):
            f = m[i, c]
            if f != 0:
                for j in range(cols):
                    m[i, j] = (m[i, j] - f * m[r, j]) % p
        r += 1
    return r


def rank_mod_p(mat, p):
    m = np.array(mat, dtype=np.int64) % p
    return int(_rank_mod_p(m, np.int64(p)))


@njit(cache=True, nogil=True)
def _count_pattern_colorings(k, n, idx, allowed, min_good):
    f = idx.shape[1]
    digits = np.zeros(n, np.int64)
    total = 1
    for _ in range(n):
        total *= k
    count = 0
    for code in range(total):
        good = 0
        for i in range(n):
            pat = 0
            for j in range(f):
                pat = pat * k + digits[idx[i, j]]
            if allowed[pat]:
                good += 1
        if good >= min_good:
            count += 1
        # odometer increment, last digit least significant
        pos = n - 1
        while pos >= 0:
            digits[pos] += 1
            if digits[pos] < k:
                break
            digits[pos] = 0
            pos -= 1
    return count


def count_pattern_colorings(k, n, idx, allowed, min_good):
    return int(_count_pattern_colorings(np.int64(k), np.int64(n),
                                        np.ascontiguousarray(idx, dtype=np.int64),
                                        np.asarray(allowed, dtype=np.bool_),
                                        np.int64(min_good)))


@njit(cache=True, nogil=True)
def _anneal_run(cur, codes, offsets, prop_gen, prop_a, prop_b, uniforms,
                t0, cooling):
    g, n = cur.shape
    inv = np.empty((g, n), np.int64)
    e_cur = _energy_one(cur, inv, codes, offsets)
    best = cur.copy()
    e_best = e_cur
    temp = t0
    accepted = 0
    for s in range(prop_gen.shape[0]):
        j = prop_gen[s]
        a = prop_a[s]
        b = prop_b[s]
        va = cur[j, a]
        vb = cur[j, b]
        cur[j, a] = vb
        cur[j, b] = va
        e_new = _energy_one(cur, inv, codes, offsets)
        delta = (e_new - e_cur) / n
        if delta <= 0 or uniforms[s] < math.exp(-delta / temp):
            e_cur = e_new
            accepted += 1
            if e_cur < e_best:
                e_best = e_cur
                best[:, :] = cur
        else:
            cur[j, a] = va
            cur[j, b] = vb
        temp *= cooling
    return best, e_best, cur, e_cur, accepted


def anneal_run(start, codes, offsets, prop_gen, prop_a, prop_b, uniforms,
               t0, cooling):
    cur = np.array(start, dtype=np.int64)
    best, e_best, cur, e_cur, acc = _anneal_run(
        cur, np.asarray(codes, np.int64), np.asarray(offsets, np.int64),
        np.asarray(prop_gen, np.int64), np.asarray(prop_a, np.int64),
        np.asarray(prop_b, np.int64), np.asarray(uniforms, np.float64),
        float(t0), float(cooling))
    return best, int(e_best), cur, int(e_cur), int(acc)


@njit(cache=True, nogil=True)
def _exhaustive_min(table, g, codes, offsets, lo, hi):
    m, n = table.shape
    tup = np.empty((g, n), np.int64)
    inv = np.empty((g, n), np.int64)
    digits = np.zeros(g, np.int64)
    rem = lo
    for pos in range(g - 1, -1, -1):
        digits[pos] = rem % m
        rem //= m
    best_e = np.iinfo(np.int64).max
    best_i = -1
    for idx in range(lo, hi):
        for j in range(g):
            for i in range(n):
                tup[j, i] = table[digits[j], i]
        e = _energy_one(tup, inv, codes, offsets)
        if e < best_e:
            best_e = e
            best_i = idx
        pos = g - 1
        while pos >= 0:
            digits[pos] += 1
            if digits[pos] < m:
                break
            digits[pos] = 0
            pos -= 1
    return best_e, best_i


def exhaustive_min(table, g, codes, offsets, lo, hi):
    e, i = _exhaustive_min(np.ascontiguousarray(table, dtype=np.int64), np.int64(g),
                           np.asarray(codes, np.int64), np.asarray(offsets, np.int64),
                           np.int64(lo), np.int64(hi))
    return int(e), int(i)
