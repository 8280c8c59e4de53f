"""Approximate and exact solutions of relator systems in symmetric groups.

The scalar objective of a tuple x is its defect
    max_i l(w_i(x)) + 1 - min_j l(x_j),
kept exact as the integer energy max_moved(w_i) + n - min_moved(x_j) over n.
"""
from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from math import factorial
from typing import Sequence

import numpy as np

from .. import kernels
from ..config import DEFAULT_CAPS, CapExceeded
from ..groups import LengthGroup, TableGroup, check_length_axioms, symmetric_table
from ..perm import Permutation, all_permutations, word_eval
from .presentation import Presentation, higman

ANNEAL_T0 = 0.5
ANNEAL_COOLING = 0.995
ANNEAL_STEPS = 10_000


def _as_array(t) -> np.ndarray:
    if isinstance(t, np.ndarray):
        return np.asarray(t, dtype=np.int64)
    return np.stack([np.asarray(s.images if isinstance(s, Permutation) else s, dtype=np.int64)
                     for s in t])


def _check_tuple(p: Presentation, arr: np.ndarray):
    if arr.ndim != 2 or arr.shape[0] != p.num_gens:
        raise ValueError(f"expected {p.num_gens} permutations of one degree")


def presentation_defect(p: Presentation, t) -> Fraction:
    arr = _as_array(t)
    _check_tuple(p, arr)
    codes, offsets = p.encode()
    e = int(kernels.tuple_energy(arr[None], codes, offsets)[0])
    return Fraction(e, arr.shape[1])


def relator_lengths(p: Presentation, t) -> list[Fraction]:
    arr = _as_array(t)
    codes, offsets = p.encode()
    moved = kernels.relator_moved(arr[None], codes, offsets)[0]
    return [Fraction(int(m), arr.shape[1]) for m in moved]


def reference_defect(p: Presentation, t: Sequence[Permutation]) -> Fraction:
    """Slow defect straight from word evaluation; used as a test oracle."""
    n = t[0].n
    rel = max((word_eval(r, t, identity=Permutation.identity(n)).moved_points() for r in p.relators),
              default=0)
    gmin = min(s.moved_points() for s in t)
    return Fraction(rel + n - gmin, n)


@dataclass
class TupleCandidate:
    perms: tuple[Permutation, ...]
    defect: Fraction

    @classmethod
    def of(cls, p: Presentation, t) -> "TupleCandidate":
        arr = _as_array(t)
        return cls(tuple(Permutation(r, check=False) for r in arr), presentation_defect(p, arr))

    @property
    def n(self) -> int:
        return self.perms[0].n

    def array(self) -> np.ndarray:
        return _as_array(self.perms)

    def key(self) -> tuple:
        return (self.defect, tuple(tuple(int(v) for v in s.images) for s in self.perms))


@dataclass
class SearchResult:
    best: TupleCandidate
    method: str
    params: dict = field(default_factory=dict)
    evaluations: int = 0


def _split(lo: int, hi: int, parts: int) -> list[tuple[int, int]]:
    parts = max(1, min(parts, hi - lo))
    step = -(-(hi - lo) // parts)
    return [(a, min(hi, a + step)) for a in range(lo, hi, step)]


def _map(fn, items, workers: int):
    if workers <= 1 or len(items) <= 1:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=workers) as ex:
        return list(ex.map(fn, items))


def search_approximate(p: Presentation, n: int, method: str = "anneal", *, seed: int = 0,
                       workers: int = 1, restarts: int = 4, steps: int = ANNEAL_STEPS,
                       trials: int = 1000, t0: float = ANNEAL_T0, cooling: float = ANNEAL_COOLING,
                       caps=DEFAULT_CAPS) -> SearchResult:
    """Minimise the defect over tuples in S_n.

    ``exhaustive`` scans all tuples (ties go to the lexicographically first);
    ``anneal`` runs independent Metropolis restarts whose proposal multiplies
    one generator by a random transposition, with geometric cooling;
    ``random`` draws uniform tuples. Restarts and trials are seeded from
    ``seed`` alone, and results are reduced by (defect, tuple), so the output
    does not depend on ``workers``.
    """
    g = p.num_gens
    codes, offsets = p.encode()
    if n < 1:
        raise ValueError("degree must be positive")
    if method == "exhaustive":
        m = factorial(n)
        total = m ** g
        work = total * max(1, len(codes) + g)
        if m > caps.enum or work > caps.search_work:
            raise CapExceeded(f"exhaustive search needs {work} letter evaluations, cap {caps.search_work}")
        table = all_permutations(n)
        parts = _split(0, total, workers * 4)
        res = _map(lambda r: kernels.exhaustive_min(table, g, codes, offsets, r[0], r[1]), parts, workers)
        e, idx = min(res)
        digits = [(idx // m ** (g - 1 - j)) % m for j in range(g)]
        best = TupleCandidate.of(p, table[digits])
        return SearchResult(best, "exhaustive", {}, total)
    root = np.random.SeedSequence(seed)
    if method == "anneal":
        if n < 2:
            return SearchResult(TupleCandidate.of(p, np.zeros((g, 1), np.int64)), "anneal",
                                {"restarts": restarts, "steps": 0}, 1)
        children = root.spawn(restarts)

        def run(ss):
            rng = np.random.default_rng(ss)
            start = np.stack([rng.permutation(n) for _ in range(g)]).astype(np.int64)
            gen = rng.integers(0, g, size=steps)
            a = rng.integers(0, n, size=steps)
            b = (a + rng.integers(1, n, size=steps)) % n
            u = rng.random(steps)
            best, e_best, _, _, acc = kernels.anneal_run(start, codes, offsets, gen, a, b, u, t0, cooling)
            return TupleCandidate.of(p, best)

        cands = _map(run, children, workers)
        best = min(cands, key=TupleCandidate.key)
        params = {"restarts": restarts, "steps": steps, "t0": t0, "cooling": cooling}
        return SearchResult(best, "anneal", params, restarts * (steps + 1))
    if method == "random":
        rng = np.random.default_rng(root)
        tuples = np.stack([np.stack([rng.permutation(n) for _ in range(g)]) for _ in range(trials)]).astype(np.int64)
        e = kernels.tuple_energy(tuples, codes, offsets)
        order = sorted(range(trials), key=lambda i: (int(e[i]), tuples[i].tobytes()))
        return SearchResult(TupleCandidate.of(p, tuples[order[0]]), "random", {"trials": trials}, trials)
    raise ValueError(f"unknown method {method!r}")


# -- exact solutions -------------------------------------------------------------------------

def _conjugation_shape(r) -> tuple[int, int, int, int] | None:
    """Match y x^s y^-1 x^-t (letters already expanded); returns (y, x, s, t)."""
    if len(r) < 3 or r[0][1] != 1:
        return None
    y = r[0][0]
    try:
        k = r.index((y, -1))
    except ValueError:
        return None
    mid, tail = r[1:k], r[k + 1:]
    if not mid or any(l[0] == y for l in mid + tail):
        return None
    xs = {l[0] for l in mid + tail}
    if len(xs) != 1:
        return None
    x = xs.pop()
    s = sum(e for _, e in mid)
    t = -sum(e for _, e in tail)
    if any(e != mid[0][1] for _, e in mid) or (tail and any(e != tail[0][1] for _, e in tail)):
        return None
    return y, x, s, t


@dataclass
class ScanResult:
    group: TableGroup
    solutions: list[tuple[int, ...]]
    nodes: int

    def perms(self) -> list[tuple[Permutation, ...]]:
        return [tuple(self.group.payload[i] for i in sol) for sol in self.solutions]

    @property
    def trivial_only(self) -> bool:
        e = int(self.group.identity())
        return len(self.solutions) == 1 and all(i == e for i in self.solutions[0])


def _power_table(group: TableGroup, k: int) -> np.ndarray:
    m = group.order
    el = np.arange(m)
    base = el if k >= 0 else group.inverse(el)
    out = np.full(m, int(group.identity()), dtype=np.int64)
    for _ in range(abs(k)):
        out = group.table[out, base]
    return out


def exact_scan(p: Presentation, group: int | TableGroup, *, workers: int = 1,
               caps=DEFAULT_CAPS) -> ScanResult:
    """All tuples of ``group`` (or of S_n) satisfying every relator exactly.

    Generators are assigned in order. A relator y x^s y^-1 = x^t restricts
    whichever of x, y is assigned second to the elements solving that
    equation, and every relator is checked as soon as its letters are known.
    The outer loop over the first generator is split across workers and the
    pieces are concatenated in order.
    """
    if isinstance(group, (int, np.integer)):
        n = int(group)
        if factorial(n) > 720:
            raise CapExceeded("exact_scan tabulates S_n and is limited to n <= 6")
        group = symmetric_table(n)
    G = group
    m = G.order
    if m > caps.enum:
        raise CapExceeded(f"|G| = {m} exceeds enumeration cap {caps.enum}")
    g = p.num_gens
    table, inv = G.table, G.inverse(np.arange(m))
    e = int(G.identity())
    shapes = [_conjugation_shape(r) for r in p.relators]
    powers: dict[int, np.ndarray] = {}

    def pw(k):
        if k not in powers:
            powers[k] = _power_table(G, k)
        return powers[k]

    def word_value(word, assign):
        v = e
        for gi, ex in word:
            v = int(table[v, assign[gi] if ex > 0 else inv[assign[gi]]])
        return v

    ready = [[r for r in p.relators if r and max(l[0] for l in r) == d] for d in range(g)]
    cand_cache: dict = {}

    def candidates(d, assign):
        allowed = None
        for sh in shapes:
            if sh is None:
                continue
            y, x, s, t = sh
            if y == d and x < d:
                key = ("y", x, s, t, assign[x])
                if key not in cand_cache:
                    xs, xt = int(pw(s)[assign[x]]), int(pw(t)[assign[x]])
                    cand_cache[key] = np.nonzero(table[table[:, xs], inv] == xt)[0]
                c = cand_cache[key]
            elif x == d and y < d:
                key = ("x", y, s, t, assign[y])
                if key not in cand_cache:
                    yy = assign[y]
                    cand_cache[key] = np.nonzero(table[table[yy, pw(s)], inv[yy]] == pw(t))[0]
                c = cand_cache[key]
            else:
                continue
            allowed = c if allowed is None else np.intersect1d(allowed, c, assume_unique=True)
        return range(m) if allowed is None else [int(v) for v in allowed]

    def solve(first_values):
        sols, nodes = [], 0
        assign = [0] * g

        def rec(d):
            nonlocal nodes
            if d == g:
                sols.append(tuple(assign))
                return
            vals = first_values if d == 0 else candidates(d, assign)
            for v in vals:
                nodes += 1
                assign[d] = v
                if all(word_value(r, assign) == e for r in ready[d]):
                    rec(d + 1)
            assign[d] = 0

        rec(0)
        return sols, nodes

    chunks = [list(range(a, b)) for a, b in _split(0, m, max(1, workers) * 4)]
    out = _map(solve, chunks, workers)
    sols = [s for part, _ in out for s in part]
    nodes = sum(k for _, k in out)
    if nodes > caps.search_work:
        raise CapExceeded("exact scan exceeded the work cap")
    return ScanResult(G, sols, nodes)


def verify_solution(p: Presentation, t: Sequence[Permutation]) -> bool:
    n = t[0].n
    ident = Permutation.identity(n)
    return all(word_eval(r, t, identity=ident).is_identity() for r in p.relators)


def tuple_distance(t, s) -> Fraction:
    """max_j l(t_j s_j^-1), i.e. the largest Hamming distance between entries."""
    a, b = _as_array(t), _as_array(s)
    return Fraction(int((a != b).sum(axis=1).max()), a.shape[1])


@dataclass
class NearestResult:
    solution: tuple[Permutation, ...] | None
    distance: Fraction | None
    mode: str
    candidates: int


def nearest_exact(p: Presentation, t, mode: str = "exhaustive", *, depth: int = 2,
                  workers: int = 1, caps=DEFAULT_CAPS) -> NearestResult:
    """Closest exact solution in the tuple distance.

    ``exhaustive`` minimises over the full exact_scan list (ties to the first
    in scan order). ``local`` examines the tuples obtained from t by replacing
    entries with the identity and by up to ``depth`` right multiplications of
    single entries by transpositions, keeping the best one that satisfies
    every relator; the all-identity tuple is always among them.
    """
    arr = _as_array(t)
    _check_tuple(p, arr)
    g, n = arr.shape
    if mode == "exhaustive":
        scan = exact_scan(p, n, workers=workers, caps=caps)
        if not scan.solutions:
            return NearestResult(None, None, mode, 0)
        payload = np.stack([scan.group.payload[i].images for i in range(scan.group.order)])
        sols = payload[np.asarray(scan.solutions)]  # (S, g, n)
        dist = (sols != arr[None]).sum(axis=2).max(axis=1)
        k = int(np.argmin(dist))
        best = tuple(Permutation(r, check=False) for r in sols[k])
        return NearestResult(best, Fraction(int(dist[k]), n), mode, len(sols))
    if mode != "local":
        raise ValueError(f"unknown mode {mode!r}")
    codes, offsets = p.encode()
    cands = []
    ident = np.arange(n)
    for mask in range(1 << g):
        c = arr.copy()
        for j in range(g):
            if mask >> j & 1:
                c[j] = ident
        cands.append(c)
    moves = [(j, a, b) for j in range(g) for a, b in combinations(range(n), 2)]
    frontier = [arr]
    for _ in range(depth):
        nxt = []
        for base in frontier:
            for j, a, b in moves:
                c = base.copy()
                c[j, a], c[j, b] = base[j, b], base[j, a]
                nxt.append(c)
        cands.extend(nxt)
        frontier = nxt
        if len(cands) > caps.work:
            raise CapExceeded("local neighbourhood exceeds the work cap")
    stack = np.stack(cands)
    rel = kernels.relator_moved(stack, codes, offsets)
    exact = np.nonzero(rel.max(axis=1) == 0)[0] if rel.shape[1] else np.arange(len(stack))
    dist = (stack[exact] != arr[None]).sum(axis=2).max(axis=1)
    k = int(np.argmin(dist))
    best = tuple(Permutation(r, check=False) for r in stack[exact[k]])
    return NearestResult(best, Fraction(int(dist[k]), n), mode, len(stack))


# -- empirical stability -------------------------------------------------------------------------

@dataclass
class ProfileRow:
    delta: Fraction
    trial: int
    achieved: Fraction
    epsilon: Fraction | None
    planted: Fraction | None
    reached: bool


def random_transposition_product(n: int, k: int, rng: np.random.Generator) -> np.ndarray:
    out = np.arange(n)
    for _ in range(k):
        a, b = rng.choice(n, size=2, replace=False)
        out[[a, b]] = out[[b, a]]
    return out


def stability_profile(p: Presentation, n: int, trials: int, deltas: Sequence, seed: int = 0, *,
                      planted: bool = True, nearest_mode: str = "exhaustive", workers: int = 1,
                      steps: int = 2000, caps=DEFAULT_CAPS) -> list[ProfileRow]:
    """Empirical (delta, epsilon) data at degree n.

    Planted mode perturbs a seeded exact solution by floor(delta n / 2)
    transpositions on one generator and records the planted
    distance as a witness; search mode anneals from a derived seed. Each
    tuple is then projected with nearest_exact.
    """
    rows = []
    sols = exact_scan(p, n, workers=workers, caps=caps).perms() if planted else None
    for di, d in enumerate(deltas):
        d = Fraction(d)
        for t in range(trials):
            ss = np.random.SeedSequence(seed, spawn_key=(di, t))
            if planted:
                rng = np.random.default_rng(ss)
                base = _as_array(sols[int(rng.integers(len(sols)))])
                tup = base.copy()
                j = int(rng.integers(p.num_gens))
                k = int(d * n) // 2
                tup[j] = tup[j][random_transposition_product(n, k, rng)]
                plant = tuple_distance(tup, base)
            else:
                child = int(ss.generate_state(1)[0])
                res = search_approximate(p, n, "anneal", seed=child, restarts=1, steps=steps)
                tup, plant = res.best.array(), None
            achieved = presentation_defect(p, tup)
            near = nearest_exact(p, tup, nearest_mode, workers=workers, caps=caps)
            rows.append(ProfileRow(d, t, achieved, near.distance, plant, achieved <= d))
    return rows


# -- commutator-contractive lengths ---------------------------------------------------------------

HIGMAN_THRESHOLD = Fraction(1, 176)


@dataclass
class ContractiveReport:
    axioms_ok: bool
    contractive: bool
    pairs: int
    violations: int
    worst_pair: tuple | None
    relator_defects: list
    premise: bool
    conclusion: bool | None
    messages: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return self.axioms_ok and self.contractive and self.conclusion is not False


def commutator_contractive_suite(G: TableGroup, tup: Sequence[int], eps, *,
                                 tol: float = 1e-9, caps=DEFAULT_CAPS) -> ContractiveReport:
    """(a) l([x,y]) <= 4 l(x) l(y) on every pair; (b) when eps < 1/176 and the
    tuple satisfies the Higman relators up to eps, check l(a_i) < 4 eps."""
    ax = check_length_axioms(G, caps=caps, tol=tol)
    if not ax.ok:
        return ContractiveReport(False, False, 0, 0, None, [], False, None, ax.violations)
    m = G.order
    el = np.arange(m)
    X, Y = np.meshgrid(el, el, indexing="ij")
    comm = G.compose(G.compose(X, Y), G.compose(G.inverse(X), G.inverse(Y)))
    L = G.length_float
    exact = G.exact
    if exact:
        lhs = G.length_num(comm) * G.denominator
        rhs = 4 * G.length_num(X) * G.length_num(Y)
        bad = lhs > rhs
    else:
        bad = L(comm) > 4 * L(X) * L(Y) + tol
    nbad = int(bad.sum())
    worst = None
    if nbad:
        i, j = map(int, np.argwhere(bad)[0])
        worst = (G.names[i], G.names[j])
    h = higman()
    tup = [int(x) for x in tup]
    if len(tup) != 4:
        raise ValueError("the Higman tuple has four entries")
    defects = []
    for r in h.relators:
        v = int(G.identity())
        for gi, ex in r:
            v = int(G.table[v, tup[gi] if ex > 0 else G.inverse(tup[gi])])
        defects.append(G.length(v))
    eps_f = float(Fraction(eps))
    premise = eps_f < float(HIGMAN_THRESHOLD) and all(float(d) <= eps_f + (0 if exact else tol) for d in defects)
    conclusion = None
    if premise:
        conclusion = all(float(G.length(a)) < 4 * eps_f for a in tup)
    return ContractiveReport(True, nbad == 0, m * m, nbad, worst, defects, premise, conclusion)
