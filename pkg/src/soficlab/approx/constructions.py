"""Explicit approximate morphisms: Folner sets, products, extensions, free
products, the fixed-point-free repair and the passage to unitaries.

Wherever a partial bijection has to be completed to a permutation, the
unmatched domain points are matched to the unmatched range points in
increasing order, so every construction is deterministic.
"""
from __future__ import annotations

from fractions import Fraction
from typing import Callable, Hashable, Sequence

import numpy as np

from ..config import DEFAULT_CAPS, CapExceeded
from ..perm import Permutation, direct_tensor
from ..unitary import permutation_matrix
from .models import (FreeProductModel, GroupModel, LatticeModel, ProductModel, lattice_box)
from .morphism import ApproxMorphism


def complete_partial(img: np.ndarray) -> np.ndarray:
    """Fill the ``-1`` entries of a partial injection so it becomes a bijection."""
    img = np.asarray(img, dtype=np.int64).copy()
    n = len(img)
    free_dom = np.nonzero(img < 0)[0]
    used = np.zeros(n, dtype=bool)
    used[img[img >= 0]] = True
    free_rng = np.nonzero(~used)[0]
    if len(free_dom) != len(free_rng):
        raise ValueError("partial map is not injective")
    img[free_dom] = free_rng
    return img


# -- Folner ---------------------------------------------------------------------

def symmetric_closure(model: GroupModel, F: Sequence, with_identity: bool = True) -> list:
    seen: dict = {}
    items = ([model.identity()] if with_identity else []) + list(F) + [model.inv(g) for g in F]
    for g in items:
        seen.setdefault(model.key(g), g)
    return list(seen.values())


def translation_perm(K: Sequence[tuple], index: dict, gamma: tuple) -> tuple[np.ndarray, int]:
    """Translation by gamma on K, completed; also returns |K \\ (K - gamma)|."""
    img = np.full(len(K), -1, dtype=np.int64)
    for a, x in enumerate(K):
        b = index.get(tuple(u + v for u, v in zip(gamma, x)))
        if b is not None:
            img[a] = b
    missing = int((img < 0).sum())
    return complete_partial(img), missing


def folner_morphism(K: Sequence[tuple] | tuple[int, ...], F: Sequence[tuple],
                    d: int | None = None) -> tuple[ApproxMorphism, Fraction]:
    """Translation action of Z^d on a finite set K.

    ``K`` is a list of points or, when it is a tuple of ints with ``d`` unset,
    the shape of a box at the origin. Returns the morphism on F, F^-1 and 0
    together with eps = max |(gamma + K) symdiff K| / (2|K|).
    """
    if isinstance(K, tuple) and K and all(isinstance(v, (int, np.integer)) for v in K) and d is None:
        pts = lattice_box(K)
    else:
        pts = sorted(tuple(int(v) for v in x) for x in K)
    if not pts:
        raise ValueError("K is empty")
    dim = len(pts[0])
    model = LatticeModel(dim)
    F = [tuple(int(v) for v in g) for g in F]
    index = {x: i for i, x in enumerate(pts)}
    if len(index) != len(pts):
        raise ValueError("K has repeated points")
    domain = sorted(symmetric_closure(model, F))
    images, eps = [], Fraction(0)
    for g in domain:
        img, missing = translation_perm(pts, index, g)
        images.append(Permutation(img, check=False))
        eps = max(eps, Fraction(missing, len(pts)))
    return ApproxMorphism(model, domain, images), eps


def folner_epsilon(K: Sequence[tuple], F: Sequence[tuple]) -> Fraction:
    Ks = set(map(tuple, K))
    out = Fraction(0)
    for g in list(F) + [tuple(-v for v in g) for g in F]:
        shifted = {tuple(a + b for a, b in zip(g, x)) for x in Ks}
        out = max(out, Fraction(len(shifted ^ Ks), 2 * len(Ks)))
    return out


# -- direct product ---------------------------------------------------------------

def product_morphism(phi0: ApproxMorphism, phi1: ApproxMorphism, *, caps=DEFAULT_CAPS) -> ApproxMorphism:
    if phi0.target != "sym" or phi1.target != "sym":
        raise ValueError("product_morphism needs symmetric targets")
    model = ProductModel(phi0.model, phi1.model)
    domain, images = [], []
    for g0, s0 in phi0.items():
        for g1, s1 in phi1.items():
            domain.append((g0, g1))
            images.append(direct_tensor(s0, s1, caps=caps))
    return ApproxMorphism(model, domain, images)


# -- extension by an amenable quotient -----------------------------------------------

def extension_morphism(inner: ApproxMorphism, gamma: GroupModel, quotient: GroupModel,
                       qmap: Callable, section: Callable, to_inner: Callable,
                       Abar: Sequence, F: Sequence) -> ApproxMorphism:
    """Approximate morphism of an extension 1 -> N -> Gamma -> Q -> 1.

    ``inner`` approximates N; ``Abar`` is a Folner set of Q with section
    ``section: Q -> Gamma``; ``to_inner`` turns an element of Gamma lying in
    N into an element of the inner model. Points are pairs (i, h) with i a
    point of the inner degree and h in Abar, encoded as ``i * |Abar| + h``.
    For g in F and h with qmap(g) h in Abar the image is
    (sigma_{r(qmap(g)h)^-1 g r(h)}(i), qmap(g) h); the remaining pairs keep i
    and move h by the ordered matching, as in the Folner construction.
    """
    if inner.target != "sym":
        raise ValueError("inner morphism must target a symmetric group")
    n = inner.degree
    A = list(Abar)
    m = len(A)
    if m == 0:
        raise ValueError("Abar is empty")
    aidx = {quotient.key(a): k for k, a in enumerate(A)}
    reps = []
    for a in A:
        r = section(a)
        if quotient.key(qmap(r)) != quotient.key(a):
            raise ValueError(f"section inconsistent with quotient map at {quotient.format(a)}")
        reps.append(r)
    F = symmetric_closure(gamma, F)
    images = []
    for g in F:
        gbar = qmap(g)
        move = np.full(m, -1, dtype=np.int64)
        for k, a in enumerate(A):
            t = aidx.get(quotient.key(quotient.mul(gbar, a)))
            if t is not None:
                move[k] = t
        pi = complete_partial(move)
        img = np.empty(n * m, dtype=np.int64)
        i = np.arange(n)
        for k in range(m):
            if move[k] >= 0:
                t = int(move[k])
                x = gamma.mul(gamma.mul(gamma.inv(reps[t]), g), reps[k])
                if not quotient.is_identity(qmap(x)):
                    raise ValueError("section inconsistent with quotient map")
                y = to_inner(x)
                if y not in inner:
                    raise ValueError(f"inner morphism is not defined on {inner.model.format(y)}")
                s = inner(y).images
                img[i * m + k] = s * m + t
            else:
                img[i * m + k] = i * m + int(pi[k])
        images.append(Permutation(img, check=False))
    return ApproxMorphism(gamma, F, images)


# -- fixed-point-free repair ------------------------------------------------------------

def _good_set(t: np.ndarray, tinv: np.ndarray) -> np.ndarray:
    """Points i with t^-1-image returning to i and t(i) != i (a boolean mask)."""
    ar = np.arange(len(t))
    return (tinv[t] == ar) & (t != ar)


def nice_repair(phi: ApproxMorphism) -> ApproxMorphism:
    """Doubled morphism on n x 2 (point (i, j) encoded as 2i + j) whose images of
    nonidentity elements are fixed-point free and satisfy s_{g^-1} = s_g^-1.

    On A_g x 2 the new map follows tau_g; (A_{g^-1} \\ A_g) x 2 is sent onto
    (A_g \\ A_{g^-1}) x 2 by the ordered matching phi_g, whose inverse serves
    g^-1; the remaining points are swapped within their pair.
    """
    if phi.target != "sym":
        raise ValueError("nice_repair needs a symmetric target")
    model = phi.model
    n = phi.degree
    P = phi.image_array()
    out: dict[int, np.ndarray] = {}
    for a, g in enumerate(phi.domain):
        if a in out:
            continue
        if model.is_identity(g):
            out[a] = np.arange(2 * n)
            continue
        b = phi.index_of(model.inv(g))
        if b is None:
            raise ValueError(f"domain is not symmetric: missing inverse of {model.format(g)}")
        t, tinv = P[a], P[b]
        Ag = _good_set(t, tinv)
        Ah = _good_set(tinv, t)
        s = np.empty(2 * n, dtype=np.int64)
        sinv = np.empty(2 * n, dtype=np.int64)
        for j in (0, 1):
            s[2 * np.nonzero(Ag)[0] + j] = 2 * t[Ag] + j
            sinv[2 * np.nonzero(Ah)[0] + j] = 2 * tinv[Ah] + j
        src = np.sort(np.concatenate([2 * np.nonzero(Ah & ~Ag)[0] + j for j in (0, 1)]))
        dst = np.sort(np.concatenate([2 * np.nonzero(Ag & ~Ah)[0] + j for j in (0, 1)]))
        s[src] = dst
        sinv[dst] = src
        rest = np.nonzero(~(Ag | Ah))[0]
        for j in (0, 1):
            s[2 * rest + j] = 2 * rest + (1 - j)
            sinv[2 * rest + j] = 2 * rest + (1 - j)
        out[a] = s
        out[b] = sinv if b != a else s
    images = [Permutation(out[a], check=True) for a in range(len(phi.domain))]
    return ApproxMorphism(model, list(phi.domain), images)


def is_nice(phi: ApproxMorphism) -> tuple[bool, list[str]]:
    """Check s_{g^-1} = s_g^-1 and fixed-point freedom for every nonidentity g."""
    model = phi.model
    problems = []
    for g, s in phi.items():
        if model.is_identity(g):
            continue
        if s.fixed_points():
            problems.append(f"{model.format(g)} has {s.fixed_points()} fixed points")
        gi = model.inv(g)
        if gi not in phi:
            problems.append(f"{model.format(g)}: inverse not in domain")
        elif phi(gi) != s.inverse():
            problems.append(f"{model.format(g)}: image of inverse is not the inverse")
    return not problems, problems


# -- free product ------------------------------------------------------------------------

def _ball(num_gens: int, radius: int, cap: int) -> tuple[list[tuple], dict]:
    words: list[tuple] = [()]
    frontier = [()]
    for _ in range(radius):
        nxt = []
        for w in frontier:
            for g in range(num_gens):
                for e in (1, -1):
                    if w and w[-1] == (g, -e):
                        continue
                    nxt.append(w + ((g, e),))
        words.extend(nxt)
        if len(words) > cap:
            raise CapExceeded(f"free-group ball exceeds {cap} points")
        frontier = nxt
    return words, {w: i for i, w in enumerate(words)}


def ball_action(num_gens: int, radius: int, *, caps=DEFAULT_CAPS) -> list[np.ndarray]:
    """Right multiplication by each generator on the radius ball of the free
    group, completed by the ordered matching outside the ball.

    No nontrivial reduced word of length <= radius acts trivially, since it
    moves the identity word.
    """
    words, index = _ball(num_gens, radius, caps.degree)
    acts = []
    for g in range(num_gens):
        img = np.full(len(words), -1, dtype=np.int64)
        for a, w in enumerate(words):
            if w and w[-1] == (g, -1):
                img[a] = index[w[:-1]]
            elif len(w) < radius:
                img[a] = index[w + ((g, 1),)]
        acts.append(complete_partial(img))
    return acts


def free_product_morphism(phi0: ApproxMorphism, phi1: ApproxMorphism, N: int, *,
                          caps=DEFAULT_CAPS, max_radius: int = 3, max_degree: int = 4) -> ApproxMorphism:
    """Approximate morphism of the free product on alternating words with at
    most N syllables from the two domains.

    Points are triples (i, j, w), with w in the radius-N ball V of the free
    group on generators v_ij, encoded as (i n + j)|V| + w. A factor-0 element
    moves i by its image; a factor-1 element h sends (i, j, w) to
    (i, s_h(j), w v_ij^-1 v_{i s_h(j)}).
    """
    for phi in (phi0, phi1):
        if phi.target != "sym":
            raise ValueError("free_product_morphism needs symmetric targets")
        ok, problems = is_nice(phi)
        if not ok:
            raise ValueError("input is not nice: " + "; ".join(problems[:3]))
    if phi0.degree != phi1.degree:
        raise ValueError("both inputs must have the same degree")
    n = phi0.degree
    if N > max_radius or n > max_degree:
        raise CapExceeded(f"free product construction limited to N <= {max_radius}, n <= {max_degree}")
    acts = ball_action(n * n, N, caps=caps)
    V = len(acts[0]) if acts else 1
    k = n * n * V
    if k > caps.degree:
        raise CapExceeded(f"degree {k} exceeds cap {caps.degree}")
    inv_acts = [np.argsort(a) for a in acts]
    ii, jj, ww = np.meshgrid(np.arange(n), np.arange(n), np.arange(V), indexing="ij")
    ii, jj, ww = ii.ravel(), jj.ravel(), ww.ravel()

    def syllable_perm(f: int, s: np.ndarray) -> np.ndarray:
        if f == 0:
            return (s[ii] * n + jj) * V + ww
        sj = s[jj]
        w2 = np.empty_like(ww)
        for i in range(n):
            for j in range(n):
                sel = (ii == i) & (jj == j)
                v_from, v_to = i * n + j, i * n + int(s[j])
                w2[sel] = acts[v_to][inv_acts[v_from][ww[sel]]]
        return (ii * n + sj) * V + w2

    model = FreeProductModel(phi0.model, phi1.model)
    syl: list[list[tuple]] = [[], []]
    for f, phi in enumerate((phi0, phi1)):
        for g, s in phi.items():
            if not phi.model.is_identity(g):
                syl[f].append((g, syllable_perm(f, s.images)))
    domain = [()]
    images = [np.arange(k)]
    frontier = [((), np.arange(k), -1)]
    for _ in range(N):
        nxt = []
        for w, p, last in frontier:
            for f in (0, 1):
                if f == last:
                    continue
                for g, q in syl[f]:
                    nw = w + ((f, g),)
                    npm = p[q]  # tau_w o tau_g
                    domain.append(nw)
                    images.append(npm)
                    nxt.append((nw, npm, f))
        frontier = nxt
    return ApproxMorphism(model, domain, [Permutation(p, check=False) for p in images])


# -- unitary passage -----------------------------------------------------------------------

def to_unitary(phi: ApproxMorphism) -> ApproxMorphism:
    if phi.target != "sym":
        raise ValueError("to_unitary needs a symmetric target")
    return ApproxMorphism(phi.model, list(phi.domain),
                          [permutation_matrix(p) for p in phi.images], "unitary")
