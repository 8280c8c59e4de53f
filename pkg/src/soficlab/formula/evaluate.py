"""Evaluation of formulas in finite length groups.

Quantified variables occupy their own array axis, so inner quantifiers are
reduced with numpy instead of Python loops whenever the grid fits in
``GRID_BUDGET`` entries; larger grids fall back to looping over elements.
Exact mode keeps every value as an integer array over a common denominator,
so results on Hamming or trivial lengths are exact rationals.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd, lcm
from typing import Mapping

import numpy as np

from ..config import DEFAULT_CAPS, CapExceeded
from ..groups import LengthGroup, symmetric
from ..perm import Permutation
from .ast import (Abs, Clamp, Const, Diff, Len, Max, Min, Node, Quant, Scale, Sum, Sup,
                  children, free_variables, walk)

GRID_BUDGET = 1 << 22


class MissingAssignment(KeyError):
    pass


@dataclass
class EvalResult:
    value: Fraction | float
    bound: str  # exact | lower | upper | mixed
    mode: str = "exact"
    evaluations: int = 0

    def __float__(self) -> float:
        return float(self.value)


@dataclass(frozen=True)
class Sampled:
    samples: int
    seed: int = 0


# -- value arithmetic ---------------------------------------------------------

class _V:
    """Integer numerators over a shared denominator, or plain floats (den=None)."""

    __slots__ = ("x", "den")

    def __init__(self, x, den):
        self.x = x
        self.den = den

    def norm(self) -> "_V":
        if self.den is None or self.den == 1:
            return self
        g = int(np.gcd.reduce(np.abs(np.asarray(self.x)).ravel(), initial=0))
        g = gcd(g, self.den)
        if g > 1:
            return _V(np.asarray(self.x) // g, self.den // g)
        return self


def _align(a: _V, b: _V):
    if a.den is None or b.den is None:
        fa = a.x if a.den is None else a.x / a.den
        fb = b.x if b.den is None else b.x / b.den
        return fa, fb, None
    L = lcm(a.den, b.den)
    return a.x * (L // a.den), b.x * (L // b.den), L


def _const(q: Fraction, exact: bool) -> _V:
    if exact:
        return _V(np.int64(q.numerator), q.denominator)
    return _V(np.float64(q), None)


class _Evaluator:
    def __init__(self, group: LengthGroup, exact: bool, sampled: Sampled | None,
                 depth: int, caps):
        self.g = group
        self.exact = exact
        self.sampled = sampled
        self.depth = depth
        self.caps = caps
        self.qindex: dict[int, int] = {}
        self._domain_cache: dict[int, np.ndarray] = {}

    def domain(self, node: Node) -> np.ndarray:
        key = id(node)
        if key not in self._domain_cache:
            if self.sampled is None:
                dom = self.g.elements(self.caps)
            else:
                ss = np.random.SeedSequence(self.sampled.seed, spawn_key=(self.qindex[key],))
                dom = self.g.sample(np.random.default_rng(ss), self.sampled.samples)
            self._domain_cache[key] = dom
        return self._domain_cache[key]

    def place(self, elems: np.ndarray, axis: int | None) -> np.ndarray:
        """Reshape a batch of elements to live on ``axis`` (or a scalar slot)."""
        es = self.g.elem_shape
        if axis is None:
            return elems.reshape((1,) * self.depth + es)
        shape = [1] * self.depth
        shape[axis] = elems.shape[0]
        return elems.reshape(tuple(shape) + es)

    def grid(self, env_axes: dict) -> int:
        size = 1
        for n in env_axes.values():
            size *= n
        return size

    def ev(self, node: Node, env: dict, axes: dict, level: int) -> _V:
        if isinstance(node, Len):
            vals = [env[v] for v, _ in node.word]
            elem = self.g.eval_word([(i, e) for i, (_, e) in enumerate(node.word)], vals)
            if not node.word:
                elem = np.asarray(elem).reshape((1,) * self.depth + self.g.elem_shape)
            if self.exact:
                return _V(np.asarray(self.g.length_num(elem), dtype=np.int64), self.g.denominator)
            return _V(np.asarray(self.g.length_float(elem), dtype=np.float64), None)
        if isinstance(node, Const):
            return _const(node.value, self.exact)
        if isinstance(node, (Sum, Diff)):
            a, b, den = _align(self.ev(node.a, env, axes, level), self.ev(node.b, env, axes, level))
            return _V(a + b if isinstance(node, Sum) else a - b, den).norm()
        if isinstance(node, Scale):
            a = self.ev(node.a, env, axes, level)
            if a.den is None:
                return _V(a.x * float(node.q), None)
            return _V(a.x * node.q.numerator, a.den * node.q.denominator).norm()
        if isinstance(node, (Max, Min)):
            vals = [self.ev(c, env, axes, level) for c in node.args]
            out = vals[0]
            f = np.maximum if isinstance(node, Max) else np.minimum
            for v in vals[1:]:
                a, b, den = _align(out, v)
                out = _V(f(a, b), den)
            return out.norm()
        if isinstance(node, Abs):
            a = self.ev(node.a, env, axes, level)
            return _V(np.abs(a.x), a.den)
        if isinstance(node, Clamp):
            a = self.ev(node.a, env, axes, level)
            hi = 1.0 if a.den is None else a.den
            return _V(np.clip(a.x, 0, hi), a.den)
        if isinstance(node, Quant):
            return self.quant(node, env, axes, level)
        raise TypeError(f"unknown node {node!r}")

    def quant(self, node, env, axes, level) -> _V:
        dom = self.domain(node)
        m = dom.shape[0]
        reduce_ = np.max if isinstance(node, Sup) else np.min
        combine = np.maximum if isinstance(node, Sup) else np.minimum
        elem_size = int(np.prod(self.g.elem_shape)) if self.g.elem_shape else 1
        if self.grid(axes) * m * elem_size <= GRID_BUDGET:
            env2 = dict(env)
            env2[node.var] = self.place(dom, level)
            axes2 = dict(axes)
            axes2[level] = m
            v = self.ev(node.body, env2, axes2, level + 1)
            x = np.asarray(v.x)
            if x.ndim > level and x.shape[level] == m:
                x = reduce_(x, axis=level, keepdims=True)
            return _V(x, v.den).norm()
        out = None
        for k in range(m):
            env2 = dict(env)
            env2[node.var] = self.place(dom[k:k + 1], None)
            v = self.ev(node.body, env2, axes, level + 1)
            if out is None:
                out = v
            else:
                a, b, den = _align(out, v)
                out = _V(combine(a, b), den)
        return out.norm()


def _bound_kind(node: Node, sampled: bool) -> str:
    if not sampled:
        return "exact"
    dirs: set[str] = set()

    def visit(n: Node, pol: int):
        # pol: +1 monotone, -1 antitone, 0 unknown
        if isinstance(n, Quant):
            if pol == 0:
                dirs.add("mixed")
            else:
                under = (pol > 0) == isinstance(n, Sup)
                dirs.add("lower" if under else "upper")
            visit(n.body, pol)
        elif isinstance(n, Diff):
            visit(n.a, pol)
            visit(n.b, -pol)
        elif isinstance(n, Scale):
            visit(n.a, pol if n.q >= 0 else -pol)
        elif isinstance(n, Abs):
            visit(n.a, 0)
        elif isinstance(n, (Sum, Max, Min, Clamp)):
            for c in (n.args if isinstance(n, (Max, Min)) else
                      (n.a, n.b) if isinstance(n, Sum) else (n.a,)):
                visit(c, pol)

    visit(node, 1)
    if not dirs:
        return "exact"
    return dirs.pop() if len(dirs) == 1 else "mixed"


def _coerce_element(group: LengthGroup, x):
    if isinstance(x, Permutation):
        return x.images
    return np.asarray(x)


def evaluate(node: Node, group: LengthGroup, assignment: Mapping | None = None,
             mode: str | Sampled = "exact", *, caps=DEFAULT_CAPS) -> EvalResult:
    """Value of ``node`` in ``group``.

    ``mode`` is ``"exact"`` (enumerate every quantifier) or a ``Sampled``
    instance; sampled results carry the direction of the bound they give.
    """
    assignment = dict(assignment or {})
    free = free_variables(node)
    missing = free - set(assignment)
    if missing:
        raise MissingAssignment(f"no value for free variable(s) {sorted(missing)}")
    sampled = mode if isinstance(mode, Sampled) else None
    if sampled is None and mode != "exact":
        raise ValueError(f"unknown mode {mode!r}")
    quants = [n for n in walk(node) if isinstance(n, Quant)]
    depth = _depth(node)
    exact_lengths = group.exact
    ev = _Evaluator(group, exact_lengths, sampled, depth, caps)
    for i, q in enumerate(quants):
        ev.qindex[id(q)] = i
    # total work guard: product of domain sizes along the deepest chain
    work = _work(node, group, sampled, caps)
    if work > caps.work:
        raise CapExceeded(f"formula needs {work} evaluations, cap is {caps.work}")
    env = {k: ev.place(_coerce_element(group, v), None) for k, v in assignment.items()}
    v = ev.ev(node, env, {}, 0)
    x = np.asarray(v.x).reshape(-1)
    if x.size != 1:
        raise AssertionError("formula did not reduce to a scalar")
    if v.den is None:
        value: Fraction | float = float(x[0])
    else:
        value = Fraction(int(x[0]), v.den)
    return EvalResult(value, _bound_kind(node, sampled is not None),
                      "exact" if sampled is None else f"sampled({sampled.samples},{sampled.seed})",
                      work)


def _depth(node: Node) -> int:
    d = max((_depth(c) for c in children(node)), default=0)
    return d + (1 if isinstance(node, Quant) else 0)


def _work(node: Node, group: LengthGroup, sampled: Sampled | None, caps) -> int:
    if isinstance(node, Quant):
        if sampled is not None:
            m = sampled.samples
        else:
            m = group.order
            if m > caps.enum:
                raise CapExceeded(f"|{group.name}| = {m} exceeds enumeration cap {caps.enum}")
        return m * _work(node.body, group, sampled, caps)
    return max((_work(c, group, sampled, caps) for c in children(node)), default=1)


def sentence_series(node: Node, degrees, mode: str | Sampled = "exact", *,
                    caps=DEFAULT_CAPS) -> dict:
    """Values of a sentence in S_n for each n, with successive differences."""
    if free_variables(node):
        raise ValueError("sentence_series needs a sentence (no free variables)")
    rows = []
    for n in degrees:
        r = evaluate(node, symmetric(int(n)), {}, mode, caps=caps)
        rows.append((int(n), r.value, r.bound))
    diffs = [rows[i + 1][1] - rows[i][1] for i in range(len(rows) - 1)]
    return {"values": [(n, v) for n, v, _ in rows], "bounds": [b for _, _, b in rows],
            "differences": diffs}
