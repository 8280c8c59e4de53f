"""Rank functions on matrices over prime fields and trace identities in
group algebras F_p[G].
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from math import comb
from typing import Mapping, Sequence

import numpy as np

from . import kernels
from .groups import TableGroup, closure_perms
from .perm import Permutation

MAX_PRIME = 1 << 31


def is_prime(p: int) -> bool:
    if p < 2:
        return False
    if p % 2 == 0:
        return p == 2
    f = 3
    while f * f <= p:
        if p % f == 0:
            return False
        f += 2
    return True


def _check_prime(p: int) -> int:
    p = int(p)
    if not is_prime(p) or p >= MAX_PRIME:
        raise ValueError(f"{p} is not a prime below 2^31")
    return p


def _matmul_mod(a: np.ndarray, b: np.ndarray, p: int) -> np.ndarray:
    # entries are < 2^31, so each product fits in int64; reduce before summing
    out = np.zeros((a.shape[0], b.shape[1]), dtype=np.int64)
    for k in range(a.shape[1]):
        out = (out + (a[:, k:k + 1] * b[k:k + 1, :]) % p) % p
    return out


@dataclass(frozen=True, eq=False)
class PrimeFieldMatrix:
    p: int
    entries: np.ndarray

    def __post_init__(self):
        _check_prime(self.p)
        a = np.asarray(self.entries, dtype=np.int64)
        if a.ndim != 2 or a.shape[0] != a.shape[1]:
            raise ValueError("expected a square matrix")
        a = a % self.p
        a.setflags(write=False)
        object.__setattr__(self, "entries", a)

    @property
    def n(self) -> int:
        return self.entries.shape[0]

    @classmethod
    def identity(cls, n: int, p: int) -> "PrimeFieldMatrix":
        return cls(p, np.eye(n, dtype=np.int64))

    @classmethod
    def zeros(cls, n: int, p: int) -> "PrimeFieldMatrix":
        return cls(p, np.zeros((n, n), dtype=np.int64))

    @classmethod
    def random(cls, n: int, p: int, rng: np.random.Generator) -> "PrimeFieldMatrix":
        return cls(p, rng.integers(0, p, size=(n, n)))

    @classmethod
    def from_perm(cls, s: Permutation, p: int) -> "PrimeFieldMatrix":
        m = np.zeros((s.n, s.n), dtype=np.int64)
        m[s.images, np.arange(s.n)] = 1
        return cls(p, m)

    def _other(self, other) -> np.ndarray:
        if isinstance(other, PrimeFieldMatrix):
            if other.p != self.p or other.n != self.n:
                raise ValueError("field or dimension mismatch")
            return other.entries
        raise TypeError(type(other))

    def __add__(self, other):
        return PrimeFieldMatrix(self.p, self.entries + self._other(other))

    def __sub__(self, other):
        return PrimeFieldMatrix(self.p, self.entries - self._other(other))

    def __matmul__(self, other):
        return PrimeFieldMatrix(self.p, _matmul_mod(self.entries, self._other(other), self.p))

    def scale(self, c: int) -> "PrimeFieldMatrix":
        return PrimeFieldMatrix(self.p, self.entries * (int(c) % self.p))

    def __eq__(self, other) -> bool:
        return (isinstance(other, PrimeFieldMatrix) and other.p == self.p
                and np.array_equal(other.entries, self.entries))

    def rank(self) -> int:
        return kernels.rank_mod_p(self.entries, self.p)


def normalized_rank(m: PrimeFieldMatrix) -> Fraction:
    return Fraction(m.rank(), m.n)


def perm_rank_identity(s: Permutation, p: int) -> tuple[Fraction, Fraction, bool]:
    """N(P_s - I) against 1 - c(s)/n, c = number of cycles."""
    p = _check_prime(p)
    lhs = normalized_rank(PrimeFieldMatrix.from_perm(s, p) - PrimeFieldMatrix.identity(s.n, p))
    rhs = 1 - Fraction(s.cycle_count(), s.n)
    return lhs, rhs, lhs == rhs


@dataclass
class RankProbe:
    value: Fraction
    bound: Fraction
    holds: bool
    eps: Fraction
    separation: Fraction  # max over i != j of fix(s_i^-1 s_j)/n
    pair_bound: Fraction  # (1 - C(k,2) separation) / k^2
    witness: Fraction  # |D|/n for a greedily built separated set D

    @property
    def slack(self) -> Fraction:
        return self.value - self.bound


def separated_set(perms: Sequence[Permutation]) -> list[int]:
    """Greedy maximal D with s_i(a) != s_j(b) whenever (a, i) != (b, j), a, b in D.

    Sum lambda_i P_{s_i} is injective on span{e_a : a in D}, so its rank is
    at least |D|.
    """
    n = perms[0].n
    used = np.zeros(n, dtype=bool)
    D = []
    for a in range(n):
        imgs = [int(s.images[a]) for s in perms]
        if len(set(imgs)) < len(imgs) or used[imgs].any():
            continue
        used[imgs] = True
        D.append(a)
    return D


def rank_lower_bound_probe(perms: Sequence[Permutation], lambdas: Sequence[int], p: int) -> RankProbe:
    """Rank of sum lambda_i P_{s_i} against (1 - eps k)/k^2, eps = min_i (1 - l(s_i)).

    Also reports the pairwise bound (1 - C(k,2) eps')/k^2 with
    eps' = max_{i != j} fix(s_i^-1 s_j)/n and the greedy witness |D|/n;
    value >= witness >= pair_bound always holds.
    """
    p = _check_prime(p)
    k = len(perms)
    if k < 1:
        raise ValueError("need at least one permutation")
    if len(lambdas) != k:
        raise ValueError("one coefficient per permutation")
    if any(int(l) % p == 0 for l in lambdas):
        raise ValueError("coefficients must be nonzero mod p")
    n = perms[0].n
    if any(s.n != n for s in perms):
        raise ValueError("all permutations must have the same degree")
    acc = PrimeFieldMatrix.zeros(n, p)
    for s, l in zip(perms, lambdas):
        acc = acc + PrimeFieldMatrix.from_perm(s, p).scale(l)
    value = normalized_rank(acc)
    eps = min(Fraction(s.fixed_points(), n) for s in perms)
    bound = (1 - eps * k) / (k * k)
    sep = Fraction(0)
    for i, j in combinations(range(k), 2):
        sep = max(sep, Fraction((perms[i].inverse() * perms[j]).fixed_points(), n))
    pair_bound = (1 - comb(k, 2) * sep) / (k * k)
    witness = Fraction(len(separated_set(perms)), n)
    return RankProbe(value, bound, value >= bound, eps, sep, pair_bound, witness)


def finite_rank_ring_probe(pairs: Sequence[tuple[PrimeFieldMatrix, PrimeFieldMatrix]]) -> Fraction:
    """max |N(xy - 1) - N(yx - 1)| over the pairs."""
    worst = Fraction(0)
    for x, y in pairs:
        if x.p != y.p or x.n != y.n:
            raise ValueError("pair has mismatched field or dimension")
        one = PrimeFieldMatrix.identity(x.n, x.p)
        worst = max(worst, abs(normalized_rank(x @ y - one) - normalized_rank(y @ x - one)))
    return worst


def check_rank_axioms(x: PrimeFieldMatrix, y: PrimeFieldMatrix) -> list[str]:
    """Rank-function axioms on one pair; returns the violated ones."""
    bad = []
    n, p = x.n, x.p
    if normalized_rank(PrimeFieldMatrix.identity(n, p)) != 1:
        bad.append("N(1) != 1")
    for z, nm in ((x, "x"), (y, "y")):
        if (normalized_rank(z) == 0) != (not z.entries.any()):
            bad.append(f"faithfulness fails for {nm}")
    if normalized_rank(x @ y) > min(normalized_rank(x), normalized_rank(y)):
        bad.append("N(xy) > min")
    if normalized_rank(x + y) > normalized_rank(x) + normalized_rank(y):
        bad.append("N(x+y) > N(x)+N(y)")
    return bad


# -- group algebras -----------------------------------------------------------------------------

class GroupAlgebraElement:
    """Sparse element of F_p[G] for a table-backed finite group G."""

    __slots__ = ("group", "p", "coeffs", "_orders")

    def __init__(self, group: TableGroup, p: int, coeffs: Mapping[int, int] | None = None,
                 _orders: np.ndarray | None = None):
        self.group = group
        self.p = _check_prime(p)
        self.coeffs = {int(g): int(c) % self.p for g, c in (coeffs or {}).items() if int(c) % self.p}
        self._orders = _orders if _orders is not None else _orders_of(group)

    def _new(self, coeffs) -> "GroupAlgebraElement":
        return GroupAlgebraElement(self.group, self.p, coeffs, self._orders)

    @classmethod
    def basis(cls, group: TableGroup, p: int, g: int, c: int = 1) -> "GroupAlgebraElement":
        return cls(group, p, {g: c})

    @classmethod
    def one(cls, group: TableGroup, p: int) -> "GroupAlgebraElement":
        return cls(group, p, {int(group.identity()): 1})

    @classmethod
    def zero(cls, group: TableGroup, p: int) -> "GroupAlgebraElement":
        return cls(group, p, {})

    @classmethod
    def random(cls, group: TableGroup, p: int, rng: np.random.Generator,
               density: float = 0.3) -> "GroupAlgebraElement":
        m = group.order
        mask = rng.random(m) < density
        vals = rng.integers(1, p, size=m) if p > 2 else np.ones(m, dtype=np.int64)
        return cls(group, p, {g: int(vals[g]) for g in np.nonzero(mask)[0]})

    def _check(self, other: "GroupAlgebraElement"):
        if other.group is not self.group or other.p != self.p:
            raise ValueError("group algebra elements over different groups or fields")

    def __add__(self, other):
        self._check(other)
        out = dict(self.coeffs)
        for g, c in other.coeffs.items():
            out[g] = (out.get(g, 0) + c) % self.p
        return self._new(out)

    def __sub__(self, other):
        self._check(other)
        out = dict(self.coeffs)
        for g, c in other.coeffs.items():
            out[g] = (out.get(g, 0) - c) % self.p
        return self._new(out)

    def __mul__(self, other):
        if isinstance(other, int):
            return self._new({g: c * other for g, c in self.coeffs.items()})
        self._check(other)
        out: dict[int, int] = {}
        t = self.group.table
        for g, a in self.coeffs.items():
            for h, b in other.coeffs.items():
                k = int(t[g, h])
                out[k] = (out.get(k, 0) + a * b) % self.p
        return self._new(out)

    def __pow__(self, e: int):
        if e < 0:
            raise ValueError("negative powers are not supported")
        result = self.one(self.group, self.p)
        result._orders = self._orders
        base = self
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    def __eq__(self, other) -> bool:
        return (isinstance(other, GroupAlgebraElement) and other.group is self.group
                and other.p == self.p and other.coeffs == self.coeffs)

    def __repr__(self) -> str:
        terms = " + ".join(f"{c}*{self.group.names[g]}" for g, c in sorted(self.coeffs.items()))
        return f"GA(p={self.p}: {terms or '0'})"

    def tau(self, n: int) -> int:
        """Sum of coefficients at elements of order exactly p^n."""
        target = self.p ** n
        return sum(c for g, c in self.coeffs.items() if self._orders[g] == target) % self.p

    def max_trace_index(self) -> int:
        """Largest m with p^m dividing into the group exponent's range (p^m <= exponent)."""
        expo = int(np.lcm.reduce(self._orders))
        m = 0
        while self.p ** (m + 1) <= expo:
            m += 1
        return m


def _orders_of(group: TableGroup) -> np.ndarray:
    # cached on the group itself; keying a global dict by id() breaks once ids are reused
    hit = getattr(group, "_element_orders", None)
    if hit is None:
        hit = group.orders()
        group._element_orders = hit
    return hit


@dataclass
class TraceReport:
    ok: bool
    checks: list[tuple[str, bool]] = field(default_factory=list)
    traces: list[int] = field(default_factory=list)

    def failures(self) -> list[str]:
        return [name for name, ok in self.checks if not ok]


def frobenius_trace_check(a: GroupAlgebraElement, b: GroupAlgebraElement) -> TraceReport:
    """tau_n((a+b)^p) = tau_n(a^p) + tau_n(b^p) and tau_n(a^p) = sum a_g^p tau_n(g^p)."""
    a._check(b)
    p = a.p
    m = a.max_trace_index()
    s = (a + b) ** p
    ap, bp = a ** p, b ** p
    checks = []
    for n in range(m + 1):
        checks.append((f"additive tau_{n}", s.tau(n) == (ap.tau(n) + bp.tau(n)) % p))
        for x, xp, nm in ((a, ap, "a"), (b, bp, "b")):
            rhs = 0
            for g, c in x.coeffs.items():
                gp = GroupAlgebraElement.basis(x.group, p, g) ** p
                rhs += pow(c, p, p) * gp.tau(n)
            checks.append((f"expansion tau_{n}({nm}^p)", xp.tau(n) == rhs % p))
    return TraceReport(all(ok for _, ok in checks), checks)


def idempotent_trace_check(e: GroupAlgebraElement) -> TraceReport:
    if e * e != e:
        raise ValueError("element is not idempotent")
    p = e.p
    m = e.max_trace_index()
    t = [e.tau(n) for n in range(m + 2)]
    checks = [("tau_0 = tau_0^p + tau_1^p", t[0] == (pow(t[0], p, p) + pow(t[1], p, p)) % p)]
    for n in range(1, m + 1):
        checks.append((f"tau_{n} = tau_{n + 1}^p", t[n] == pow(t[n + 1], p, p)))
    for n in range(1, m + 2):
        checks.append((f"tau_0 = tau_0^p + tau_{n}^(p^{n})",
                       t[0] == (pow(t[0], p, p) + pow(t[n], p ** n, p)) % p))
    checks.append(("tau_{m+1} = 0", t[m + 1] == 0))
    checks.append(("tau_0^p = tau_0", pow(t[0], p, p) == t[0]))
    return TraceReport(all(ok for _, ok in checks), checks, t)


def averaging_idempotent(group: TableGroup, subgroup: Sequence[int], p: int) -> GroupAlgebraElement:
    """|H|^-1 sum_{h in H} h; requires p not dividing |H|."""
    p = _check_prime(p)
    h = len(subgroup)
    if h % p == 0:
        raise ValueError(f"p={p} divides |H|={h}; the average is not idempotent")
    c = pow(h, -1, p)
    return GroupAlgebraElement(group, p, {int(x): c for x in subgroup})


def subgroups(group: TableGroup, max_gens: int = 2) -> list[tuple[int, ...]]:
    """Distinct subgroups generated by at most ``max_gens`` elements."""
    t = group.table
    e = int(group.identity())

    def close(gens):
        seen = {e}
        frontier = [e]
        while frontier:
            nxt = []
            for x in frontier:
                for g in gens:
                    y = int(t[x, g])
                    if y not in seen:
                        seen.add(y)
                        nxt.append(y)
            frontier = nxt
        return tuple(sorted(seen))

    found = {(e,)}
    elems = range(group.order)
    for k in range(1, max_gens + 1):
        for gens in combinations(elems, k):
            found.add(close(gens))
    return sorted(found, key=lambda s: (len(s), s))


# -- text format ------------------------------------------------------------------------

def format_group_algebra(a: GroupAlgebraElement, group_ref: str) -> str:
    lines = [f"galg p={a.p} group={group_ref}"]
    for g, c in sorted(a.coeffs.items()):
        lines.append(f"{a.group.names[g]} {c}")
    return "\n".join(lines) + "\n"


def parse_group_algebra(text: str, resolve_group) -> GroupAlgebraElement:
    """``resolve_group(ref)`` maps the header's group reference to a TableGroup."""
    lines = [ln.strip() for ln in text.splitlines() if ln.strip() and not ln.strip().startswith("#")]
    if not lines or not lines[0].startswith("galg"):
        raise ValueError("group algebra text must start with 'galg p=<p> group=<ref>'")
    fields = dict(tok.split("=", 1) for tok in lines[0].split()[1:])
    if "p" not in fields or "group" not in fields:
        raise ValueError("header needs p= and group=")
    group = resolve_group(fields["group"])
    p = int(fields["p"])
    coeffs: dict[int, int] = {}
    for ln in lines[1:]:
        name, c = ln.rsplit(None, 1)
        g = group.index(name)
        coeffs[g] = (coeffs.get(g, 0) + int(c)) % p
    return GroupAlgebraElement(group, p, coeffs)
