"""Finite groups carrying an invariant length function.

Two carriers share one batched interface used by the formula evaluator and
the search code:

* ``PermGroup``: elements are image arrays of shape ``(n,)``; length is the
  exact Hamming length. ``symmetric(n)`` is the full group and supports
  sampling without enumerating.
* ``TableGroup``: elements are indices into a multiplication table, with an
  arbitrary length vector (exact rationals or floats). Matrix groups are
  turned into tables.

Batched methods broadcast over leading axes.
"""
from __future__ import annotations

import re
from dataclasses import dataclass, field
from fractions import Fraction
from math import lcm
from typing import Callable, Sequence

import numpy as np

from .config import DEFAULT_CAPS, CapExceeded
from .perm import Permutation, all_permutations


class LengthGroup:
    elem_shape: tuple = ()
    exact: bool = True  # lengths are rationals with a common denominator
    name: str = "G"

    # batched interface ---------------------------------------------------
    def elements(self, caps=DEFAULT_CAPS) -> np.ndarray:
        raise NotImplementedError

    def sample(self, rng: np.random.Generator, k: int) -> np.ndarray:
        raise NotImplementedError

    def compose(self, a, b):
        raise NotImplementedError

    def inverse(self, a):
        raise NotImplementedError

    def identity(self):
        raise NotImplementedError

    def length_num(self, a) -> np.ndarray:
        """Length numerators over ``self.denominator`` (exact carriers only)."""
        raise NotImplementedError

    def length_float(self, a) -> np.ndarray:
        return self.length_num(a) / self.denominator

    denominator: int = 1

    @property
    def order(self) -> int:
        raise NotImplementedError

    # scalar conveniences ---------------------------------------------------
    def mul(self, x, y):
        return self.compose(x, y)

    def inv(self, x):
        return self.inverse(x)

    def length(self, x):
        if self.exact:
            return Fraction(int(self.length_num(x)), self.denominator)
        return float(self.length_float(x))

    def power(self, x, e: int):
        x = np.asarray(x)
        if e == 0:
            return np.broadcast_to(self.identity(), x.shape).copy()
        base = x if e > 0 else self.inverse(x)
        out = base
        for _ in range(abs(e) - 1):
            out = self.compose(out, base)
        return out

    def eval_word(self, word: Sequence[tuple[int, int]], env: Sequence):
        """Left-to-right product of ``env[letter] ** exp`` with broadcasting."""
        out = None
        for letter, e in word:
            f = self.power(env[letter], e)
            out = f if out is None else self.compose(out, f)
        return self.identity() if out is None else out

    def is_identity(self, x) -> bool:
        return bool(np.all(np.asarray(x) == np.asarray(self.identity())))

    def to_table(self, caps=DEFAULT_CAPS) -> "TableGroup":
        raise NotImplementedError


class PermGroup(LengthGroup):
    """Finite group of permutations of a common degree, Hamming length."""

    def __init__(self, perms: np.ndarray | None, n: int, name: str = "", full: bool = False):
        self.n = int(n)
        self.elem_shape = (self.n,)
        self.denominator = self.n
        self._perms = None if perms is None else np.ascontiguousarray(perms, dtype=np.int64)
        self._full = full
        self.name = name or (f"S{n}" if full else f"PermGroup(n={n})")

    @property
    def order(self) -> int:
        if self._full:
            from math import factorial
            return factorial(self.n)
        return len(self._perms)

    def elements(self, caps=DEFAULT_CAPS) -> np.ndarray:
        if self._perms is None:
            if self.order > caps.enum:
                raise CapExceeded(f"|{self.name}| = {self.order} exceeds enumeration cap {caps.enum}")
            self._perms = all_permutations(self.n)
        elif len(self._perms) > caps.enum:
            raise CapExceeded(f"|{self.name}| = {len(self._perms)} exceeds enumeration cap {caps.enum}")
        return self._perms

    def sample(self, rng, k):
        if self._full:
            return np.array([rng.permutation(self.n) for _ in range(k)], dtype=np.int64).reshape(k, self.n)
        return self._perms[rng.integers(0, len(self._perms), size=k)]

    def compose(self, a, b):
        a, b = np.broadcast_arrays(np.asarray(a, dtype=np.int64), np.asarray(b, dtype=np.int64))
        return np.take_along_axis(a, b, axis=-1)

    def inverse(self, a):
        a = np.asarray(a, dtype=np.int64)
        out = np.empty_like(a)
        np.put_along_axis(out, a, np.broadcast_to(np.arange(self.n), a.shape), axis=-1)
        return out

    def identity(self):
        return np.arange(self.n, dtype=np.int64)

    def length_num(self, a):
        return (np.asarray(a) != np.arange(self.n)).sum(axis=-1)

    def to_table(self, caps=DEFAULT_CAPS) -> "TableGroup":
        perms = self.elements(caps)
        return table_from_perms(perms, name=self.name)


def symmetric(n: int) -> PermGroup:
    return PermGroup(None, n, full=True)


def perm_group(perms: Sequence[Permutation] | np.ndarray, name: str = "") -> PermGroup:
    arr = np.array([p.images if isinstance(p, Permutation) else p for p in perms], dtype=np.int64)
    return PermGroup(arr, arr.shape[1], name=name)


def closure_perms(gens: Sequence[Permutation | Sequence[int]], n: int | None = None,
                  caps=DEFAULT_CAPS) -> np.ndarray:
    """All products of the generators (BFS), identity first."""
    gl = [np.asarray(g.images if isinstance(g, Permutation) else g, dtype=np.int64) for g in gens]
    if n is None:
        n = len(gl[0])
    ident = np.arange(n, dtype=np.int64)
    seen = {ident.tobytes(): 0}
    out = [ident]
    frontier = [ident]
    while frontier:
        nxt = []
        for x in frontier:
            for g in gl:
                y = x[g]
                key = y.tobytes()
                if key not in seen:
                    seen[key] = len(out)
                    out.append(y)
                    nxt.append(y)
                    if len(out) > caps.enum:
                        raise CapExceeded("generated group exceeds enumeration cap")
        frontier = nxt
    return np.array(out)


class TableGroup(LengthGroup):
    """Group given by a multiplication table and a length vector."""

    def __init__(self, table, lengths, names: Sequence[str] | None = None,
                 name: str = "T", payload: list | None = None):
        self.table = np.ascontiguousarray(table, dtype=np.int64)
        m = self.table.shape[0]
        if self.table.shape != (m, m):
            raise ValueError("table must be square")
        self.names = list(names) if names is not None else [f"g{i}" for i in range(m)]
        self.name = name
        self.payload = payload
        ident = [i for i in range(m) if (self.table[i] == np.arange(m)).all()]
        if len(ident) != 1:
            raise ValueError("table has no unique identity")
        self._id = ident[0]
        inv = np.full(m, -1, dtype=np.int64)
        rows, cols = np.nonzero(self.table == self._id)
        inv[rows] = cols
        if (inv < 0).any():
            raise ValueError("table is not a group table (missing inverses)")
        self._inv = inv
        if all(isinstance(x, (int, Fraction, np.integer)) for x in lengths):
            fr = [Fraction(x) for x in lengths]
            den = lcm(*(f.denominator for f in fr)) if fr else 1
            self.exact = True
            self.denominator = den
            self._num = np.array([int(f * den) for f in fr], dtype=np.int64)
            self._flt = self._num / den
        else:
            self.exact = False
            self.denominator = 1
            self._num = None
            self._flt = np.asarray(lengths, dtype=np.float64)

    @property
    def order(self) -> int:
        return self.table.shape[0]

    def elements(self, caps=DEFAULT_CAPS):
        if self.order > caps.enum:
            raise CapExceeded(f"|{self.name}| = {self.order} exceeds enumeration cap {caps.enum}")
        return np.arange(self.order, dtype=np.int64)

    def sample(self, rng, k):
        return rng.integers(0, self.order, size=k).astype(np.int64)

    def compose(self, a, b):
        return self.table[a, b]

    def inverse(self, a):
        return self._inv[a]

    def identity(self):
        return np.int64(self._id)

    def length_num(self, a):
        if not self.exact:
            raise TypeError("length is not exact on this group")
        return self._num[a]

    def length_float(self, a):
        return self._flt[a]

    @property
    def lengths(self) -> list:
        if self.exact:
            return [Fraction(int(v), self.denominator) for v in self._num]
        return list(self._flt)

    def with_lengths(self, lengths, name: str | None = None) -> "TableGroup":
        return TableGroup(self.table, lengths, self.names, name or self.name, self.payload)

    def element_order(self, x: int) -> int:
        k, y = 1, int(x)
        while y != self._id:
            y = int(self.table[y, x])
            k += 1
        return k

    def orders(self) -> np.ndarray:
        return np.array([self.element_order(x) for x in range(self.order)], dtype=np.int64)

    def index(self, name: str) -> int:
        return self.names.index(name)

    def to_table(self, caps=DEFAULT_CAPS) -> "TableGroup":
        return self

    def is_abelian(self) -> bool:
        return bool((self.table == self.table.T).all())


def table_from_perms(perms: np.ndarray, name: str = "", length: str = "hamming",
                     names: Sequence[str] | None = None) -> TableGroup:
    perms = np.asarray(perms, dtype=np.int64)
    m, n = perms.shape
    index = {p.tobytes(): i for i, p in enumerate(perms)}
    if len(index) != m:
        raise ValueError("duplicate permutations")
    table = np.empty((m, m), dtype=np.int64)
    for i in range(m):
        prods = perms[i][perms]  # row i: perms[i] o perms[j]
        for j in range(m):
            try:
                table[i, j] = index[prods[j].tobytes()]
            except KeyError:
                raise ValueError("permutations are not closed under composition") from None
    if length == "hamming":
        lengths = [Fraction(int((p != np.arange(n)).sum()), n) for p in perms]
    elif length == "trivial":
        ident = np.arange(n)
        lengths = [Fraction(0) if (p == ident).all() else Fraction(1) for p in perms]
    else:
        raise ValueError(f"unknown length {length!r}")
    if names is None:
        names = [" ".join(map(str, p)) for p in perms]
    return TableGroup(table, lengths, names, name=name or f"PermTable(n={n})",
                      payload=[Permutation(p, check=False) for p in perms])


def trivial_length(group: TableGroup) -> TableGroup:
    ident = int(group.identity())
    return group.with_lengths([Fraction(0) if i == ident else Fraction(1)
                               for i in range(group.order)], name=group.name + "[trivial]")


# -- standard small groups ----------------------------------------------------

def cyclic(m: int) -> TableGroup:
    """Cyclic group of order m with the trivial length."""
    table = (np.arange(m)[:, None] + np.arange(m)[None, :]) % m
    lengths = [Fraction(0)] + [Fraction(1)] * (m - 1)
    return TableGroup(table, lengths, [str(i) for i in range(m)], name=f"C{m}")


def abelian_product(ms: Sequence[int]) -> TableGroup:
    """Direct product of cyclic groups with the trivial length."""
    shape = tuple(ms)
    m = int(np.prod(shape))
    coords = np.array(np.unravel_index(np.arange(m), shape)).T
    table = np.empty((m, m), dtype=np.int64)
    for i in range(m):
        s = (coords[i][None, :] + coords) % np.array(shape)
        table[i] = np.ravel_multi_index(s.T, shape)
    names = [",".join(map(str, c)) for c in coords]
    lengths = [Fraction(0)] + [Fraction(1)] * (m - 1)
    return TableGroup(table, lengths, names, name="x".join(f"C{k}" for k in shape))


def symmetric_table(n: int, length: str = "hamming") -> TableGroup:
    return table_from_perms(all_permutations(n), name=f"S{n}", length=length)


def dihedral(m: int, length: str = "hamming") -> TableGroup:
    """Symmetries of the m-gon acting on its vertices."""
    rot = [(i + 1) % m for i in range(m)]
    ref = [(-i) % m for i in range(m)]
    return table_from_perms(closure_perms([rot, ref], m), name=f"D{m}", length=length)


def alternating(n: int, length: str = "hamming") -> TableGroup:
    perms = all_permutations(n)
    keep = [p for p in perms if Permutation(p, check=False).cycle_count() % 2 == n % 2]
    return table_from_perms(np.array(keep), name=f"A{n}", length=length)


def quaternion_matrices() -> list[np.ndarray]:
    one = np.eye(2, dtype=np.complex128)
    i = np.array([[1j, 0], [0, -1j]])
    j = np.array([[0, 1], [-1, 0]], dtype=np.complex128)
    k = i @ j
    return [s * m for m in (one, i, j, k) for s in (1, -1)]


def unitary_group(mats: Sequence[np.ndarray], length: str = "hs", name: str = "U",
                  tol: float = 1e-9, caps=DEFAULT_CAPS) -> TableGroup:
    """Close a list of unitaries under products and tabulate it.

    ``length``: ``"hs"`` (half the normalized Hilbert-Schmidt distance to 1) or
    ``"op"`` (half the operator norm of 1 - x, by power iteration).
    """
    from .unitary import hs_length, op_norm_length
    dim = mats[0].shape[0]
    elems = [np.eye(dim, dtype=np.complex128)]

    def find(x):
        for idx, y in enumerate(elems):
            if np.max(np.abs(x - y)) < tol:
                return idx
        return -1

    frontier = [elems[0]]
    gens = [np.asarray(g, dtype=np.complex128) for g in mats]
    while frontier:
        nxt = []
        for x in frontier:
            for g in gens:
                y = x @ g
                if find(y) < 0:
                    elems.append(y)
                    nxt.append(y)
                    if len(elems) > caps.enum:
                        raise CapExceeded("matrix group exceeds enumeration cap")
        frontier = nxt
    m = len(elems)
    table = np.empty((m, m), dtype=np.int64)
    for a in range(m):
        for b in range(m):
            table[a, b] = find(elems[a] @ elems[b])
    if length == "hs":
        lengths = [hs_length(x) for x in elems]
    elif length == "op":
        lengths = [op_norm_length(x) for x in elems]
    else:
        raise ValueError(length)
    lengths[0] = 0.0
    return TableGroup(table, lengths, [f"u{i}" for i in range(m)], name=name, payload=elems)


_NAMED = re.compile(r"^(C|S|A|D)(\d+)$")


def named_group(ref: str, caps=DEFAULT_CAPS) -> TableGroup:
    """Resolve ``C6``, ``S3``, ``A4``, ``D4``, ``Q8``, ``C2xC3``, a catalog
    entry ``G<order>.<index>`` (see ``smallgroups``) or a table file.

    An optional suffix ``:trivial``, ``:hamming``, ``:hs`` or ``:op`` selects
    the length (permutation groups default to Hamming, Q8 to ``hs``, cyclic
    groups and their products to the trivial length).
    """
    ref, _, length = ref.strip().partition(":")
    if ref == "Q8":
        return unitary_group(quaternion_matrices(), length=length or "hs", name="Q8", caps=caps)
    m = _NAMED.match(ref)
    if m:
        kind, k = m.group(1), int(m.group(2))
        if kind == "C":
            g = cyclic(k)
            return g if length in ("", "trivial") else _relength(g, length)
        if kind == "S" and k > 7:
            raise CapExceeded("tabulated symmetric groups are limited to n <= 7")
        make = {"S": symmetric_table, "A": alternating, "D": dihedral}[kind]
        return make(k, length=length or "hamming")
    if re.fullmatch(r"C\d+(xC\d+)+", ref):
        g = abelian_product([int(t[1:]) for t in ref.split("x")])
        return g if length in ("", "trivial") else _relength(g, length)
    m = re.fullmatch(r"G(\d+)\.(\d+)", ref)
    if m:
        from .smallgroups import small_groups
        order, idx = int(m.group(1)), int(m.group(2))
        hits = [g for g in small_groups(order) if g.name == ref]
        if not hits:
            raise ValueError(f"no catalog group {ref}")
        return hits[0] if length in ("", "trivial") else _relength(hits[0], length)
    with open(ref) as fh:
        g = parse_table_group(fh.read(), name=ref)
    return g if not length else _relength(g, length)


def _relength(g: TableGroup, length: str) -> TableGroup:
    if length == "trivial":
        return trivial_length(g)
    raise ValueError(f"length {length!r} is not available for {g.name}")


def parse_table_group(text: str, name: str = "T") -> TableGroup:
    """``table`` header, a line of element names (identity need not be first),
    then |G| rows of |G| indices; an optional ``lengths`` line of rationals
    follows (trivial length otherwise)."""
    lines = [ln.split("#", 1)[0].strip() for ln in text.splitlines()]
    lines = [ln for ln in lines if ln]
    if not lines or lines[0] != "table":
        raise ValueError("table file must start with 'table'")
    names = lines[1].split()
    m = len(names)
    rows = [[int(t) for t in ln.split()] for ln in lines[2:2 + m]]
    if len(rows) != m or any(len(r) != m for r in rows):
        raise ValueError(f"expected {m} rows of {m} indices")
    rest = lines[2 + m:]
    if rest:
        head, *vals = rest[0].split()
        if head != "lengths" or len(vals) != m:
            raise ValueError("expected 'lengths' followed by one value per element")
        lengths = [Fraction(v) for v in vals]
        return TableGroup(np.array(rows), lengths, names, name=name)
    g = TableGroup(np.array(rows), [0] * m, names, name=name)
    return trivial_length(g)


def format_table_group(g: TableGroup) -> str:
    # names are whitespace-separated in the file
    lines = ["table", " ".join("_".join(nm.split()) for nm in g.names)]
    lines += [" ".join(str(int(v)) for v in row) for row in g.table]
    if g.exact:
        lines.append("lengths " + " ".join(str(q) for q in g.lengths))
    return "\n".join(lines) + "\n"


# -- length axioms --------------------------------------------------------------

@dataclass
class AxiomReport:
    ok: bool
    violations: list[str] = field(default_factory=list)
    checked: str = "exhaustive"


def check_length_axioms(g: LengthGroup, *, samples: int = 0, seed: int = 0,
                        tol: float = 1e-9, caps=DEFAULT_CAPS) -> AxiomReport:
    """Subadditivity, symmetry, faithfulness, conjugation invariance.

    Table groups are checked on all pairs; other carriers on ``samples``
    random pairs when ``samples`` is positive, exhaustively otherwise.
    """
    if samples:
        rng = np.random.default_rng(seed)
        xs, ys = g.sample(rng, samples), g.sample(rng, samples)
        checked = f"sampled({samples})"
    else:
        el = g.elements(caps)
        m = len(el)
        if m * m > caps.work:
            raise CapExceeded("pair count exceeds work cap")
        xs = np.repeat(el, m, axis=0)
        ys = np.tile(el, (m,) + (1,) * (el.ndim - 1))
        checked = "exhaustive"
    L = (lambda a: g.length_num(a)) if g.exact else (lambda a: g.length_float(a))
    eps = 0 if g.exact else tol
    lx, ly = L(xs), L(ys)
    v = []
    bad = L(g.compose(xs, ys)) > lx + ly + eps
    if bad.any():
        v.append(f"subadditivity fails on {int(bad.sum())} pairs")
    bad = np.abs(L(g.inverse(xs)) - lx) > eps
    if bad.any():
        v.append(f"inverse symmetry fails on {int(bad.sum())} elements")
    ident = g.identity()
    is_id = np.all((np.asarray(xs) == ident).reshape(len(lx), -1), axis=1)
    bad = (lx <= eps) != is_id
    if bad.any():
        v.append(f"faithfulness fails on {int(bad.sum())} elements")
    if np.any(L(np.asarray(ident)[None]) > eps):
        v.append("identity has positive length")
    conj = g.compose(g.compose(xs, ys), g.inverse(xs))
    bad = np.abs(L(conj) - ly) > eps
    if bad.any():
        v.append(f"conjugation invariance fails on {int(bad.sum())} pairs")
    return AxiomReport(not v, v, checked)
