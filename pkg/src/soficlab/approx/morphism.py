"""Approximate morphisms into symmetric or unitary groups and their defects."""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

import numpy as np

from ..perm import Permutation, parse_perm
from ..unitary import as_square, format_matrix, hs_distance, hs_length, parse_matrix
from .models import GroupModel


@dataclass
class ApproxMorphism:
    """Finite map from elements of ``model`` to permutations or unitaries."""

    model: GroupModel
    domain: list
    images: list
    target: str = "sym"  # "sym" | "unitary"

    def __post_init__(self):
        if len(self.domain) != len(self.images):
            raise ValueError("domain and images differ in length")
        if not self.domain:
            raise ValueError("empty domain")
        if self.target not in ("sym", "unitary"):
            raise ValueError(f"unknown target {self.target!r}")
        self._index = {}
        for i, g in enumerate(self.domain):
            k = self.model.key(g)
            if k in self._index:
                raise ValueError(f"duplicate domain element {self.model.format(g)}")
            self._index[k] = i
        degs = {self._degree(x) for x in self.images}
        if len(degs) != 1:
            raise ValueError("images have different degrees")
        self.degree = degs.pop()

    def _degree(self, x) -> int:
        return x.n if self.target == "sym" else as_square(x).shape[0]

    def index_of(self, g) -> int | None:
        return self._index.get(self.model.key(g))

    def __call__(self, g):
        i = self.index_of(g)
        if i is None:
            raise KeyError(f"{self.model.format(g)} is not in the domain")
        return self.images[i]

    def __contains__(self, g) -> bool:
        return self.index_of(g) is not None

    def items(self):
        return zip(self.domain, self.images)

    def image_array(self) -> np.ndarray:
        if self.target != "sym":
            raise TypeError("image_array needs a symmetric target")
        return np.stack([p.images for p in self.images])

    def target_length(self, x):
        if self.target == "sym":
            return Fraction(x.moved_points(), x.n)
        return hs_length(x)

    def identity_ok(self) -> bool:
        """Phi(1) = 1 whenever the identity is in the domain."""
        i = self.index_of(self.model.identity())
        if i is None:
            return True
        x = self.images[i]
        if self.target == "sym":
            return x.is_identity()
        return bool(np.allclose(x, np.eye(x.shape[0]), atol=1e-12))


@dataclass
class DefectReport:
    mult: Fraction | float
    length: Fraction | float
    pairs: int
    outside: int
    unresolved: list = field(default_factory=list)
    worst_pair: tuple | None = None

    @property
    def value(self):
        return max(self.mult, self.length)


def defect(phi: ApproxMorphism) -> DefectReport:
    """Multiplicative defect max d(Phi(gh), Phi(g)Phi(h)) over g, h, gh in F, and
    the length defect max |l(Phi(g)) - l(g)| with the trivial source length."""
    model = phi.model
    m = len(phi.domain)
    # product index table: -1 outside F, -2 unresolved
    prod = np.full((m, m), -1, dtype=np.int64)
    unresolved = []
    for a, g in enumerate(phi.domain):
        for b, h in enumerate(phi.domain):
            gh = model.mul(g, h)
            idx = phi.index_of(gh)
            if idx is not None:
                prod[a, b] = idx
            elif not model.decides and model.is_identity(gh) is None:
                prod[a, b] = -2
                unresolved.append((model.format(g), model.format(h)))
    worst, worst_pair = (Fraction(0) if phi.target == "sym" else 0.0), None
    if phi.target == "sym":
        P = phi.image_array()
        n = P.shape[1]
        for a in range(m):
            bs = np.nonzero(prod[a] >= 0)[0]
            if not len(bs):
                continue
            composed = P[a][P[bs]]  # Phi(g) o Phi(h)
            diff = (composed != P[prod[a, bs]]).sum(axis=1)
            k = int(np.argmax(diff))
            d = Fraction(int(diff[k]), n)
            if d > worst or worst_pair is None:
                worst = d
                worst_pair = (model.format(phi.domain[a]), model.format(phi.domain[bs[k]]))
    else:
        U = [as_square(u) for u in phi.images]
        for a in range(m):
            for b in np.nonzero(prod[a] >= 0)[0]:
                d = hs_distance(U[prod[a, b]], U[a] @ U[b])
                if d > worst or worst_pair is None:
                    worst = d
                    worst_pair = (model.format(phi.domain[a]), model.format(phi.domain[b]))
    lens = [abs(phi.target_length(x) - model.length(g)) for g, x in phi.items()]
    ldef = max(lens)
    return DefectReport(worst, ldef, int((prod >= 0).sum()), int((prod == -1).sum()),
                        unresolved, worst_pair)


# -- text format ----------------------------------------------------------------

def format_morphism(phi: ApproxMorphism) -> str:
    kind = "sym" if phi.target == "sym" else "unitary"
    lines = [f"target {kind} {phi.degree}"]
    for g, x in phi.items():
        name = phi.model.format(g)
        if phi.target == "sym":
            lines.append(f"map {name} -> {x.to_text()}")
        else:
            lines.append(f"map {name} -> {format_matrix(x)}")
    return "\n".join(lines) + "\n"


def parse_morphism(text: str, model: GroupModel) -> ApproxMorphism:
    lines = [ln.rstrip() for ln in text.splitlines() if ln.strip() and not ln.lstrip().startswith("#")]
    if not lines:
        raise ValueError("empty morphism file")
    head = lines[0].split()
    if len(head) != 3 or head[0] != "target" or head[1] not in ("sym", "unitary"):
        raise ValueError(f"bad morphism header {lines[0]!r}; expected 'target sym n' or 'target unitary n'")
    target, n = head[1], int(head[2])
    domain, images = [], []
    i = 1
    while i < len(lines):
        ln = lines[i].strip()
        if not ln.startswith("map ") or "->" not in ln:
            raise ValueError(f"line {i + 1}: expected 'map <name> -> ...', got {ln!r}")
        name, rhs = ln[4:].split("->", 1)
        domain.append(model.parse(name.strip()))
        rhs = rhs.strip()
        if target == "sym":
            p = parse_perm(rhs)
            if p.n != n:
                raise ValueError(f"line {i + 1}: degree {p.n} != {n}")
            images.append(p)
            i += 1
        else:
            block = "\n".join([rhs] + lines[i + 1:i + 1 + n])
            images.append(parse_matrix(block))
            i += 1 + n
    return ApproxMorphism(model, domain, images, target)


def identity_morphism(model: GroupModel, elements: Sequence, perms: Sequence[Permutation]) -> ApproxMorphism:
    return ApproxMorphism(model, list(elements), list(perms), "sym")
