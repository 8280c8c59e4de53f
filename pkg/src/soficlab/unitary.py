"""Complex matrices with the normalized trace and the Hilbert-Schmidt length."""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Mapping, Sequence

import numpy as np

from .config import DEFAULT_CAPS, POLAR_MAX_ITER, POLAR_TOL, UNITARY_TOL, CapExceeded
from .perm import Permutation


class PolarError(ArithmeticError):
    """Polar iteration hit a (near) singular input or failed to converge."""

    def __init__(self, msg: str, residuals: list[float]):
        super().__init__(msg)
        self.residuals = residuals


def as_square(x) -> np.ndarray:
    a = np.asarray(x, dtype=np.complex128)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {a.shape}")
    return a


def ntrace(x) -> complex:
    """Normalized trace: diagonal sum over n."""
    a = as_square(x)
    return complex(np.trace(a) / a.shape[0])


def hs_norm(x) -> float:
    a = as_square(x)
    return math.sqrt(max(0.0, ntrace(a.conj().T @ a).real))


def hs_length(x) -> float:
    a = as_square(x)
    return 0.5 * hs_norm(a - np.eye(a.shape[0]))


def hs_metrics(x) -> tuple[complex, float, float]:
    """(normalized trace, Hilbert-Schmidt norm, Hilbert-Schmidt length)."""
    a = as_square(x)
    return ntrace(a), hs_norm(a), hs_length(a)


def hs_distance(x, y) -> float:
    """Bi-invariant distance ``l(x y^-1)`` for unitaries, i.e. half of ``||x - y||_2``."""
    return 0.5 * hs_norm(as_square(x) - as_square(y))


def unitarity_defect(x) -> float:
    a = as_square(x)
    eye = np.eye(a.shape[0])
    return max(hs_norm(a.conj().T @ a - eye), hs_norm(a @ a.conj().T - eye))


def is_unitary(x, tol: float = UNITARY_TOL) -> bool:
    return unitarity_defect(x) <= tol


def _require_unitary(x, tol: float = UNITARY_TOL) -> np.ndarray:
    a = as_square(x)
    d = unitarity_defect(a)
    if d > tol:
        raise ValueError(f"matrix is not unitary (defect {d:.3e} > {tol:.1e})")
    return a


def permutation_matrix(s: Permutation) -> np.ndarray:
    """``P e_i = e_{s(i)}``; a homomorphism under the composition convention."""
    n = s.n
    p = np.zeros((n, n), dtype=np.complex128)
    p[s.images, np.arange(n)] = 1.0
    return p


def permutation_trace(s: Permutation) -> Fraction:
    """Exact normalized trace of the permutation matrix: fixed points over n."""
    return Fraction(s.fixed_points(), s.n)


def tensor_power_unitary(u, k: int, *, caps=DEFAULT_CAPS) -> np.ndarray:
    a = _require_unitary(u)
    if k < 1:
        raise ValueError("k must be positive")
    if a.shape[0] ** k > caps.matrix_dim:
        raise CapExceeded(f"dimension {a.shape[0]}**{k} exceeds cap {caps.matrix_dim}")
    out = a
    for _ in range(k - 1):
        out = np.kron(out, a)
    return out


def corner_pad(u) -> np.ndarray:
    """``diag(u, I_n)``: pushes the trace of any non-identity unitary strictly inside the disc."""
    a = _require_unitary(u)
    n = a.shape[0]
    out = np.eye(2 * n, dtype=np.complex128)
    out[:n, :n] = a
    return out


def polar_repair(a, *, tol: float = POLAR_TOL, max_iter: int = POLAR_MAX_ITER,
                 min_singular: float = 1e-8) -> np.ndarray:
    """Unitary polar factor of ``a`` by the Newton iteration ``X <- (X + X^-*) / 2``.

    The polar factor is the unitary nearest to ``a`` in Hilbert-Schmidt norm.
    """
    x = as_square(a).copy()
    residuals: list[float] = []
    smin = np.linalg.svd(x, compute_uv=False)[-1]
    if smin <= min_singular:
        raise PolarError(f"input is singular (smallest singular value {smin:.3e})", residuals)
    for _ in range(max_iter):
        try:
            xi = np.linalg.inv(x).conj().T
        except np.linalg.LinAlgError as exc:
            raise PolarError("iterate became singular", residuals) from exc
        nxt = 0.5 * (x + xi)
        step = hs_norm(nxt - x)
        residuals.append(step)
        x = nxt
        if step < tol:
            break
    else:
        raise PolarError(f"no convergence in {max_iter} iterations", residuals)
    if unitarity_defect(x) > 1e-10:
        raise PolarError("iterate is not unitary to 1e-10", residuals)
    return x


def op_norm_length(x, *, tol: float = 1e-9, max_iter: int = 500, seed: int = 0) -> float:
    """``||1 - x||_op / 2`` via power iteration on ``(1-x)^*(1-x)``."""
    a = as_square(x)
    n = a.shape[0]
    d = np.eye(n) - a
    h = d.conj().T @ d
    if not np.any(np.abs(h) > 0):
        return 0.0
    rng = np.random.default_rng(seed)
    v = rng.standard_normal(n) + 1j * rng.standard_normal(n)
    v /= np.linalg.norm(v)
    lam = 0.0
    for _ in range(max_iter):
        w = h @ v
        nw = np.linalg.norm(w)
        if nw == 0.0:
            return 0.0
        new = float(np.vdot(v, w).real)
        v = w / nw
        if abs(new - lam) <= tol * max(1.0, abs(new)):
            lam = new
            break
        lam = new
    return 0.5 * math.sqrt(max(lam, 0.0))


# -- microstates ------------------------------------------------------------

Letter = tuple[int, int]


def reduced_words(num_gens: int, max_len: int):
    """Freely reduced words of length <= max_len in shortlex order, empty word first."""
    letters = [(g, e) for g in range(num_gens) for e in (1, -1)]
    yield ()
    frontier: list[tuple[Letter, ...]] = [()]
    for _ in range(max_len):
        nxt = []
        for w in frontier:
            for l in letters:
                if w and w[-1][0] == l[0] and w[-1][1] == -l[1]:
                    continue
                nxt.append(w + (l,))
        for w in nxt:
            yield w
        frontier = nxt


@dataclass
class MicrostateReport:
    defect: float
    words_checked: int
    skipped: list[tuple[Letter, ...]] = field(default_factory=list)
    worst_word: tuple[Letter, ...] = ()

    @property
    def skipped_count(self) -> int:
        return len(self.skipped)


def microstate_defect(phi: Mapping[str, np.ndarray] | Sequence[np.ndarray],
                      is_identity: Callable[[tuple[Letter, ...]], bool],
                      max_word_len: int,
                      relations: Sequence[Sequence[Letter]] = (),
                      *, require_unitary: bool = True) -> MicrostateReport:
    """Max trace mismatch of reduced words against the group's identity oracle.

    For a word declared trivial the mismatch is ``|tau(w) - 1|``, otherwise
    ``|tau(w)|``. Extra ``relations`` are always treated as trivial words.
    """
    mats = list(phi.values()) if isinstance(phi, Mapping) else list(phi)
    if not mats:
        raise ValueError("no generators")
    mats = [as_square(m) for m in mats]
    dim = mats[0].shape[0]
    if any(m.shape[0] != dim for m in mats):
        raise ValueError("all matrices must share one dimension")
    if require_unitary:
        for m in mats:
            _require_unitary(m)
    invs = [m.conj().T if require_unitary else np.linalg.inv(m) for m in mats]

    def value(w) -> np.ndarray:
        out = np.eye(dim, dtype=np.complex128)
        for g, e in w:
            out = out @ (mats[g] if e > 0 else invs[g])
        return out

    worst = 0.0
    worst_word: tuple = ()
    checked = 0
    skipped = []
    for w in reduced_words(len(mats), max_word_len):
        try:
            trivial = bool(is_identity(w))
        except Exception:
            skipped.append(w)
            continue
        t = ntrace(value(w))
        d = abs(t - 1) if trivial else abs(t)
        checked += 1
        if d > worst:
            worst, worst_word = d, w
    for r in relations:
        expanded = tuple((g, 1 if e > 0 else -1) for g, e in r for _ in range(abs(e)))
        d = abs(ntrace(value(expanded)) - 1)
        checked += 1
        if d > worst:
            worst, worst_word = d, tuple(expanded)
    return MicrostateReport(worst, checked, skipped, worst_word)


# -- text format -------------------------------------------------------------

def _fmt_complex(z: complex) -> str:
    return f"{z.real!r}{'+' if z.imag >= 0 else '-'}{abs(z.imag)!r}i"


def format_matrix(x) -> str:
    a = as_square(x)
    lines = [f"mat {a.shape[0]}:"]
    for row in a:
        lines.append(" ".join(_fmt_complex(complex(z)) for z in row))
    return "\n".join(lines)


def parse_matrix(text: str) -> np.ndarray:
    lines = [ln for ln in text.strip().splitlines() if ln.strip()]
    if not lines or not lines[0].strip().startswith("mat"):
        raise ValueError("matrix text must start with 'mat n:'")
    head = lines[0].strip()
    try:
        n = int(head[3:].strip().rstrip(":"))
    except ValueError as exc:
        raise ValueError(f"bad matrix header {head!r}") from exc
    rows = lines[1:1 + n]
    if len(rows) != n:
        raise ValueError(f"expected {n} rows, got {len(rows)}")
    out = np.empty((n, n), dtype=np.complex128)
    for i, row in enumerate(rows):
        toks = row.split()
        if len(toks) != n:
            raise ValueError(f"row {i} has {len(toks)} entries, expected {n}")
        for j, t in enumerate(toks):
            out[i, j] = complex(t.replace("i", "j"))
    return out


def iter_matrix_blocks(text: str):
    """Split a file holding several ``mat n:`` blocks."""
    lines = [ln for ln in text.splitlines() if ln.strip()]
    i = 0
    while i < len(lines):
        head = lines[i].strip()
        n = int(head[3:].strip().rstrip(":"))
        yield parse_matrix("\n".join(lines[i:i + n + 1]))
        i += n + 1


def random_unitary(n: int, rng: np.random.Generator) -> np.ndarray:
    """Haar-distributed unitary via QR with phase correction."""
    z = (rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))) / math.sqrt(2)
    q, r = np.linalg.qr(z)
    d = np.diagonal(r)
    return q * (d / np.abs(d))


def random_hermitian(n: int, rng: np.random.Generator) -> np.ndarray:
    z = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
    h = (z + z.conj().T) / 2
    return h / np.linalg.norm(h, 2)

