# Backend selection: numba by default, pure numpy when SOFICLAB_BACKEND=numpy
# or when numba cannot be imported. Both modules expose the same functions and
# must return identical results; the benchmark in benchmarks/ compares them.
from __future__ import annotations

import os

from . import _numpy as numpy_backend

_requested = os.environ.get("SOFICLAB_BACKEND", "numba").strip().lower()

numba_backend = None
if _requested != "numpy":
    try:
        from . import _numba as numba_backend
    except ImportError:  # pragma: no cover - numba is a declared dependency
        numba_backend = None

_impl = numba_backend if numba_backend is not None else numpy_backend
BACKEND = "numba" if _impl is numba_backend else "numpy"

moved_counts = _impl.moved_counts
relator_moved = _impl.relator_moved
tuple_energy = _impl.tuple_energy
rank_mod_p = _impl.rank_mod_p
count_pattern_colorings = _impl.count_pattern_colorings
anneal_run = _impl.anneal_run
exhaustive_min = _impl.exhaustive_min

__all__ = [
    "BACKEND", "numpy_backend", "numba_backend", "moved_counts", "relator_moved",
    "tuple_energy", "rank_mod_p", "count_pattern_colorings", "anneal_run",
    "exhaustive_min",
]
