"""Global limits shared by every module.

All caps are plain module-level defaults; operations that enumerate accept a
``caps`` argument so a single run can override them without touching global
state.
"""
from __future__ import annotations

import os
from dataclasses import dataclass, field, asdict


class CapExceeded(RuntimeError):
    """Raised when an enumeration or construction would exceed a configured cap."""


@dataclass(frozen=True)
class Caps:
    degree: int = 10**7          # points of a generated permutation
    enum: int = 5040             # elements enumerated per quantifier / scan
    work: int = 10**8            # total evaluations of nested loops
    search_work: int = 10**9     # relator evaluations in exhaustive search
    matrix_dim: int = 4096       # dimension of generated matrices
    memo_states: int = 1 << 20   # transfer-matrix states
    colorings: int = 1 << 24     # k**n colorings in sofic counting

    def as_dict(self) -> dict:
        return asdict(self)


DEFAULT_CAPS = Caps()

UNITARY_TOL = 1e-9
POLAR_TOL = 1e-13
POLAR_MAX_ITER = 60


@dataclass
class RunConfig:
    seed: int = 0
    workers: int = 1
    caps: Caps = field(default_factory=Caps)
    output: str = "human"

    def echo(self) -> dict:
        return {"seed": self.seed, "workers": self.workers,
                "output": self.output, "caps": self.caps.as_dict(),
                "backend": backend_name()}


def backend_name() -> str:
    from .kernels import BACKEND
    return BACKEND


def env_flag(name: str, default: str = "") -> str:
    return os.environ.get(name, default).strip().lower()
