"""Bundled sentences used by the acceptance tests and the CLI."""
from __future__ import annotations

from .parser import parse_formula

CORPUS: dict[str, str] = {
    "commutator": "sup x . sup y . len(x*y*x^-1*y^-1)",
    "near_zero_or_one": "sup x . min(abs(len(x) - 1), len(x))",
    "max_length": "sup x . len(x)",
    "balanced": "inf x . max(len(x), 1 - len(x))",
    "square_root": "sup x . inf y . len(x^-1*y^2)",
    "involution_gap": "sup x . clamp(len(x) - 2 * len(x^2))",
    "commutator_escape": "sup x . inf y . max(len(y), abs(len(x*y*x^-1*y^-1) - len(x)))",
    "commuting_lengths": "1 - sup x . sup y . min(len(x), len(y), 1 - len(x*y*x^-1*y^-1))",
}


def corpus_asts() -> dict:
    return {k: parse_formula(v) for k, v in CORPUS.items()}
