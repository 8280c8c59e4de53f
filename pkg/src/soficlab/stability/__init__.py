from .presentation import (Presentation, baumslag_solitar, builtin, commutator, commutator_word,
                           higman, parse_presentation, parse_word, thompson_f)
from .search import (HIGMAN_THRESHOLD, ContractiveReport, NearestResult, ProfileRow, ScanResult,
                     SearchResult, TupleCandidate, commutator_contractive_suite, exact_scan,
                     nearest_exact, presentation_defect, reference_defect, relator_lengths,
                     search_approximate, stability_profile, tuple_distance, verify_solution)

__all__ = [
    "Presentation", "baumslag_solitar", "builtin", "commutator", "commutator_word", "higman",
    "parse_presentation", "parse_word", "thompson_f",
    "HIGMAN_THRESHOLD", "ContractiveReport", "NearestResult", "ProfileRow", "ScanResult",
    "SearchResult", "TupleCandidate", "commutator_contractive_suite", "exact_scan",
    "nearest_exact", "presentation_defect", "reference_defect", "relator_lengths",
    "search_approximate", "stability_profile", "tuple_distance", "verify_solution",
]
