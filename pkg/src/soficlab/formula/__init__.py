from .ast import (Abs, Clamp, Const, Diff, Inf, Len, Max, Min, Scale, Sum, Sup,
                  free_variables, is_sentence, to_text)
from .corpus import CORPUS, corpus_asts
from .evaluate import EvalResult, MissingAssignment, Sampled, evaluate, sentence_series
from .parser import FormulaSyntaxError, parse_formula

__all__ = [
    "Abs", "Clamp", "Const", "Diff", "Inf", "Len", "Max", "Min", "Scale", "Sum", "Sup",
    "free_variables", "is_sentence", "to_text", "CORPUS", "corpus_asts", "EvalResult",
    "MissingAssignment", "Sampled", "evaluate", "sentence_series", "FormulaSyntaxError",
    "parse_formula",
]
