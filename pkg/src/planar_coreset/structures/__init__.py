"""Metric ladders, comatchings, double ladders and (k, eps)-comatchings."""
from .clique import max_clique, max_independent_set
from .families import (KTupleFamily, PairFamily, TripleFamily, Verdict, Violation,
                       clean_diameter_check, family_from_dict, validate, validate_comatching,
                       validate_d_comatching, validate_double_ladder, validate_k_comatching,
                       validate_ladder, validate_semi_ladder)
from .ramsey import double_ladder_as_kcomatching, ramsey_extract
from .search import greedy_semi_ladder_trace, max_comatching

__all__ = [
    "KTupleFamily", "PairFamily", "TripleFamily", "Verdict", "Violation",
    "clean_diameter_check", "double_ladder_as_kcomatching", "family_from_dict",
    "greedy_semi_ladder_trace", "max_clique", "max_comatching", "max_independent_set",
    "ramsey_extract", "validate", "validate_comatching", "validate_d_comatching",
    "validate_double_ladder", "validate_k_comatching", "validate_ladder",
    "validate_semi_ladder",
]
