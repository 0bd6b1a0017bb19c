"""Beta-scaled half-tree case analysis."""

from .cases import (
    CaseReport,
    HalfTree,
    case_restriction_satisfiable,
    case_sum_formulas,
    classify_case,
    critical_beta,
    half_tree_bottom_sum,
    table_audit,
)

__all__ = [
    "CaseReport",
    "HalfTree",
    "case_restriction_satisfiable",
    "case_sum_formulas",
    "classify_case",
    "critical_beta",
    "half_tree_bottom_sum",
    "table_audit",
]
