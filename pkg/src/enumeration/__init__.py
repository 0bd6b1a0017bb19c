"""Exact sign-tree enumeration modules."""

from .scalar import Mode, SeedPair, parse_scalar
from .tree import AggregatedRow, NodeState, RowSummary, enumerate_rows, root_row, row_stats, step_row

__all__ = [
    "Mode",
    "SeedPair",
    "parse_scalar",
    "AggregatedRow",
    "NodeState",
    "RowSummary",
    "enumerate_rows",
    "root_row",
    "row_stats",
    "step_row",
]
