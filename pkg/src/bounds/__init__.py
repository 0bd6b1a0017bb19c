"""Growth bounds: polynomial roots and row-sum recurrences."""

from .polyroots import Polynomial, dominant_root, real_roots
from .recurrences import (
    BoundSequences,
    GrowthConstants,
    Lemma1Subtree,
    bound_sequences,
    growth_constants,
    lemma1_check,
    ss_sequence,
)

__all__ = [
    "Polynomial",
    "dominant_root",
    "real_roots",
    "BoundSequences",
    "GrowthConstants",
    "Lemma1Subtree",
    "bound_sequences",
    "growth_constants",
    "lemma1_check",
    "ss_sequence",
]
