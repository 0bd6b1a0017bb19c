"""Half-tree sums for x_{n+1} = +-beta x_n + x_{n-1} and their six-way case split.

Below a node a with child b, the half tree is

                 a
                 |
                 b
            /         \\
     c = |a - beta b|   d = a + beta b
      /      \\          /      \\
 |b-beta c| b+beta c  |b-beta d| b+beta d

The bottom sum is beta (c + d) + 2b + |b - beta c| + |b - beta d|. Resolving the
two remaining absolute values splits the (a, b) quadrant into six regions, each
with a linear formula. The printed table of those formulas carries two rows
(2 and 6) that do not match the resolved equations; both versions are kept
and reported side by side.
"""

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Tuple

import numpy as np

from ..enumeration.scalar import Scalar, as_exact, normalize
from ..errors import InvalidConfigError

CASE_IDS = (1, 2, 3, 4, 5, 6)
SEARCH_BATCH = 100_000


@dataclass(frozen=True)
class TableRow:
    """One printed row of the case table, plus the resolved formula."""

    case: int
    conditions: str
    restriction: str
    printed_formula: str
    derived_formula: str


TABLE = {
    1: TableRow(1, "beta b >= a, beta a + beta^2 b >= b", "beta^2 > 1/2",
                "beta(c+d) + 2b + 2 beta a", "beta(c+d) + 2b + 2 beta a"),
    2: TableRow(2, "beta b >= a, beta^2 b > b + beta a", "beta > 1",
                "beta(c+d) + (2 + 2 beta^2) b", "beta(c+d) + 2 beta^2 b"),
    # printed as "(4 - 2 beta^2 b"; read as (4 - 2 beta^2) b
    3: TableRow(3, "beta b >= a, beta a + beta^2 b < b", "beta < 1",
                "beta(c+d) + (4 - 2 beta^2) b", "beta(c+d) + (4 - 2 beta^2) b"),
    4: TableRow(4, "beta b < a, beta a + beta^2 b >= b", "",
                "beta(c+d) + (2 + 2 beta^2) b", "beta(c+d) + (2 + 2 beta^2) b"),
    5: TableRow(5, "beta b < a, beta a > beta^2 b + b", "b = 0",
                "beta(c+d) + 2 beta a", "beta(c+d) + 2 beta a"),
    6: TableRow(6, "beta b < a, beta a + beta^2 b < b", "beta^2 < 1/2",
                "beta(c+d) + 2b - 2 beta a", "beta(c+d) + 4b - 2 beta a"),
}


@dataclass(frozen=True)
class HalfTree:
    a: Scalar
    b: Scalar
    beta: Scalar
    c: Scalar
    d: Scalar
    bottom: Tuple[Scalar, Scalar, Scalar, Scalar]


@dataclass(frozen=True)
class CaseSums:
    eq_derived: Scalar
    table_printed: Scalar


@dataclass(frozen=True)
class CaseReport:
    case: int
    brute_sum: Scalar
    eq_derived_sum: Scalar
    table_printed_sum: Scalar
    agree_eq: bool
    agree_table: bool


@dataclass(frozen=True)
class Satisfiability:
    satisfiable: bool
    witness: Optional[Tuple[Scalar, Scalar]]
    searched: int


@dataclass(frozen=True)
class CriticalBetaReport:
    value: float
    below_beta: Scalar
    below_witness: Optional[Tuple[Scalar, Scalar]]
    above_beta: Scalar
    above_satisfiable: bool
    searched: int


@dataclass(frozen=True)
class AuditRow:
    case: int
    conditions: str
    restriction: str
    printed_formula: str
    derived_formula: str
    beta: Scalar
    satisfiable: bool
    witness_a: Optional[Scalar]
    witness_b: Optional[Scalar]
    brute_sum: Optional[Scalar]
    eq_derived_sum: Optional[Scalar]
    table_printed_sum: Optional[Scalar]
    agree_eq: Optional[bool]
    agree_table: Optional[bool]


def _exact_inputs(a, b, beta):
    a, b, beta = as_exact(a), as_exact(b), as_exact(beta)
    if a < 0 or b < 0:
        raise InvalidConfigError(f"a and b must be nonnegative, got a={a}, b={b}")
    if beta <= 0:
        raise InvalidConfigError(f"beta must be positive, got {beta}")
    return a, b, beta


def half_tree(a, b, beta):
    """Build the half tree below a through its child b."""
    a, b, beta = _exact_inputs(a, b, beta)
    c = abs(a - beta * b)
    d = a + beta * b
    bottom = (abs(b - beta * c), b + beta * c, abs(b - beta * d), b + beta * d)
    return HalfTree(a, b, beta, c, d, bottom)


def half_tree_bottom_sum(a, b, beta):
    """
    Exact sum of the four bottom values of the half tree.

    Args:
        a, b: Nonnegative node values
        beta: Positive multiplier

    Returns:
        2b + beta(c + d) + |b - beta c| + |b - beta d|
    """
    return normalize(Fraction(sum(half_tree(a, b, beta).bottom)))


def classify_case(a, b, beta):
    """
    Table row whose conditions hold at (a, b, beta).

    Rows 1-3 share beta b >= a and rows 4-6 share beta b < a. Inside each group
    the strict test of row 2 (resp. 5) is applied first, then the >= test of
    row 1 (resp. 4); what remains is row 3 (resp. 6).
    """
    a, b, beta = _exact_inputs(a, b, beta)
    if a == 0 and b == 0:
        raise InvalidConfigError("a and b cannot both be zero")
    ba, bb, b2b = beta * a, beta * b, beta * beta * b
    if bb >= a:
        if b2b > b + ba:
            return 2
        if ba + b2b >= b:
            return 1
        return 3
    if ba > b2b + b:
        return 5
    if ba + b2b >= b:
        return 4
    return 6


def case_conditions_hold(case, a, b, beta):
    """True when (a, b, beta) lies in the region of the given row."""
    if case not in CASE_IDS:
        raise InvalidConfigError(f"case must be one of {CASE_IDS}, got {case}")
    a, b = as_exact(a), as_exact(b)
    if a == 0 and b == 0:
        return False
    return classify_case(a, b, beta) == case


def case_sum_formulas(case, a, b, c, d, beta):
    """
    Evaluate the equation-derived and the printed sum of one row.

    Args:
        case: Row 1-6; (a, b, beta) must lie in its region
        a, b, c, d, beta: Half-tree values

    Returns:
        CaseSums(eq_derived, table_printed)
    """
    if not case_conditions_hold(case, a, b, beta):
        raise InvalidConfigError(f"(a={a}, b={b}, beta={beta}) does not satisfy the conditions of row {case}")
    a, b, c, d, beta = (as_exact(v) for v in (a, b, c, d, beta))
    head = beta * (c + d)
    b2 = beta * beta
    derived = {
        1: head + 2 * b + 2 * beta * a,
        2: head + 2 * b2 * b,
        3: head + (4 - 2 * b2) * b,
        4: head + (2 + 2 * b2) * b,
        5: head + 2 * beta * a,
        6: head + 4 * b - 2 * beta * a,
    }[case]
    printed = {
        1: head + 2 * b + 2 * beta * a,
        2: head + (2 + 2 * b2) * b,
        3: head + (4 - 2 * b2) * b,
        4: head + (2 + 2 * b2) * b,
        5: head + 2 * beta * a,
        6: head + 2 * b - 2 * beta * a,
    }[case]
    return CaseSums(normalize(Fraction(derived)), normalize(Fraction(printed)))


def case_report(a, b, beta):
    """Classify (a, b, beta) and compare both formulas against the brute-force sum."""
    tree = half_tree(a, b, beta)
    case = classify_case(tree.a, tree.b, tree.beta)
    sums = case_sum_formulas(case, tree.a, tree.b, tree.c, tree.d, tree.beta)
    brute = normalize(Fraction(sum(tree.bottom)))
    return CaseReport(
        case=case,
        brute_sum=brute,
        eq_derived_sum=sums.eq_derived,
        table_printed_sum=sums.table_printed,
        agree_eq=sums.eq_derived == brute,
        agree_table=sums.table_printed == brute,
    )


def _candidate_points(beta):
    """
    (a, b) points covering every region of the case split at this beta.

    The conditions are homogeneous in (a, b), so only t = a/b matters (plus b = 0).
    The regions are intervals in t cut at beta, (1 - beta^2)/beta, (beta^2 - 1)/beta
    and (1 + beta^2)/beta; the cuts, their midpoints and points beyond both ends
    meet every nonempty region.
    """
    cuts = {beta, (1 - beta * beta) / beta, (beta * beta - 1) / beta, (1 + beta * beta) / beta}
    cuts = sorted(t for t in cuts if t > 0)
    ratios = [Fraction(0)] + cuts
    ratios += [(lo + hi) / 2 for lo, hi in zip(ratios[:-1], ratios[1:])]
    ratios.append(2 * cuts[-1] + 1)
    points = [(1, 1)]
    points += [(normalize(Fraction(t)), 1) for t in sorted(set(ratios))]
    points.append((1, 0))
    return points


def _classify_array(a, b, beta):
    ba, bb, b2b = beta * a, beta * b, beta * beta * b
    upper = np.where(b2b > b + ba, 2, np.where(ba + b2b >= b, 1, 3))
    lower = np.where(ba > b2b + b, 5, np.where(ba + b2b >= b, 4, 6))
    return np.where(bb >= a, upper, lower)


def case_restriction_satisfiable(case, beta, trials=1_000_000, rng_seed=0):
    """
    Search for (a, b) >= 0, not both zero, in the region of a row.

    Structured candidates are tried first, then `trials` random points drawn
    from a Philox stream seeded with rng_seed. Random hits are screened in
    floating point and confirmed in exact arithmetic, so a reported witness
    always satisfies the conditions exactly.

    Returns:
        Satisfiability(satisfiable, witness, searched)
    """
    if case not in CASE_IDS:
        raise InvalidConfigError(f"case must be one of {CASE_IDS}, got {case}")
    beta = as_exact(beta)
    if beta <= 0:
        raise InvalidConfigError(f"beta must be positive, got {beta}")

    searched = 0
    for a, b in _candidate_points(beta):
        searched += 1
        if case_conditions_hold(case, a, b, beta):
            return Satisfiability(True, (a, b), searched)

    rng = np.random.Generator(np.random.Philox(rng_seed))
    beta_f = float(beta)
    remaining = trials
    while remaining > 0:
        size = min(SEARCH_BATCH, remaining)
        # log-uniform ratios cover both a >> b and b >> a
        a = rng.random(size) * np.exp(rng.uniform(-8.0, 8.0, size))
        b = rng.random(size)
        hits = np.flatnonzero(_classify_array(a, b, beta_f) == case)
        for i in hits:
            a_i, b_i = normalize(Fraction(float(a[i]))), normalize(Fraction(float(b[i])))
            if case_conditions_hold(case, a_i, b_i, beta):
                return Satisfiability(True, (a_i, b_i), searched + int(i) + 1)
        searched += size
        remaining -= size
    return Satisfiability(False, None, searched)


def critical_beta():
    """The threshold 1/sqrt(2): row 6, the only sum with a subtracted beta a term, needs beta^2 < 1/2."""
    return 1.0 / math.sqrt(2.0)


def critical_beta_report(below=Fraction(7, 10), above=Fraction(7072, 10000), trials=1_000_000, rng_seed=0):
    """Row-6 witness search on both sides of the critical value."""
    below_result = case_restriction_satisfiable(6, below, trials, rng_seed)
    above_result = case_restriction_satisfiable(6, above, trials, rng_seed)
    return CriticalBetaReport(
        value=critical_beta(),
        below_beta=as_exact(below),
        below_witness=below_result.witness,
        above_beta=as_exact(above),
        above_satisfiable=above_result.satisfiable,
        searched=below_result.searched + above_result.searched,
    )


def table_audit(beta, trials=1_000_000, rng_seed=0):
    """
    One AuditRow per table row at the given beta.

    Each row gets a witness search; when one is found, the brute-force,
    equation-derived and printed sums are evaluated there.
    """
    beta = as_exact(beta)
    rows = []
    for case in CASE_IDS:
        printed = TABLE[case]
        found = case_restriction_satisfiable(case, beta, trials, rng_seed)
        report = case_report(*found.witness, beta) if found.satisfiable else None
        rows.append(AuditRow(
            case=case,
            conditions=printed.conditions,
            restriction=printed.restriction,
            printed_formula=printed.printed_formula,
            derived_formula=printed.derived_formula,
            beta=beta,
            satisfiable=found.satisfiable,
            witness_a=found.witness[0] if found.satisfiable else None,
            witness_b=found.witness[1] if found.satisfiable else None,
            brute_sum=report.brute_sum if report else None,
            eq_derived_sum=report.eq_derived_sum if report else None,
            table_printed_sum=report.table_printed_sum if report else None,
            agree_eq=report.agree_eq if report else None,
            agree_table=report.agree_table if report else None,
        ))
    return rows
