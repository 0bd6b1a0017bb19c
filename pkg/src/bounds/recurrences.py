"""Row-sum bound recurrences, the subtree inequality behind them, and growth constants."""

import math
from dataclasses import dataclass
from fractions import Fraction
from types import MappingProxyType
from typing import List, Optional, Tuple

from ..enumeration.scalar import Mode, Scalar, as_exact, normalize
from ..enumeration.tree import AggregatedRow, row_stats, step_row
from ..errors import InvalidConfigError, VerificationError
from .polyroots import (
    DEFAULT_NEWTON_STEPS,
    DEFAULT_TOLERANCE,
    LOWER_CUBIC,
    SS_QUADRATIC,
    UPPER_CUBIC,
    Polynomial,
    dominant_root,
)


@dataclass(frozen=True)
class Lemma1Subtree:
    """The three levels below a node a at beta = 1, given its children b1 >= a and b2."""

    a: Scalar
    b1: Scalar
    b2: Scalar
    c1: Scalar
    c2: Scalar
    d1: Scalar
    d2: Scalar
    sigma: Scalar


@dataclass(frozen=True)
class Lemma1Result:
    subtree: Lemma1Subtree
    lower_bound: Scalar
    upper_bound: Scalar
    holds: bool
    enumerated_sigma: Scalar
    # |b2 - |a - b2||, the only b2-dependent term of sigma; at most a
    correction: Scalar
    proof_case: str


@dataclass(frozen=True)
class BoundSequences:
    L: List[Scalar]
    U: List[Scalar]
    S_init: Tuple[Scalar, Scalar, Scalar]


@dataclass(frozen=True)
class BoundCheck:
    """One row of the sandwich report."""

    n: int
    L: Scalar
    S: Scalar
    U: Scalar
    verdict: bool
    lower_ratio: Optional[float]
    S_ratio: Optional[float]
    upper_ratio: Optional[float]


@dataclass(frozen=True)
class GrowthConstants:
    lower_root: float
    upper_root: float
    lower_growth: float
    upper_growth: float
    ss_root_growth: float
    mean_sq_growth: float


def _proof_case(a, b2):
    if b2 >= a:
        return "b2>=a"
    if 2 * b2 >= a:
        return "a>b2>=a/2"
    return "b2<a/2"


def subtree_bottom_sum(a, b1, b2):
    """Sum of the eight leaves three levels below a, by stepping the tree twice."""
    states = {}
    for b in (b1, b2):
        states[(a, b)] = states.get((a, b), 0) + 1
    row = AggregatedRow(level=1, states=MappingProxyType(states), beta=1, mode=Mode.EXACT)
    row = step_row(step_row(row))
    return row_stats(row).S


def lemma1_check(a, b1, b2):
    """
    Evaluate the subtree inequality for one triple.

    Args:
        a: Parent value, >= 0
        b1: First child, >= a
        b2: Second child, >= 0

    Returns:
        Lemma1Result with sigma computed in closed form and by enumeration

    Raises:
        InvalidConfigError: on a negative value or b1 < a
        VerificationError: if the two sigma computations disagree
    """
    a, b1, b2 = as_exact(a), as_exact(b1), as_exact(b2)
    if a < 0 or b2 < 0:
        raise InvalidConfigError(f"a and b2 must be nonnegative, got a={a}, b2={b2}")
    if b1 < a:
        raise InvalidConfigError(f"the subtree inequality assumes b1 >= a, got b1={b1} < a={a}")

    c1, d1 = a + b1, b1 - a
    c2, d2 = a + b2, abs(a - b2)
    correction = abs(b2 - d2)
    sigma = a + b1 + b2 + 2 * c1 + 2 * c2 + d1 + d2 + correction

    enumerated = subtree_bottom_sum(a, b1, b2)
    if enumerated != sigma:
        raise VerificationError(
            f"closed-form sigma {sigma} differs from enumerated {enumerated} at a={a}, b1={b1}, b2={b2}"
        )

    common = c1 + c2 + d1 + d2
    lower = 4 * a + b1 + b2 + common
    upper = 4 * a + 2 * b1 + 2 * b2 + common
    subtree = Lemma1Subtree(a, b1, b2, c1, c2, d1, d2, normalize(Fraction(sigma)))
    return Lemma1Result(
        subtree=subtree,
        lower_bound=normalize(Fraction(lower)),
        upper_bound=normalize(Fraction(upper)),
        holds=lower <= sigma <= upper,
        enumerated_sigma=normalize(Fraction(enumerated)),
        correction=normalize(Fraction(correction)),
        proof_case=_proof_case(a, b2),
    )


def bound_sequences(S0, S1, S2, n_max):
    """
    Lower and upper row-sum recurrences seeded with exact row sums.

        L[n] = L[n-1] + L[n-2] + 4 L[n-3]
        U[n] = U[n-1] + 2 U[n-2] + 4 U[n-3]

    Args:
        S0, S1, S2: Exact sums of rows 0-2, all positive
        n_max: Last index, >= 3

    Returns:
        BoundSequences with lists of length n_max + 1
    """
    initials = tuple(as_exact(s) for s in (S0, S1, S2))
    if any(s <= 0 for s in initials):
        raise InvalidConfigError(f"initial row sums must be positive, got {initials}")
    if n_max < 3:
        raise InvalidConfigError(f"n_max must be at least 3, got {n_max}")

    L, U = list(initials), list(initials)
    for n in range(3, n_max + 1):
        L.append(L[n - 1] + L[n - 2] + 4 * L[n - 3])
        U.append(U[n - 1] + 2 * U[n - 2] + 4 * U[n - 3])
    return BoundSequences(L=L, U=U, S_init=initials)


def ss_sequence(SS0, SS1, n_max, beta=1):
    """
    Sums of squares of the rows: SS[n] = 2 beta^2 SS[n-1] + 4 SS[n-2].

    Exact for every beta, since squaring cancels the cross terms of
    (prev - beta curr)^2 + (prev + beta curr)^2.
    """
    SS0, SS1, beta = as_exact(SS0), as_exact(SS1), as_exact(beta)
    if SS0 < 0 or SS1 < 0 or (SS0 == 0 and SS1 == 0):
        raise InvalidConfigError(f"SS0 and SS1 must be nonnegative and not both zero, got ({SS0}, {SS1})")
    if n_max < 0:
        raise InvalidConfigError(f"n_max must be nonnegative, got {n_max}")

    factor = 2 * beta * beta
    SS = [SS0, SS1]
    for n in range(2, n_max + 1):
        SS.append(normalize(Fraction(factor * SS[n - 1] + 4 * SS[n - 2])))
    return SS[:n_max + 1]


def _ratio(values, n):
    if n == 0 or values[n - 1] == 0:
        return None
    return float(Fraction(values[n]) / Fraction(values[n - 1])) / 2.0


def bound_diagnostics(bounds, S):
    """
    Sandwich verdict L[n] <= S[n] <= U[n] with halved growth ratios per n.

    Args:
        bounds: BoundSequences
        S: Exact row sums, at least as long as bounds.L

    Returns:
        List of BoundCheck
    """
    checks = []
    for n in range(len(bounds.L)):
        checks.append(BoundCheck(
            n=n,
            L=bounds.L[n],
            S=S[n],
            U=bounds.U[n],
            verdict=bounds.L[n] <= S[n] <= bounds.U[n],
            lower_ratio=_ratio(bounds.L, n),
            S_ratio=_ratio(S, n),
            upper_ratio=_ratio(bounds.U, n),
        ))
    return checks


def mean_square_growth(beta=1.0, tolerance=DEFAULT_TOLERANCE, newton_steps=DEFAULT_NEWTON_STEPS):
    """Per-step growth of the raw second moment: dominant root of x^2 - 2 beta^2 x - 4, halved."""
    beta = float(beta)
    return dominant_root(Polynomial((1.0, -2.0 * beta * beta, -4.0)), tolerance, newton_steps) / 2.0


def growth_constants(tolerance=DEFAULT_TOLERANCE, newton_steps=DEFAULT_NEWTON_STEPS):
    """
    Dominant roots of the three characteristic polynomials and the per-step growth they give.

    Row sums double in length every level, so the growth of E|x_n| is the root halved.
    """
    if tolerance <= 0:
        raise InvalidConfigError(f"tolerance must be positive, got {tolerance}")
    lower_root = dominant_root(LOWER_CUBIC, tolerance, newton_steps)
    upper_root = dominant_root(UPPER_CUBIC, tolerance, newton_steps)
    ss_root = dominant_root(SS_QUADRATIC, tolerance, newton_steps)
    assert lower_root < upper_root
    return GrowthConstants(
        lower_root=lower_root,
        upper_root=upper_root,
        lower_growth=lower_root / 2.0,
        upper_growth=upper_root / 2.0,
        ss_root_growth=ss_root,
        mean_sq_growth=ss_root / 2.0,
    )


def variance_ratios(summaries):
    """variance[n] / variance[n-1] for consecutive summaries (None where undefined)."""
    ratios = []
    for prev, curr in zip(summaries[:-1], summaries[1:]):
        ratios.append(None if prev.variance == 0 else float(curr.variance / prev.variance))
    return ratios


def ss_root_is_closed_form(constants, rel_tol=1e-9):
    """True when the second-moment root equals 1 + sqrt(5) to rel_tol."""
    return math.isclose(constants.ss_root_growth, 1.0 + math.sqrt(5.0), rel_tol=rel_tol)
