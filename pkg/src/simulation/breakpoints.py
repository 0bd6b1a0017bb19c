"""Kinks of the fixed-level row sum S[level](beta).

Every node value is a polynomial in beta with rational coefficients, as long
as the sign of each difference child prev - beta * curr stays fixed. The
positive beta axis is therefore cut wherever one of those differences changes
sign; between cuts S[level](beta) is a single polynomial of degree <= level.
This module tracks the node polynomials symbolically, level by level and
interval by interval, and records the cuts.
"""

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Tuple

import numpy as np

from ..enumeration.scalar import SeedPair, as_exact
from ..errors import InvalidConfigError, ResourceGuardError

DEFAULT_LEVEL_CAP = 12
RATIONAL_DENOMINATOR = 10**6
BRACKET_WIDTH = Fraction(1, 2**64)
CUT_TOLERANCE = 1e-12  # relative; closer cuts are one cut

# Polynomials in beta: tuples of Fractions, constant term first, no trailing zeros.
Poly = Tuple[Fraction, ...]


def _trim(coeffs):
    coeffs = list(coeffs)
    while coeffs and coeffs[-1] == 0:
        coeffs.pop()
    return tuple(coeffs)


def _add(p, q):
    n = max(len(p), len(q))
    return _trim((p[i] if i < len(p) else 0) + (q[i] if i < len(q) else 0) for i in range(n))


def _scale(p, k):
    return _trim(k * c for c in p)


def _times_beta(p):
    return (Fraction(0),) + p if p else ()


def evaluate(p, x):
    """Exact value of a polynomial at x (Horner)."""
    acc = Fraction(0)
    for c in reversed(p):
        acc = acc * x + c
    return acc


def _sign(value):
    return (value > 0) - (value < 0)


def _same_cut(x, y):
    x, y = float(x), float(y)
    return abs(x - y) <= CUT_TOLERANCE * (1 + abs(x))


@dataclass(frozen=True)
class Breakpoint:
    """
    A beta where some node's difference child changes sign.

    Attributes:
        beta_star: Float value of the cut
        level: Level of the node (prev, curr); the kink first shows in row level + 1
        origin_prev, origin_curr: The node's polynomials in beta
        exact: True when beta_star_exact is the root itself, False when it is
            the midpoint of a bracket narrower than 2^-64 around an irrational root
        beta_star_exact: Rational cut used to split the beta axis
    """

    beta_star: float
    level: int
    origin_prev: Poly
    origin_curr: Poly
    exact: bool
    beta_star_exact: Fraction

    def residual(self):
        """prev(beta*) - beta* curr(beta*), zero up to the bracket width."""
        x = self.beta_star_exact
        return float(evaluate(self.origin_prev, x) - x * evaluate(self.origin_curr, x))


@dataclass(frozen=True)
class RowSumPiece:
    """S[level](beta) on (lo, hi); hi None means unbounded."""

    lo: Fraction
    hi: Optional[Fraction]
    S: Poly

    def __call__(self, beta):
        return evaluate(self.S, as_exact(beta))

    @property
    def degree(self):
        return len(self.S) - 1

    def contains(self, beta):
        beta = as_exact(beta)
        return self.lo < beta and (self.hi is None or beta < self.hi)


def _locate(f, r, lo, hi):
    """Confirm a float root candidate r of f as an exact or bracketed sign change in (lo, hi)."""
    q = Fraction(r).limit_denominator(RATIONAL_DENOMINATOR)
    if evaluate(f, q) == 0:
        if not (lo < q and (hi is None or q < hi)):
            return None
        step = Fraction(1, 10**9)
        left = q - step if q - step > lo else (lo + q) / 2
        right = q + step if hi is None or q + step < hi else (q + hi) / 2
        s_left, s_right = _sign(evaluate(f, left)), _sign(evaluate(f, right))
        if s_left and s_right and s_left != s_right:
            return q, True
        return None

    width = Fraction(1e-7) * (1 + abs(Fraction(r)))
    a = max(Fraction(r) - width, lo)
    b = Fraction(r) + width if hi is None else min(Fraction(r) + width, hi)
    s_a, s_b = _sign(evaluate(f, a)), _sign(evaluate(f, b))
    if not s_a or not s_b or s_a == s_b:
        return None
    while b - a > BRACKET_WIDTH:
        m = (a + b) / 2
        s_m = _sign(evaluate(f, m))
        if s_m == 0:
            return m, True
        if s_m == s_a:
            a = m
        else:
            b = m
    return (a + b) / 2, False


def _sign_changes(f, lo, hi):
    """Points in (lo, hi) where f changes sign, left to right."""
    if len(f) <= 1:
        return []
    candidates = np.polynomial.Polynomial([float(c) for c in f]).roots()
    lo_f = float(lo)
    hi_f = None if hi is None else float(hi)
    found = []
    for r in sorted({float(z.real) for z in candidates if abs(z.imag) <= 1e-7 * (1 + abs(z.real))}):
        # roots sitting on an existing cut belong to that cut
        if r <= lo_f or _same_cut(lo_f, r):
            continue
        if hi_f is not None and (r >= hi_f or _same_cut(hi_f, r)):
            continue
        located = _locate(f, r, lo, hi)
        if located is not None and (not found or located[0] > found[-1][0]):
            found.append(located)
    return found


def _merge_cuts(found):
    """
    One Breakpoint per distinct cut, sorted.

    Nodes sharing an irrational root each bracket it on their own, so their
    midpoints differ in the last bits; such a group keeps a single cut, the
    exact one when there is one.
    """
    groups = []
    for bp in sorted(found, key=lambda bp: bp.beta_star_exact):
        if groups and _same_cut(groups[-1][0].beta_star_exact, bp.beta_star_exact):
            groups[-1].append(bp)
        else:
            groups.append([bp])
    return [next((bp for bp in group if bp.exact), group[0]) for group in groups]


def _descend(states, lo, hi, depth, level, breakpoints, pieces):
    if depth == level:
        S = ()
        for (_, curr), count in states.items():
            S = _add(S, _scale(curr, count))
        pieces.append(RowSumPiece(lo, hi, S))
        return

    diffs = {}
    found = []
    for prev, curr in states:
        f = _add(prev, _scale(_times_beta(curr), -1))
        diffs[(prev, curr)] = f
        for cut, exact in _sign_changes(f, lo, hi):
            found.append(Breakpoint(float(cut), depth, prev, curr, exact, cut))

    cuts = _merge_cuts(found)
    breakpoints.extend(cuts)
    bounds = [lo] + [bp.beta_star_exact for bp in cuts] + [hi]
    for a, b in zip(bounds[:-1], bounds[1:]):
        inside = a + 1 if b is None else (a + b) / 2
        children = {}
        for (prev, curr), count in states.items():
            f = diffs[(prev, curr)]
            diff = f if evaluate(f, inside) >= 0 else _scale(f, -1)
            for key in ((curr, diff), (curr, _add(prev, _times_beta(curr)))):
                children[key] = children.get(key, 0) + count
        _descend(children, a, b, depth + 1, level, breakpoints, pieces)


def _analyse(seed, level, beta_max, level_cap):
    if not isinstance(level, int) or level < 0:
        raise InvalidConfigError(f"level must be a nonnegative integer, got {level!r}")
    if level > level_cap:
        raise ResourceGuardError(
            f"symbolic tracking at level {level} is above the cap of {level_cap}"
        )
    seed = seed if isinstance(seed, SeedPair) else SeedPair(*seed)
    x0, x1 = Fraction(as_exact(seed.x0)), Fraction(as_exact(seed.x1))
    hi = None if beta_max is None else Fraction(as_exact(beta_max))
    if hi is not None and hi <= 0:
        raise InvalidConfigError(f"beta_max must be positive, got {beta_max}")

    states = {(_trim((x0,)), _trim((x1,))): 1}
    breakpoints, pieces = [], []
    _descend(states, Fraction(0), hi, 0, level, breakpoints, pieces)
    return breakpoints, pieces


def breakpoints(seed, level, beta_max=None, level_cap=DEFAULT_LEVEL_CAP):
    """
    Betas in (0, beta_max) where S[level](beta) may have a kink.

    Args:
        seed: SeedPair held by row 0
        level: Row index; nodes of levels 0..level-1 are examined
        beta_max: Upper end of the beta range (None for unbounded)
        level_cap: Refuse levels above this

    Returns:
        Sorted list of Breakpoint, one per distinct beta (the shallowest origin kept)
    """
    found, _ = _analyse(seed, level, beta_max, level_cap)
    found.sort(key=lambda bp: (bp.beta_star_exact, bp.level))
    merged = []
    for bp in found:
        if merged and _same_cut(merged[-1].beta_star, bp.beta_star):
            continue
        merged.append(bp)
    return merged


def row_sum_pieces(seed, level, beta_max=None, level_cap=DEFAULT_LEVEL_CAP):
    """S[level](beta) as exact polynomials on the intervals between consecutive cuts."""
    _, pieces = _analyse(seed, level, beta_max, level_cap)
    return pieces


def slope_bound(pieces, beta_max):
    """Upper bound on |dS/dbeta| over (0, beta_max], summed term by term over every piece."""
    beta_max = Fraction(as_exact(beta_max))
    bound = Fraction(0)
    for piece in pieces:
        if piece.lo >= beta_max:
            continue
        slope = sum(abs(c) * i * beta_max ** (i - 1) for i, c in enumerate(piece.S) if i > 0)
        bound = max(bound, slope)
    return bound
