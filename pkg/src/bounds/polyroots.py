"""Real roots of quadratic and cubic polynomials.

Roots are bracketed inside the Cauchy bound, split into monotone pieces at the
critical points, isolated by sign-change bisection and polished with Newton.
Simple roots are assumed; a near-double root is returned as well as bisection
can isolate it.
"""

from dataclasses import dataclass
from typing import Tuple

import numpy as np

from ..errors import InvalidConfigError

DEFAULT_TOLERANCE = 1e-12
DEFAULT_NEWTON_STEPS = 3


@dataclass(frozen=True)
class Polynomial:
    """Real polynomial of degree 1-3, coefficients highest degree first."""

    coefficients: Tuple[float, ...]

    def __post_init__(self):
        coeffs = tuple(float(c) for c in self.coefficients)
        object.__setattr__(self, "coefficients", coeffs)
        if len(coeffs) < 2 or len(coeffs) > 4:
            raise InvalidConfigError(f"only degrees 1 to 3 are supported, got coefficients {coeffs}")
        if coeffs[0] == 0.0:
            raise InvalidConfigError(f"leading coefficient is zero in {coeffs}")

    @property
    def degree(self):
        return len(self.coefficients) - 1

    def __call__(self, x):
        return float(np.polyval(self.coefficients, x))

    def derivative(self):
        return Polynomial(tuple(np.polyder(self.coefficients)))

    def root_bound(self):
        """Cauchy bound: every root has modulus below it."""
        lead = self.coefficients[0]
        return 1.0 + max(abs(c / lead) for c in self.coefficients[1:])

    def residual_bound(self, x, scale=1e-10):
        """Residual allowed at x: scale * (1 + |x|^degree)."""
        return scale * (1.0 + abs(x) ** self.degree)


# Characteristic polynomials of the row-sum and second-moment recurrences
LOWER_CUBIC = Polynomial((1.0, -1.0, -1.0, -4.0))  # S[n] = S[n-1] + S[n-2] + 4 S[n-3]
UPPER_CUBIC = Polynomial((1.0, -1.0, -2.0, -4.0))  # S[n] = S[n-1] + 2 S[n-2] + 4 S[n-3]
SS_QUADRATIC = Polynomial((1.0, -2.0, -4.0))  # SS[n] = 2 SS[n-1] + 4 SS[n-2]


def _bisect(p, lo, hi, tolerance):
    f_lo = p(lo)
    if f_lo == 0.0:
        return lo
    if p(hi) == 0.0:
        return hi
    while hi - lo > tolerance:
        mid = 0.5 * (lo + hi)
        if mid <= lo or mid >= hi:
            break
        f_mid = p(mid)
        if f_mid == 0.0:
            return mid
        if (f_mid < 0.0) == (f_lo < 0.0):
            lo, f_lo = mid, f_mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def _polish(p, dp, x, lo, hi, steps):
    for _ in range(steps):
        slope = dp(x)
        if slope == 0.0:
            break
        candidate = x - p(x) / slope
        # keep Newton inside the bracket it was isolated in
        if not lo <= candidate <= hi or abs(p(candidate)) > abs(p(x)):
            break
        x = candidate
    return x


def real_roots(p, tolerance=DEFAULT_TOLERANCE, newton_steps=DEFAULT_NEWTON_STEPS):
    """
    All real roots of a polynomial of degree 1-3.

    Args:
        p: Polynomial (or a coefficient sequence, highest degree first)
        tolerance: Bisection interval width before Newton polishing
        newton_steps: Newton iterations after bisection (0 keeps the bisection midpoint)

    Returns:
        Sorted list of floats
    """
    if not isinstance(p, Polynomial):
        p = Polynomial(tuple(p))
    if tolerance <= 0:
        raise InvalidConfigError(f"tolerance must be positive, got {tolerance}")
    if not isinstance(newton_steps, int) or newton_steps < 0:
        raise InvalidConfigError(f"newton_steps must be a nonnegative integer, got {newton_steps!r}")

    if p.degree == 1:
        a, b = p.coefficients
        return [-b / a]

    bound = p.root_bound()
    dp = p.derivative()
    cuts = [x for x in real_roots(dp, tolerance, newton_steps) if -bound < x < bound]
    edges = [-bound] + cuts + [bound]

    roots = []
    for lo, hi in zip(edges[:-1], edges[1:]):
        f_lo, f_hi = p(lo), p(hi)
        if f_lo == 0.0:
            root = lo
        elif (f_lo < 0.0) == (f_hi < 0.0) and f_hi != 0.0:
            continue
        else:
            root = _polish(p, dp, _bisect(p, lo, hi, tolerance), lo, hi, newton_steps)
        if not roots or abs(root - roots[-1]) > tolerance:
            roots.append(root)
    return sorted(roots)


def dominant_root(p, tolerance=DEFAULT_TOLERANCE, newton_steps=DEFAULT_NEWTON_STEPS):
    """
    Largest real root of p.

    Raises:
        InvalidConfigError: if p has no real root
    """
    roots = real_roots(p, tolerance, newton_steps)
    if not roots:
        raise InvalidConfigError(f"polynomial {p} has no real root")
    return roots[-1]
