import math

import numpy as np
import pytest
from hypothesis import assume, given, settings
from hypothesis import strategies as st

from src.bounds.polyroots import (
    LOWER_CUBIC,
    SS_QUADRATIC,
    UPPER_CUBIC,
    Polynomial,
    dominant_root,
    real_roots,
)
from src.errors import InvalidConfigError


def test_three_distinct_roots():
    roots = real_roots(Polynomial((1, -6, 11, -6)))
    assert roots == pytest.approx([1.0, 2.0, 3.0], abs=1e-10)


def test_single_real_root_of_cubic():
    # x^3 + x + 1 has one real root near -0.6823
    roots = real_roots(Polynomial((1, 0, 1, 1)))
    assert len(roots) == 1
    assert roots[0] == pytest.approx(-0.6823278038280193, abs=1e-10)


def test_quadratic_without_real_roots():
    assert real_roots(Polynomial((1, 0, 1))) == []
    with pytest.raises(InvalidConfigError):
        dominant_root(Polynomial((1, 0, 1)))


def test_linear():
    assert real_roots(Polynomial((2, -1))) == [0.5]


def test_characteristic_roots():
    assert dominant_root(LOWER_CUBIC) == pytest.approx(2.24190, abs=1e-5)
    assert dominant_root(UPPER_CUBIC) == pytest.approx(2.46750, abs=1e-5)
    assert dominant_root(SS_QUADRATIC) == pytest.approx(1 + math.sqrt(5), rel=1e-12)


@pytest.mark.parametrize("p", [LOWER_CUBIC, UPPER_CUBIC, SS_QUADRATIC])
def test_residuals(p):
    for r in real_roots(p):
        assert abs(p(r)) <= p.residual_bound(r)


@pytest.mark.parametrize("coeffs", [(0, 1, 2), (1,), (1, 2, 3, 4, 5)])
def test_rejected_polynomials(coeffs):
    with pytest.raises(InvalidConfigError):
        Polynomial(coeffs)


def test_nonpositive_tolerance():
    with pytest.raises(InvalidConfigError):
        real_roots(LOWER_CUBIC, tolerance=0)


roots = st.floats(min_value=-20, max_value=20, allow_nan=False, allow_infinity=False)


@settings(max_examples=60, deadline=None)
@given(r1=roots, r2=roots, r3=roots)
def test_recovers_well_separated_roots(r1, r2, r3):
    expected = sorted((r1, r2, r3))
    assume(min(b - a for a, b in zip(expected, expected[1:])) >= 0.5)
    coeffs = (1, -(r1 + r2 + r3), r1 * r2 + r1 * r3 + r2 * r3, -r1 * r2 * r3)
    found = real_roots(Polynomial(coeffs))
    assert found == pytest.approx(expected, abs=1e-6)


def close(found, expected):
    return abs(found - expected) <= 1e-9 * (1 + abs(expected))


def test_random_cubics_with_three_real_roots():
    rng = np.random.Generator(np.random.Philox(0))
    checked = 0
    while checked < 500:
        expected = np.sort(rng.uniform(-20, 20, size=3))
        if np.min(np.diff(expected)) < 0.1:
            continue
        found = real_roots(Polynomial(tuple(np.poly(expected))))
        assert len(found) == 3
        assert all(close(f, e) for f, e in zip(found, expected)), (expected, found)
        checked += 1


def test_random_cubics_with_one_real_root():
    # (x - r)(x^2 + bx + c) with b^2 < 4c
    rng = np.random.Generator(np.random.Philox(1))
    for _ in range(500):
        r = rng.uniform(-20, 20)
        b = rng.uniform(-10, 10)
        c = b * b / 4 + rng.uniform(0.1, 20)
        coeffs = np.polymul((1.0, -r), (1.0, b, c))
        found = real_roots(Polynomial(tuple(coeffs)))
        assert len(found) == 1
        assert close(found[0], r), (r, b, c, found)


def test_newton_steps_validated():
    with pytest.raises(InvalidConfigError):
        real_roots(LOWER_CUBIC, newton_steps=-1)
    assert real_roots(SS_QUADRATIC, newton_steps=0) == pytest.approx([1 - math.sqrt(5), 1 + math.sqrt(5)], abs=1e-11)
