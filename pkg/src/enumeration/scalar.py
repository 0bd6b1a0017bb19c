"""Scalar values for exact and float enumeration."""

from dataclasses import dataclass
from decimal import Decimal, InvalidOperation
from enum import Enum
from fractions import Fraction
from typing import Union

from ..errors import InvalidConfigError

# Exact values are ints while denominators stay 1, Fractions otherwise.
Scalar = Union[int, Fraction, float]


class Mode(str, Enum):
    """Arithmetic regime of an enumeration."""

    EXACT = "exact"
    FLOAT = "float"


def parse_scalar(text, mode=Mode.EXACT):
    """
    Parse a command-line number.

    Args:
        text: "p/q", a decimal such as "0.707", or an int/float/Fraction
        mode: Mode.EXACT parses decimals exactly, Mode.FLOAT returns a float

    Returns:
        int or Fraction in exact mode, float in float mode
    """
    mode = Mode(mode)
    if isinstance(text, float):
        if mode is Mode.FLOAT:
            return text
        raise InvalidConfigError(
            f"exact mode needs a rational value, got float {text!r}; pass it as 'p/q' or a decimal string"
        )
    if isinstance(text, (int, Fraction)):
        value = Fraction(text)
    else:
        text = str(text).strip()
        try:
            if "/" in text:
                num, den = text.split("/", 1)
                value = Fraction(int(num), int(den))
            else:
                value = Fraction(Decimal(text))
        except (ValueError, ZeroDivisionError, InvalidOperation):
            raise InvalidConfigError(f"cannot parse {text!r} as a number") from None

    if mode is Mode.FLOAT:
        return float(value)
    return normalize(value)


def normalize(value):
    """Collapse integral Fractions to int so integer runs stay in int arithmetic."""
    if isinstance(value, Fraction) and value.denominator == 1:
        return value.numerator
    return value


def as_exact(value):
    """Exact form of a Scalar; floats convert to their binary rational value."""
    return normalize(Fraction(value))


def format_scalar(value):
    """Render a Scalar for CSV/JSON: 'p/q' for Fractions, repr for floats."""
    if isinstance(value, Fraction):
        if value.denominator == 1:
            return str(value.numerator)
        return f"{value.numerator}/{value.denominator}"
    if isinstance(value, float):
        return repr(value)
    return str(value)


@dataclass(frozen=True)
class SeedPair:
    """The pair (x0, x1) held by row 0 of the sign tree."""

    x0: Scalar = 1
    x1: Scalar = 1

    def __post_init__(self):
        if self.x0 < 0 or self.x1 < 0:
            raise InvalidConfigError(f"seed values must be nonnegative, got ({self.x0}, {self.x1})")
        if self.x0 == 0 and self.x1 == 0:
            raise InvalidConfigError("seed (0, 0) generates the all-zero tree")

    def in_mode(self, mode):
        """Return the seed converted to the arithmetic of the given mode."""
        if Mode(mode) is Mode.FLOAT:
            return SeedPair(float(self.x0), float(self.x1))
        return SeedPair(as_exact(self.x0), as_exact(self.x1))

    @classmethod
    def parse(cls, text, mode=Mode.EXACT):
        """Parse 'x0,x1' (each part as in parse_scalar)."""
        parts = [p for p in str(text).split(",")]
        if len(parts) != 2:
            raise InvalidConfigError(f"seed must be 'x0,x1', got {text!r}")
        return cls(parse_scalar(parts[0], mode), parse_scalar(parts[1], mode))
