"""Reading and writing exact rationals as ``p/q`` text."""

from __future__ import annotations

import decimal
import re
from fractions import Fraction

from .errors import InvalidRational

_RATIONAL_RE = re.compile(r"\s*([+-]?\d+)\s*(?:/\s*(\d+)\s*)?")

DECIMAL_DIGITS = 20


def parse_rational(text: str) -> Fraction:
    """Parse ``"p/q"`` or ``"p"``. Decimal and float notations are rejected."""
    match = _RATIONAL_RE.fullmatch(text)
    if match is None:
        raise InvalidRational(f"not a rational: {text!r}")
    num, den = match.group(1), match.group(2)
    if den is not None and int(den) == 0:
        raise InvalidRational(f"zero denominator in {text!r}")
    return Fraction(int(num), int(den) if den is not None else 1)


def format_rational(value: Fraction | int) -> str:
    """Lowest terms, ``p/q``, or just ``p`` when the denominator is 1."""
    value = Fraction(value)
    if value.denominator == 1:
        return str(value.numerator)
    return f"{value.numerator}/{value.denominator}"


def format_decimal(value: Fraction | int, digits: int = DECIMAL_DIGITS) -> str:
    """Decimal rendering with ``digits`` significant digits, ties to even.

    Display only; nothing in the package computes with the result.
    """
    value = Fraction(value)
    ctx = decimal.Context(prec=digits, rounding=decimal.ROUND_HALF_EVEN)
    result = ctx.divide(decimal.Decimal(value.numerator), decimal.Decimal(value.denominator))
    return format(result, "f")
