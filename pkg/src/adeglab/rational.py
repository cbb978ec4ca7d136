"""Helpers for exact rationals in user-facing text formats.

Rationals cross module boundaries as strings of the form "p/q" or "p"
(never floats), so that strict-inequality decisions stay exact end to end.
"""

from __future__ import annotations

import re
from fractions import Fraction

from .errors import UsageError

_RATIONAL_RE = re.compile(r"^\s*(-?\d+)\s*(?:/\s*(\d+)\s*)?$")


def parse_rational(text: str) -> Fraction:
    """Parse "p/q" or "p" into a Fraction; floats are rejected on purpose."""
    m = _RATIONAL_RE.match(text)
    if not m:
        raise UsageError(
            f"expected a rational like '1/3' or '2', got {text!r} "
            "(floating point input is not accepted)"
        )
    num = int(m.group(1))
    den = int(m.group(2)) if m.group(2) else 1
    if den == 0:
        raise UsageError(f"zero denominator in {text!r}")
    return Fraction(num, den)


def format_rational(value: Fraction) -> str:
    value = Fraction(value)
    if value.denominator == 1:
        return str(value.numerator)
    return f"{value.numerator}/{value.denominator}"
