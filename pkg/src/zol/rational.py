"""Exact rational plumbing.

Every exact predicate in this package works on `fractions.Fraction`; floats
are confined to Monte Carlo summaries.  This module only adds the lossless
text round-trip used by the CLI and by serialized records.
"""

from __future__ import annotations

from fractions import Fraction

from .errors import DomainError

Rational = Fraction


def parse_rational(text: str) -> Fraction:
    """Parse "a/b" or "a" into an exact Fraction.

    Raises DomainError on malformed input or a zero denominator.
    """
    s = text.strip()
    try:
        if "/" in s:
            num, _, den = s.partition("/")
            return Fraction(int(num), int(den))
        return Fraction(int(s))
    except (ValueError, ZeroDivisionError) as exc:
        raise DomainError(f"not a rational: {text!r} ({exc})") from None


def format_rational(value: Fraction) -> str:
    """Render a Fraction so that parse_rational(format_rational(x)) == x."""
    if value.denominator == 1:
        return str(value.numerator)
    return f"{value.numerator}/{value.denominator}"
