"""Exact-rational parsing and fixed-point rendering.

Scores and weights move through the pipeline as `fractions.Fraction`;
decimal text appears only at the file boundaries.
"""

from __future__ import annotations

from decimal import ROUND_HALF_EVEN, Decimal, InvalidOperation, localcontext
from fractions import Fraction

WEIGHT_DIGITS = 9  # lexicon files
SCORE_DIGITS = 6  # reports


def parse_rational(text) -> Fraction:
    """Parse 'p/q', a decimal string, or an int into an exact Fraction."""
    if isinstance(text, int) and not isinstance(text, bool):
        return Fraction(text)
    if isinstance(text, Decimal):
        return Fraction(text)
    if not isinstance(text, str):
        raise ValueError(f"not a rational: {text!r}")
    s = text.strip()
    if "/" in s:
        num, _, den = s.partition("/")
        return Fraction(int(num.strip()), int(den.strip()))
    try:
        return Fraction(Decimal(s))
    except InvalidOperation as exc:
        raise ValueError(f"not a rational: {text!r}") from exc


def format_decimal(value: Fraction, digits: int) -> str:
    """Render a Fraction as a fixed-point decimal string, half-even."""
    with localcontext() as ctx:
        ctx.prec = 60
        d = Decimal(value.numerator) / Decimal(value.denominator)
        q = d.quantize(Decimal(1).scaleb(-digits), rounding=ROUND_HALF_EVEN)
    return format(q, "f")


def quantize_weight(value: float, digits: int = WEIGHT_DIGITS) -> Fraction:
    """Round a float to an exact decimal Fraction with the given number of
    fractional digits, half-even.  Decimal(float) is exact, so no binary
    noise survives into the result."""
    d = Decimal(value).quantize(Decimal(1).scaleb(-digits), rounding=ROUND_HALF_EVEN)
    return Fraction(d)
