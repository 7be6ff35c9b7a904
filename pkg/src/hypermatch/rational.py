"""Helpers for exact rationals: parsing, "p/q" rendering, decimal display."""
from __future__ import annotations

from decimal import ROUND_HALF_EVEN, Decimal, localcontext
from fractions import Fraction
from typing import Union

from .errors import FormatError

RationalLike = Union[int, str, Fraction]

DEFAULT_PRECISION = 12


def as_fraction(value: RationalLike) -> Fraction:
    """Coerce ints, Fractions and "p/q" strings; floats are rejected to keep things exact."""
    if isinstance(value, bool):
        raise FormatError(f"not a rational: {value!r}")
    if isinstance(value, (int, Fraction)):
        return Fraction(value)
    if isinstance(value, str):
        try:
            return Fraction(value.strip())
        except (ValueError, ZeroDivisionError) as exc:
            raise FormatError(f"not a rational: {value!r}") from exc
    raise FormatError(f"not an exact rational: {value!r}")


def fmt(q: Fraction | int) -> str:
    """Render as "p/q" (or "p" for integers)."""
    q = Fraction(q)
    if q.denominator == 1:
        return str(q.numerator)
    return f"{q.numerator}/{q.denominator}"


def to_decimal(q: Fraction | int, precision: int = DEFAULT_PRECISION) -> Decimal:
    q = Fraction(q)
    with localcontext() as ctx:
        ctx.prec = precision
        ctx.rounding = ROUND_HALF_EVEN
        return Decimal(q.numerator) / Decimal(q.denominator)


def decimal_str(q: Fraction | int, precision: int = DEFAULT_PRECISION) -> str:
    return str(to_decimal(q, precision))
