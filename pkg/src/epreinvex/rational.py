"""Exact rational parsing and rendering."""

from __future__ import annotations

from fractions import Fraction
from typing import Union

RationalLike = Union[Fraction, int, str]


def Q(value: RationalLike) -> Fraction:
    """Coerce an int, Fraction or ``"p/q"`` literal to a Fraction.

    Floats are rejected on purpose: every value that enters the exact core
    must already be rational.
    """
    if isinstance(value, bool):
        raise TypeError("booleans are not rationals")
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        text = value.strip().replace("−", "-")
        try:
            return Fraction(text)
        except (ValueError, ZeroDivisionError) as exc:
            raise ValueError(f"not an exact rational literal: {value!r}") from exc
    raise TypeError(f"cannot treat {type(value).__name__} as an exact rational")


def fmt(value) -> str:
    """Render a rational as ``p/q`` (or ``p`` when integral)."""
    if value is None:
        return "none"
    if isinstance(value, float):
        return repr(value)
    value = Fraction(value)
    if value.denominator == 1:
        return str(value.numerator)
    return f"{value.numerator}/{value.denominator}"


def dyadic(k: int) -> Fraction:
    return Fraction(1, 2**k)
