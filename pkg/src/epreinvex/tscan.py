"""Helpers for reasoning about subsets of the curve parameter range [0, 1]."""

from __future__ import annotations

from fractions import Fraction
from typing import Optional

from .rational import dyadic
from .region import Interval, Region

UNIT = Region.closed(0, 1)

# right-neighbourhood schedule shared with the numeric semiderivative
LOCAL_SCHEDULE = tuple(dyadic(4 + k) for k in range(49))
HEAD_SCHEDULE = tuple(dyadic(k) for k in (1, 2, 3))


def dyadic_samples(count: int) -> list[Fraction]:
    """0 followed by 2^-1 .. 2^-count, ascending."""
    return [Fraction(0)] + sorted(dyadic(k) for k in range(1, count + 1))


def global_samples(count: int) -> list[Fraction]:
    pts = {Fraction(k, count) for k in range(count + 1)}
    pts.update(dyadic(k) for k in range(1, count + 1))
    return sorted(pts)


def zero_component(valid: Region) -> Optional[Interval]:
    """Component of ``valid`` containing 0, provided it has positive length."""
    comp = valid.component(Fraction(0))
    if comp is None or (comp.hi is not None and comp.hi <= 0):
        return None
    return comp


def reach(valid: Region) -> Optional[tuple[Fraction, bool]]:
    """(sup, attained) of the right-neighbourhood of 0 inside ``valid``."""
    comp = zero_component(valid)
    if comp is None:
        return None
    hi = comp.hi if comp.hi is not None else Fraction(1)
    return min(hi, Fraction(1)), comp.hi_closed or (comp.hi is not None and comp.hi > 1)


def pick_t(bad: Region, local: bool) -> Fraction:
    """Deterministic representative of a non-empty violation set."""
    if local:
        order = (Fraction(0),) + LOCAL_SCHEDULE + HEAD_SCHEDULE + (Fraction(1),)
    else:
        order = (Fraction(1),) + tuple(dyadic(k) for k in range(1, 21)) + (Fraction(0),)
    for t in order:
        if t in bad:
            return t
    return bad.first_point()
