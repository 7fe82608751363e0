"""Finite unions of half-open intervals on the rational line.

A ``None`` endpoint stands for -inf (``lo``) or +inf (``hi``); an infinite end
is always open.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Iterator, Optional

from .rational import Q, fmt


@dataclass(frozen=True, order=True)
class Interval:
    lo: Optional[Fraction]
    lo_closed: bool
    hi: Optional[Fraction]
    hi_closed: bool

    def __post_init__(self):
        if self.lo is None and self.lo_closed:
            object.__setattr__(self, "lo_closed", False)
        if self.hi is None and self.hi_closed:
            object.__setattr__(self, "hi_closed", False)

    @classmethod
    def closed(cls, lo, hi) -> "Interval":
        return cls(Q(lo), True, Q(hi), True)

    @classmethod
    def point(cls, x) -> "Interval":
        x = Q(x)
        return cls(x, True, x, True)

    @property
    def empty(self) -> bool:
        if self.lo is None or self.hi is None:
            return False
        if self.lo < self.hi:
            return False
        if self.lo == self.hi:
            return not (self.lo_closed and self.hi_closed)
        return True

    def __contains__(self, x) -> bool:
        if self.lo is not None:
            if x < self.lo or (x == self.lo and not self.lo_closed):
                return False
        if self.hi is not None:
            if x > self.hi or (x == self.hi and not self.hi_closed):
                return False
        return True

    def intersect(self, other: "Interval") -> "Interval":
        lo, lo_c = _max_lo((self.lo, self.lo_closed), (other.lo, other.lo_closed))
        hi, hi_c = _min_hi((self.hi, self.hi_closed), (other.hi, other.hi_closed))
        return Interval(lo, lo_c, hi, hi_c)

    def sample(self) -> Fraction:
        """A deterministic interior (or the only) point."""
        if self.lo is None and self.hi is None:
            return Fraction(0)
        if self.lo is None:
            return self.hi - 1
        if self.hi is None:
            return self.lo + 1
        if self.lo == self.hi:
            return self.lo
        return (self.lo + self.hi) / 2

    def __str__(self) -> str:
        left = "[" if self.lo_closed else "("
        right = "]" if self.hi_closed else ")"
        lo = "-inf" if self.lo is None else fmt(self.lo)
        hi = "inf" if self.hi is None else fmt(self.hi)
        return f"{left}{lo}, {hi}{right}"


def _max_lo(a, b):
    if a[0] is None:
        return b
    if b[0] is None:
        return a
    if a[0] != b[0]:
        return a if a[0] > b[0] else b
    return (a[0], a[1] and b[1])


def _min_hi(a, b):
    if a[0] is None:
        return b
    if b[0] is None:
        return a
    if a[0] != b[0]:
        return a if a[0] < b[0] else b
    return (a[0], a[1] and b[1])


def _lo_key(iv: Interval):
    # sorts -inf first; a closed lo precedes an open lo at the same value
    if iv.lo is None:
        return (0, Fraction(0), 0)
    return (1, iv.lo, 0 if iv.lo_closed else 1)


def _touches(a: Interval, b: Interval) -> bool:
    """True when a (sorted before b) overlaps or abuts b without a gap."""
    if a.hi is None or b.lo is None:
        return True
    if a.hi > b.lo:
        return True
    if a.hi == b.lo:
        return a.hi_closed or b.lo_closed
    return False


def _later_hi(a: Interval, b: Interval):
    if a.hi is None or b.hi is None:
        return (None, False)
    if a.hi != b.hi:
        return (a.hi, a.hi_closed) if a.hi > b.hi else (b.hi, b.hi_closed)
    return (a.hi, a.hi_closed or b.hi_closed)


class Region:
    """Sorted, pairwise disjoint, non-adjacent union of intervals."""

    __slots__ = ("intervals",)

    def __init__(self, intervals: Iterable[Interval] = ()):
        items = sorted((iv for iv in intervals if not iv.empty), key=_lo_key)
        merged: list[Interval] = []
        for iv in items:
            if merged and _touches(merged[-1], iv):
                last = merged[-1]
                hi, hi_c = _later_hi(last, iv)
                merged[-1] = Interval(last.lo, last.lo_closed, hi, hi_c)
            else:
                merged.append(iv)
        self.intervals: tuple[Interval, ...] = tuple(merged)

    @classmethod
    def empty_region(cls) -> "Region":
        return cls(())

    @classmethod
    def real_line(cls) -> "Region":
        return cls((Interval(None, False, None, False),))

    @classmethod
    def closed(cls, lo, hi) -> "Region":
        return cls((Interval.closed(lo, hi),))

    @classmethod
    def parse(cls, items: Iterable[str]) -> "Region":
        return cls(parse_interval(s) for s in items)

    def __iter__(self) -> Iterator[Interval]:
        return iter(self.intervals)

    def __len__(self) -> int:
        return len(self.intervals)

    def __bool__(self) -> bool:
        return bool(self.intervals)

    def __eq__(self, other) -> bool:
        return isinstance(other, Region) and self.intervals == other.intervals

    def __hash__(self) -> int:
        return hash(self.intervals)

    def __repr__(self) -> str:
        return f"Region({str(self)!r})"

    def __str__(self) -> str:
        if not self.intervals:
            return "{}"
        return " U ".join(str(iv) for iv in self.intervals)

    def __contains__(self, x) -> bool:
        return any(x in iv for iv in self.intervals)

    @property
    def bounded(self) -> bool:
        return all(iv.lo is not None and iv.hi is not None for iv in self.intervals)

    def union(self, other: "Region") -> "Region":
        return Region(self.intervals + other.intervals)

    def intersect(self, other: "Region") -> "Region":
        out = []
        for a in self.intervals:
            for b in other.intervals:
                c = a.intersect(b)
                if not c.empty:
                    out.append(c)
        return Region(out)

    def complement(self) -> "Region":
        out = []
        prev_hi: Optional[Fraction] = None
        prev_closed = False
        first = True
        for iv in self.intervals:
            if first:
                if iv.lo is not None:
                    out.append(Interval(None, False, iv.lo, not iv.lo_closed))
                first = False
            else:
                out.append(Interval(prev_hi, not prev_closed, iv.lo, not iv.lo_closed))
            prev_hi, prev_closed = iv.hi, iv.hi_closed
        if first:
            return Region.real_line()
        if prev_hi is not None:
            out.append(Interval(prev_hi, not prev_closed, None, False))
        return Region(out)

    def minus(self, other: "Region") -> "Region":
        return self.intersect(other.complement())

    def endpoints(self) -> list[Fraction]:
        pts = set()
        for iv in self.intervals:
            if iv.lo is not None:
                pts.add(iv.lo)
            if iv.hi is not None:
                pts.add(iv.hi)
        return sorted(pts)

    def component(self, x) -> Optional[Interval]:
        for iv in self.intervals:
            if x in iv:
                return iv
        return None

    def first_point(self) -> Optional[Fraction]:
        """Smallest member if attained, else a deterministic interior point."""
        if not self.intervals:
            return None
        iv = self.intervals[0]
        if iv.lo is not None and iv.lo_closed:
            return iv.lo
        return iv.sample()

    def width(self) -> Optional[Fraction]:
        if not self.bounded:
            return None
        return sum((iv.hi - iv.lo for iv in self.intervals), Fraction(0))


def member(region: Region, point) -> bool:
    """Exact half-open-aware membership."""
    return Q(point) in region


_INTERVAL_RE = re.compile(r"^\s*([\[\(])\s*([^,]+?)\s*,\s*([^,]+?)\s*([\]\)])\s*$")


def _bound(text: str) -> Optional[Fraction]:
    t = text.strip().replace("−", "-")
    if t in ("-inf", "inf", "+inf", "-oo", "oo", "+oo"):
        return None
    return Q(t)


def parse_interval(text: str) -> Interval:
    """Parse ``"[-4, -1)"``-style interval literals; ``inf`` is allowed."""
    m = _INTERVAL_RE.match(text)
    if not m:
        raise ValueError(f"malformed interval literal: {text!r}")
    left, lo_s, hi_s, right = m.groups()
    lo, hi = _bound(lo_s), _bound(hi_s)
    if lo is None and lo_s.strip().lstrip("+") in ("inf", "oo"):
        raise ValueError(f"lower bound cannot be +inf: {text!r}")
    if hi is None and hi_s.strip().startswith("-"):
        raise ValueError(f"upper bound cannot be -inf: {text!r}")
    iv = Interval(lo, left == "[", hi, right == "]")
    if lo is not None and hi is not None and lo > hi:
        raise ValueError(f"interval has lo > hi: {text!r}")
    return iv
