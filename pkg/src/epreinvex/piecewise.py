"""Piecewise polynomial maps with first-match guards, and their restrictions
to one-parameter curves.

A guard is in disjunctive normal form: a tuple of conjunctions, each a tuple
of :class:`Atom` comparisons ``poly op 0``.  The empty conjunction is true.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Optional, Sequence

from .poly import (
    Poly,
    UPoly,
    holds,
    real_roots,
    solve_sign,
    uadd,
    ucompose,
    ueval,
    ufmt,
    uscale,
    usub,
)
from .rational import fmt
from .region import Interval, Region


class NoPieceMatches(ValueError):
    """No guard of a piecewise map accepts the given arguments."""

    def __init__(self, label: str, args):
        self.label = label
        self.args_ = tuple(args)
        super().__init__(f"{label}: no piece matches {tuple(fmt(a) for a in self.args_)}")


@dataclass(frozen=True)
class Atom:
    poly: Poly
    op: str

    def __call__(self, args) -> bool:
        return holds(self.poly(*args), self.op)

    def render(self, names: Sequence[str]) -> str:
        return f"{self.poly.render(names)} {self.op} 0"


@dataclass(frozen=True)
class Guard:
    clauses: tuple  # tuple[tuple[Atom, ...], ...]

    @classmethod
    def always(cls) -> "Guard":
        return cls(((),))

    def __call__(self, args) -> bool:
        return any(all(a(args) for a in clause) for clause in self.clauses)

    def solve(self, subs: Sequence[UPoly], domain: Interval) -> Region:
        """Parameter set on which the guard holds after substituting curves."""
        out = Region.empty_region()
        for clause in self.clauses:
            acc = Region((domain,))
            for atom in clause:
                if not acc:
                    break
                piece = Region.empty_region()
                p = atom.poly.substitute(subs)
                for iv in acc:
                    piece = piece.union(solve_sign(p, atom.op, iv))
                acc = piece
            out = out.union(acc)
        return out

    def atoms(self) -> Iterable[Atom]:
        for clause in self.clauses:
            yield from clause

    def render(self, names: Sequence[str]) -> str:
        if self.clauses == ((),):
            return "true"
        parts = []
        for clause in self.clauses:
            if not clause:
                parts.append("true")
            else:
                parts.append(" and ".join(a.render(names) for a in clause))
        return " or ".join(parts)


@dataclass(frozen=True)
class Piece:
    guard: Guard
    body: Poly


@dataclass(frozen=True)
class PiecewiseMap:
    """First-match piecewise polynomial map of fixed arity."""

    names: tuple  # variable names, len == arity
    pieces: tuple  # tuple[Piece, ...]
    label: str = field(default="map", compare=False)

    @property
    def arity(self) -> int:
        return len(self.names)

    @classmethod
    def polynomial(cls, names: Sequence[str], body: Poly, label: str = "map") -> "PiecewiseMap":
        return cls(tuple(names), (Piece(Guard.always(), body),), label)

    def __call__(self, *args) -> Fraction:
        args = tuple(Fraction(a) for a in args)
        if len(args) != self.arity:
            raise TypeError(f"{self.label} takes {self.arity} arguments, got {len(args)}")
        for piece in self.pieces:
            if piece.guard(args):
                return piece.body(*args)
        raise NoPieceMatches(self.label, args)

    def piece_index(self, *args) -> Optional[int]:
        args = tuple(Fraction(a) for a in args)
        for k, piece in enumerate(self.pieces):
            if piece.guard(args):
                return k
        return None

    def along(self, subs: Sequence[UPoly], domain: Region) -> "PPoly":
        """Restrict to the curve ``s -> (subs[0](s), ...)`` for s in ``domain``."""
        remaining = domain
        segs: list[tuple[Interval, UPoly]] = []
        for piece in self.pieces:
            if not remaining:
                break
            hit = Region.empty_region()
            for iv in remaining:
                hit = hit.union(piece.guard.solve(subs, iv))
            if not hit:
                continue
            body = piece.body.substitute(subs)
            segs.extend((iv, body) for iv in hit)
            remaining = remaining.minus(hit)
        if remaining:
            s = remaining.first_point()
            raise NoPieceMatches(self.label, [ueval(q, s) for q in subs])
        return PPoly(segs)

    def breakpoints(self, index: int = 0) -> list[Fraction]:
        """Rational roots of every guard atom that depends on one variable only."""
        pts: set[Fraction] = set()
        for piece in self.pieces:
            for atom in piece.guard.atoms():
                u = atom.poly.univariate_in(index)
                if u is None or len(u) < 2:
                    continue
                try:
                    pts.update(real_roots(u))
                except Exception:
                    continue
        return sorted(pts)

    def render_pieces(self) -> list[tuple[str, str]]:
        return [(p.guard.render(self.names), p.body.render(self.names)) for p in self.pieces]


class PPoly:
    """Univariate piecewise polynomial on disjoint intervals (sorted)."""

    __slots__ = ("segments", "_within", "lifted", "verdicts")

    def __init__(self, segments: Iterable[tuple[Interval, UPoly]]):
        self._within: dict = {}
        self.lifted: dict = {}  # function -> composite along this curve
        self.verdicts: dict = {}  # per-pair class decisions keyed by their inputs
        self.segments: tuple = tuple(
            sorted(((iv, p) for iv, p in segments if not iv.empty), key=lambda s: _start(s[0]))
        )

    def domain(self) -> Region:
        return Region(iv for iv, _ in self.segments)

    def segment_at(self, t) -> tuple[Interval, UPoly]:
        for iv, p in self.segments:
            if t in iv:
                return iv, p
        raise KeyError(f"parameter {fmt(t)} outside domain")

    def __call__(self, t) -> Fraction:
        return ueval(self.segment_at(t)[1], t)

    def right_germ(self, t0) -> tuple[Interval, UPoly]:
        """Segment covering (t0, t0 + eps)."""
        for iv, p in self.segments:
            if (iv.lo is None or iv.lo <= t0) and (iv.hi is None or iv.hi > t0):
                return iv, p
        raise KeyError(f"no right neighbourhood of {fmt(t0)}")

    def restrict(self, region: Region) -> "PPoly":
        segs = []
        for iv, p in self.segments:
            for r in region:
                c = iv.intersect(r)
                if not c.empty:
                    segs.append((c, p))
        return PPoly(segs)

    def map(self, fn) -> "PPoly":
        return PPoly((iv, fn(p)) for iv, p in self.segments)

    def add_upoly(self, q: UPoly) -> "PPoly":
        return self.map(lambda p: uadd(p, q))

    def sub_upoly(self, q: UPoly) -> "PPoly":
        return self.map(lambda p: usub(p, q))

    def scale(self, c) -> "PPoly":
        return self.map(lambda p: uscale(p, c))

    def __add__(self, other: "PPoly") -> "PPoly":
        segs = []
        for a, p in self.segments:
            for b, q in other.segments:
                c = a.intersect(b)
                if not c.empty:
                    segs.append((c, uadd(p, q)))
        return PPoly(segs)

    def __sub__(self, other: "PPoly") -> "PPoly":
        return self + other.scale(-1)

    def compose_into(self, outer: PiecewiseMap) -> "PPoly":
        """outer(self(t)) for a unary outer map."""
        segs = []
        for iv, p in self.segments:
            segs.extend(outer.along((p,), Region((iv,))).segments)
        return PPoly(segs)

    def compose_poly(self, outer: UPoly) -> "PPoly":
        return self.map(lambda p: ucompose(outer, p))

    def solve(self, op: str) -> Region:
        """{t in domain : value(t) op 0}."""
        out = Region.empty_region()
        for iv, p in self.segments:
            out = out.union(solve_sign(p, op, iv))
        return out

    def within(self, region: Region) -> Region:
        """{t in domain : value(t) in region}."""
        try:
            return self._within[region]
        except KeyError:
            pass
        out = Region.empty_region()
        for iv, p in self.segments:
            for target in region:
                acc = Region((iv,))
                if target.lo is not None:
                    acc = _refine(acc, usub(p, (target.lo,)), ">=" if target.lo_closed else ">")
                if acc and target.hi is not None:
                    acc = _refine(acc, usub(p, (target.hi,)), "<=" if target.hi_closed else "<")
                out = out.union(acc)
        self._within[region] = out
        return out

    def describe(self) -> str:
        return "; ".join(f"{iv}: {ufmt(p)}" for iv, p in self.segments)


def _refine(acc: Region, p: UPoly, op: str) -> Region:
    out = Region.empty_region()
    for iv in acc:
        out = out.union(solve_sign(p, op, iv))
    return out


def _start(iv: Interval):
    if iv.lo is None:
        return (0, Fraction(0), 0)
    return (1, iv.lo, 0 if iv.lo_closed else 1)
