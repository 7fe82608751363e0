"""Exact polynomials with rational coefficients.

Univariate polynomials are plain tuples of Fractions, lowest degree first,
with trailing zeros trimmed (the zero polynomial is ``()``).  Multivariate
polynomials (:class:`Poly`) map exponent tuples to coefficients.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping, Optional, Sequence

import numpy as np

from .rational import fmt
from .region import Interval, Region

UPoly = tuple  # tuple[Fraction, ...]

ZERO: UPoly = ()
T: UPoly = (Fraction(0), Fraction(1))


class NotExact(Exception):
    """Raised when an exact answer would need an irrational breakpoint."""


def utrim(coeffs: Sequence) -> UPoly:
    c = [x if type(x) is Fraction else Fraction(x) for x in coeffs]
    while c and c[-1] == 0:
        c.pop()
    return tuple(c)


def uconst(value) -> UPoly:
    return utrim((value,))


def udeg(p: UPoly) -> int:
    return len(p) - 1


def uadd(p: UPoly, q: UPoly) -> UPoly:
    n = max(len(p), len(q))
    return utrim([(p[i] if i < len(p) else 0) + (q[i] if i < len(q) else 0) for i in range(n)])


def uscale(p: UPoly, c) -> UPoly:
    return utrim([c * a for a in p])


def usub(p: UPoly, q: UPoly) -> UPoly:
    return uadd(p, uscale(q, -1))


def umul(p: UPoly, q: UPoly) -> UPoly:
    if not p or not q:
        return ZERO
    out = [Fraction(0)] * (len(p) + len(q) - 1)
    for i, a in enumerate(p):
        if a:
            for j, b in enumerate(q):
                out[i + j] += a * b
    return utrim(out)


def upow(p: UPoly, n: int) -> UPoly:
    out: UPoly = (Fraction(1),)
    for _ in range(n):
        out = umul(out, p)
    return out


def ueval(p: UPoly, x) -> Fraction:
    acc = Fraction(0)
    for a in reversed(p):
        acc = acc * x + a
    return acc


def ucompose(p: UPoly, q: UPoly) -> UPoly:
    """p(q(t))."""
    acc: UPoly = ZERO
    for a in reversed(p):
        acc = uadd(umul(acc, q), (a,))
    return acc


def ushift(p: UPoly, x0) -> UPoly:
    """p(x0 + s) as a polynomial in s."""
    return ucompose(p, (Fraction(x0), Fraction(1)))


def ugerm_sign(p: UPoly, x0) -> int:
    """Sign of p on a right neighbourhood (x0, x0 + eps)."""
    for a in ushift(p, x0):
        if a:
            return 1 if a > 0 else -1
    return 0


def ufmt(p: UPoly, var: str = "t") -> str:
    if not p:
        return "0"
    terms = []
    for k in range(len(p) - 1, -1, -1):
        a = p[k]
        if a == 0:
            continue
        sign = "-" if a < 0 else "+"
        mag = abs(a)
        if k == 0:
            body = fmt(mag)
        else:
            mono = var if k == 1 else f"{var}^{k}"
            body = mono if mag == 1 else f"{fmt(mag)}*{mono}"
        terms.append((sign, body))
    first_sign, first_body = terms[0]
    out = ("-" if first_sign == "-" else "") + first_body
    for sign, body in terms[1:]:
        out += f" {sign} {body}"
    return out


# -- real roots --------------------------------------------------------------


def _exact_sqrt(q: Fraction) -> Optional[Fraction]:
    if q < 0:
        return None
    n, d = q.numerator, q.denominator
    rn, rd = math.isqrt(n), math.isqrt(d)
    if rn * rn == n and rd * rd == d:
        return Fraction(rn, rd)
    return None


def _deflate(p: UPoly, r: Fraction) -> UPoly:
    # synthetic division by (x - r); caller guarantees p(r) == 0
    n = len(p) - 1
    out = [Fraction(0)] * n
    carry = Fraction(0)
    for k in range(n, 0, -1):
        carry = p[k] + carry * r if k < n else p[k]
        out[k - 1] = carry
    return utrim(out)


def _near(iv: Optional[Interval], x: float, tol: float = 1e-7) -> bool:
    if iv is None:
        return True
    if iv.lo is not None and x < float(iv.lo) - tol:
        return False
    if iv.hi is not None and x > float(iv.hi) + tol:
        return False
    return True


def real_roots(p: UPoly, within: Optional[Interval] = None) -> list[Fraction]:
    """Distinct real roots of p, all of which must be rational.

    Roots lying clearly outside ``within`` are ignored even when irrational;
    an irrational root inside (or too close to call) raises NotExact.
    """
    if not p:
        raise ValueError("zero polynomial has no isolated roots")
    roots: set[Fraction] = set()
    p = utrim(p)
    while len(p) > 3:
        approx = np.roots([float(a) for a in reversed(p)])
        found = None
        for z in approx:
            if abs(z.imag) > 1e-6 * max(1.0, abs(z.real)):
                continue
            for bound in (10**3, 10**6, 10**9):
                cand = Fraction(float(z.real)).limit_denominator(bound)
                if ueval(p, cand) == 0:
                    found = cand
                    break
            if found is not None:
                break
        if found is None:
            for z in approx:
                if abs(z.imag) <= 1e-6 * max(1.0, abs(z.real)) and _near(within, z.real):
                    raise NotExact(f"irrational root near {z.real:.6g} of {ufmt(p, 'x')}")
            return sorted(roots)
        roots.add(found)
        p = _deflate(p, found)
    if len(p) == 3:
        c, b, a = p
        disc = b * b - 4 * a * c
        if disc >= 0:
            s = _exact_sqrt(disc)
            if s is None:
                for sgn in (1, -1):
                    z = (-float(b) + sgn * math.sqrt(float(disc))) / (2 * float(a))
                    if _near(within, z):
                        raise NotExact(f"irrational root near {z:.6g} of {ufmt(p, 'x')}")
            else:
                roots.add((-b + s) / (2 * a))
                roots.add((-b - s) / (2 * a))
    elif len(p) == 2:
        roots.add(-p[0] / p[1])
    return sorted(roots)


_OPS = {
    "<": lambda v: v < 0,
    "<=": lambda v: v <= 0,
    "==": lambda v: v == 0,
    "!=": lambda v: v != 0,
    ">": lambda v: v > 0,
    ">=": lambda v: v >= 0,
}


def holds(value: Fraction, op: str) -> bool:
    """Whether ``value op 0``."""
    return _OPS[op](value)


def solve_sign(p: UPoly, op: str, domain: Interval) -> Region:
    """Exact set {x in domain : p(x) op 0}."""
    test = _OPS[op]
    if domain.empty:
        return Region.empty_region()
    if len(p) <= 1:
        return Region((domain,)) if test(p[0] if p else Fraction(0)) else Region.empty_region()
    if len(p) == 2:
        roots = [-p[0] / p[1]]
        roots = roots if roots[0] in domain else []
    else:
        roots = [r for r in real_roots(p, domain) if r in domain]
    cuts: list[Fraction] = sorted(roots)
    out: list[Interval] = []
    # open gaps between consecutive cut points (and the domain ends)
    edges: list[tuple[Optional[Fraction], bool]] = [(domain.lo, domain.lo_closed)]
    for r in cuts:
        edges.append((r, False))
    edges.append((domain.hi, domain.hi_closed))
    for (a, a_closed), (b, b_closed) in zip(edges, edges[1:]):
        gap = Interval(a, False, b, False)
        if gap.empty:
            continue
        if test(ueval(p, gap.sample())):
            out.append(gap)
    for r in cuts:
        if test(Fraction(0)):
            out.append(Interval.point(r))
    for end, closed in ((domain.lo, domain.lo_closed), (domain.hi, domain.hi_closed)):
        if end is not None and closed and end not in cuts and test(ueval(p, end)):
            out.append(Interval.point(end))
    return Region(out)


# -- multivariate ------------------------------------------------------------


@dataclass(frozen=True)
class Poly:
    """Polynomial in ``nvars`` variables with exact rational coefficients."""

    nvars: int
    terms: tuple  # sorted tuple of (exponents, Fraction), zero terms dropped

    @classmethod
    def from_dict(cls, nvars: int, terms: Mapping) -> "Poly":
        items = tuple(sorted((tuple(e), Fraction(c)) for e, c in terms.items() if c != 0))
        return cls(nvars, items)

    @classmethod
    def const(cls, nvars: int, value) -> "Poly":
        return cls.from_dict(nvars, {(0,) * nvars: Fraction(value)})

    @classmethod
    def var(cls, nvars: int, index: int) -> "Poly":
        e = [0] * nvars
        e[index] = 1
        return cls.from_dict(nvars, {tuple(e): 1})

    def as_dict(self) -> dict:
        return dict(self.terms)

    def __add__(self, other: "Poly") -> "Poly":
        d = self.as_dict()
        for e, c in other.terms:
            d[e] = d.get(e, 0) + c
        return Poly.from_dict(self.nvars, d)

    def __neg__(self) -> "Poly":
        return Poly(self.nvars, tuple((e, -c) for e, c in self.terms))

    def __sub__(self, other: "Poly") -> "Poly":
        return self + (-other)

    def __mul__(self, other: "Poly") -> "Poly":
        d: dict = {}
        for e1, c1 in self.terms:
            for e2, c2 in other.terms:
                e = tuple(a + b for a, b in zip(e1, e2))
                d[e] = d.get(e, 0) + c1 * c2
        return Poly.from_dict(self.nvars, d)

    def scale(self, c) -> "Poly":
        return Poly.from_dict(self.nvars, {e: c * v for e, v in self.terms})

    def __pow__(self, n: int) -> "Poly":
        out = Poly.const(self.nvars, 1)
        for _ in range(n):
            out = out * self
        return out

    def constant_value(self) -> Optional[Fraction]:
        if not self.terms:
            return Fraction(0)
        if len(self.terms) == 1 and not any(self.terms[0][0]):
            return self.terms[0][1]
        return None

    def variables(self) -> set[int]:
        return {i for e, _ in self.terms for i, k in enumerate(e) if k}

    def degree(self) -> int:
        return max((sum(e) for e, _ in self.terms), default=0)

    def __call__(self, *args) -> Fraction:
        total = Fraction(0)
        for e, c in self.terms:
            term = c
            for x, k in zip(args, e):
                if k:
                    term *= x**k
            total += term
        return total

    def substitute(self, subs: Sequence[UPoly]) -> UPoly:
        """Replace every variable by a univariate polynomial in a common parameter."""
        powers: list[dict[int, UPoly]] = [{0: (Fraction(1),)} for _ in range(self.nvars)]

        def power(i: int, k: int) -> UPoly:
            cache = powers[i]
            if k not in cache:
                cache[k] = umul(power(i, k - 1), subs[i])
            return cache[k]

        acc: UPoly = ZERO
        for e, c in self.terms:
            term: UPoly = (c,)
            for i, k in enumerate(e):
                if k:
                    term = umul(term, power(i, k))
            acc = uadd(acc, term)
        return acc

    def univariate_in(self, index: int) -> Optional[UPoly]:
        """Coefficients when the polynomial depends on variable ``index`` only."""
        if self.variables() - {index}:
            return None
        out: dict[int, Fraction] = {}
        for e, c in self.terms:
            out[e[index]] = out.get(e[index], 0) + c
        n = max(out, default=0)
        return utrim([out.get(k, 0) for k in range(n + 1)])

    def render(self, names: Sequence[str]) -> str:
        if not self.terms:
            return "0"
        parts = []
        for e, c in sorted(self.terms, key=lambda ec: (-sum(ec[0]), [-k for k in ec[0]])):
            mono = "*".join(
                names[i] if k == 1 else f"{names[i]}^{k}" for i, k in enumerate(e) if k
            )
            mag = abs(c)
            if not mono:
                body = fmt(mag)
            elif mag == 1:
                body = mono
            else:
                body = f"{fmt(mag)}*{mono}"
            parts.append(("-" if c < 0 else "+", body))
        sign, body = parts[0]
        out = ("-" if sign == "-" else "") + body
        for sign, body in parts[1:]:
            out += f" {sign} {body}"
        return out
