"""One-sided geodesic E-eta-semiderivatives and the derivative inequalities
that semilocal preinvexity (and its quasi/pseudo variants) imply.

The difference quotient at base k* toward k is

    (f(c(t)) - f(k*)) / t,   t -> 0+

where c is the connecting curve.  By default ("anchored") c(t) is
gamma(E(k), k*, t), which starts at k*; ``curve="literal"`` uses
gamma(k*, E(k), t) instead, whose base point is E(k).
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Union

from .funclass import ScalarFn
from .geometry import EGeodesicSpace
from .poly import NotExact
from .rational import Q, fmt
from .report import ConsistencyReport
from .tscan import LOCAL_SCHEDULE

TOL = 1e-9
BLOWUP = 1e6


class BaseNotFixedByE(ValueError):
    def __init__(self, base):
        self.base = base
        super().__init__(f"E({fmt(base)}) != {fmt(base)}; the base point must be fixed by E")


class Kind(str, enum.Enum):
    FINITE = "finite"
    PLUS_INF = "+inf"
    MINUS_INF = "-inf"
    DIVERGENT = "divergent"


@dataclass(frozen=True)
class SemiDerivative:
    value: Union[Fraction, float, None]
    kind: Kind
    mode: str
    error_estimate: Optional[float] = None
    samples_used: int = 0

    @property
    def finite(self) -> bool:
        return self.kind is Kind.FINITE

    def as_float(self) -> float:
        if self.kind is Kind.PLUS_INF:
            return math.inf
        if self.kind is Kind.MINUS_INF:
            return -math.inf
        if self.kind is Kind.DIVERGENT:
            return math.nan
        return float(self.value)

    def render(self) -> str:
        return fmt(self.value) if self.finite else self.kind.value

    def as_dict(self) -> dict:
        d = {"value": self.render(), "kind": self.kind.value, "mode": self.mode}
        if self.mode == "numeric":
            d["error_estimate"] = self.error_estimate
            d["samples_used"] = self.samples_used
        return d


def _endpoints(space: EGeodesicSpace, base, target, curve: str):
    if curve == "anchored":
        return space.image(target), base
    if curve == "literal":
        return base, space.image(target)
    raise ValueError(f"curve must be 'anchored' or 'literal', got {curve!r}")


def semiderivative(
    f: ScalarFn,
    space: EGeodesicSpace,
    base,
    target,
    mode: str = "auto",
    curve: str = "anchored",
) -> SemiDerivative:
    """Right derivative of f along the curve from ``base`` toward E(``target``).

    ``mode`` is "exact", "numeric" or "auto" (exact when f and gamma allow it).
    """
    base, target = Q(base), Q(target)
    if space.image(base) != base:
        raise BaseNotFixedByE(base)
    x, y = _endpoints(space, base, target, curve)
    if mode in ("exact", "auto"):
        try:
            return _exact(f, space, base, x, y)
        except NotExact:
            if mode == "exact":
                raise
    elif mode != "numeric":
        raise ValueError(f"unknown mode {mode!r}")
    return _numeric(f, space, base, x, y)


def _exact(f, space, base, x, y) -> SemiDerivative:
    composite = f.along(space.curve(x, y))
    _, germ = composite.right_germ(Fraction(0))
    at0 = germ[0] if germ else Fraction(0)
    jump = at0 - f(base)
    if jump > 0:
        return SemiDerivative(None, Kind.PLUS_INF, "exact")
    if jump < 0:
        return SemiDerivative(None, Kind.MINUS_INF, "exact")
    slope = germ[1] if len(germ) > 1 else Fraction(0)
    return SemiDerivative(slope, Kind.FINITE, "exact")


def _numeric(f, space, base, x, y) -> SemiDerivative:
    f0 = f(base)
    qs: list[float] = []
    for t in LOCAL_SCHEDULE:
        q = float((f(space.gamma(x, y, t)) - f0) / t)
        if qs and abs(q - qs[-1]) < TOL:
            return SemiDerivative(q, Kind.FINITE, "numeric", abs(q - qs[-1]), len(qs) + 1)
        qs.append(q)
    tail = qs[-10:]
    err = abs(qs[-1] - qs[-2])
    same_sign = all(q > 0 for q in tail) or all(q < 0 for q in tail)
    growing = all(abs(b) >= abs(a) for a, b in zip(tail, tail[1:]))
    if same_sign and growing and abs(tail[-1]) > BLOWUP:
        kind = Kind.PLUS_INF if tail[-1] > 0 else Kind.MINUS_INF
        return SemiDerivative(None, kind, "numeric", err, len(qs))
    return SemiDerivative(None, Kind.DIVERGENT, "numeric", err, len(qs))


# -- derivative inequalities -------------------------------------------------


class Lemma2Variant(str, enum.Enum):
    PREINVEX = "preinvex"
    PREINCAVE = "preincave"
    QUASI = "quasi"
    PSEUDO = "pseudo"


def _cmp(d: SemiDerivative, bound, op: str) -> bool:
    """Extended-real comparison ``d op bound`` for a non-divergent d."""
    v = d.as_float() if not d.finite else d.value
    if op == "<=":
        return v <= bound
    if op == "<":
        return v < bound
    if op == ">=":
        return v >= bound
    raise ValueError(op)


def check_lemma2(f: ScalarFn, space: EGeodesicSpace, base, probes, variant, mode: str = "auto") -> ConsistencyReport:
    """Check the derivative inequality the variant implies at every probe.

    A violation is evidence that the corresponding class hypothesis fails.
    """
    variant = Lemma2Variant(variant)
    base = Q(base)
    if space.image(base) != base:
        raise BaseNotFixedByE(base)
    report = ConsistencyReport(f"derivative-{variant.value}")
    fb = f(base)
    for k in probes:
        k = Q(k)
        d = semiderivative(f, space, base, k, mode)
        diff = f(k) - fb
        row = {"k": k, "f(k)-f(base)": diff, "semiderivative": d.render()}
        if d.kind is Kind.DIVERGENT:
            row["status"] = "inconclusive"
            report.inconclusive = True
            report.rows.append(row)
            continue
        if variant is Lemma2Variant.PREINVEX:
            ok = _cmp(d, diff, "<=")
        elif variant is Lemma2Variant.PREINCAVE:
            ok = _cmp(d, diff, ">=")
        elif variant is Lemma2Variant.QUASI:
            ok = diff > 0 or _cmp(d, 0, "<=")
        else:
            ok = diff >= 0 or _cmp(d, 0, "<")
        row["status"] = "pass" if ok else "violation"
        report.rows.append(row)
        if not ok:
            report.flag(dict(row, hypothesis=_HYPOTHESIS[variant]))
    return report


_HYPOTHESIS = {
    Lemma2Variant.PREINVEX: "gslep",
    Lemma2Variant.PREINCAVE: "preincave",
    Lemma2Variant.QUASI: "gqslep",
    Lemma2Variant.PSEUDO: "gpslep",
}
