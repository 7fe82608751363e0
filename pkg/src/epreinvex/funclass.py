"""Function-class checkers (GEP, GSEP, GLEP, GSLEC, GSLEP, preincave, GqSLEP,
GpSLEP), epigraphs, level sets and the executable theorem cross-checks.

Every class is checked pair by pair on a probe set.  For a pair (k1, k2) the
curve is c(t) = gamma(E(k1), E(k2), t) and the left side is f(c(t)).
"""

from __future__ import annotations

import enum
import itertools
from dataclasses import dataclass, field, replace
from fractions import Fraction
from typing import Callable, Optional, Sequence

from .geometry import EGeodesicSpace
from .piecewise import NoPieceMatches, PiecewiseMap, PPoly
from .poly import NotExact, T, UPoly, ueval, ufmt
from .rational import Q, fmt
from .region import Interval, Region
from .report import ConsistencyReport
from .sets import SetProperty, Status, as_points, check_set_property
from .tscan import LOCAL_SCHEDULE, UNIT, dyadic_samples, global_samples, pick_t, reach


class UnsupportedForBlackBox(TypeError):
    pass


# -- scalar functions ----------------------------------------------------------


class ScalarFn:
    label = "f"
    exact = True

    def __call__(self, x):
        raise NotImplementedError

    def along(self, curve: PPoly) -> PPoly:
        """f(curve(t)) as an exact piecewise polynomial in t."""
        raise NotImplementedError

    def breakpoints(self) -> list[Fraction]:
        return []

    def __add__(self, other: "ScalarFn") -> "ScalarFn":
        return combine((1, self), (1, other))

    def __sub__(self, other: "ScalarFn") -> "ScalarFn":
        return combine((1, self), (-1, other))

    def __rmul__(self, c) -> "ScalarFn":
        return combine((c, self))


@dataclass(frozen=True, eq=False)
class PiecewiseFn(ScalarFn):
    map: PiecewiseMap
    label: str = "f"
    _values: dict = field(default_factory=dict, repr=False)

    def __call__(self, x) -> Fraction:
        try:
            return self._values[x]
        except (KeyError, TypeError):
            v = self.map(x)
        if isinstance(x, Fraction):
            self._values[x] = v
        return v

    def along(self, curve: PPoly) -> PPoly:
        return curve.compose_into(self.map)

    def breakpoints(self) -> list[Fraction]:
        return self.map.breakpoints(0)


@dataclass(frozen=True, eq=False)
class Combination(ScalarFn):
    """sum of c_i * f_i; the empty sum is the zero function."""

    terms: tuple  # ((Fraction, ScalarFn), ...)
    label: str = "combo"

    @property
    def exact(self) -> bool:
        return all(f.exact for _, f in self.terms)

    def __call__(self, x):
        return sum((c * f(x) for c, f in self.terms), Fraction(0))

    def along(self, curve: PPoly) -> PPoly:
        acc = curve.map(lambda p: ())
        for c, f in self.terms:
            acc = acc + f.along(curve).scale(c)
        return acc

    def breakpoints(self) -> list[Fraction]:
        return sorted({b for _, f in self.terms for b in f.breakpoints()})


@dataclass(frozen=True, eq=False)
class NumericFn(ScalarFn):
    """Black-box function; only sampling-based checks apply."""

    fn: Callable
    hints: tuple = ()
    label: str = "blackbox"
    exact = False

    def __call__(self, x):
        return self.fn(float(x))

    def along(self, curve: PPoly) -> PPoly:
        raise NotExact("black-box function")

    def breakpoints(self) -> list[Fraction]:
        return [Q(h) for h in self.hints]


def combine(*terms, label: Optional[str] = None) -> Combination:
    items = tuple((Q(c), f) for c, f in terms if Q(c) != 0)
    if label is None:
        label = " + ".join(f"{fmt(c)}*{f.label}" for c, f in items) or "0"
    return Combination(items, label)


def piecewise_fn(pieces, label: str = "f") -> PiecewiseFn:
    from .expr import parse_map

    return PiecewiseFn(parse_map(pieces, ["x"], label), label)


def polynomial_fn(body: str, label: Optional[str] = None) -> PiecewiseFn:
    return piecewise_fn([["true", body]], label or body)


# -- verdicts ------------------------------------------------------------------


class FnClass(str, enum.Enum):
    GEP = "gep"
    GSEP = "gsep"
    GLEP = "glep"
    GSLEC = "gslec"
    GSLEP = "gslep"
    PREINCAVE = "preincave"
    GQSLEP = "gqslep"
    GPSLEP = "gpslep"


GLOBAL_CLASSES = {FnClass.GEP, FnClass.GSEP}
E_IMAGE_RHS = {FnClass.GEP, FnClass.GLEP}


@dataclass(frozen=True)
class ClassWitness:
    k1: Fraction
    k2: Fraction
    t: Fraction
    lhs: Fraction
    rhs: Fraction
    reason: str = "inequality"
    lhs_poly: Optional[UPoly] = None
    rhs_poly: Optional[UPoly] = None

    def as_dict(self) -> dict:
        d = {
            "k1": fmt(self.k1),
            "k2": fmt(self.k2),
            "t": fmt(self.t),
            "lhs": fmt(self.lhs),
            "rhs": fmt(self.rhs),
            "reason": self.reason,
        }
        if self.lhs_poly is not None:
            d["lhs_expr"] = ufmt(self.lhs_poly)
        if self.rhs_poly is not None:
            d["rhs_expr"] = ufmt(self.rhs_poly)
        return d


@dataclass
class ClassVerdict:
    status: Status
    cls: FnClass
    locality: dict = field(default_factory=dict)  # (k1, k2) -> (u, v)
    pseudo_slack: dict = field(default_factory=dict)  # (k1, k2) -> w
    witness: Optional[ClassWitness] = None
    reason: str = ""
    pairs_checked: int = 0
    pairs_skipped: int = 0
    sampled_pairs: int = 0
    scope: str = "probe set"

    @property
    def holds(self) -> bool:
        return self.status is Status.HOLDS

    @property
    def fails(self) -> bool:
        return self.status is Status.FAILS


class _PairFailure(Exception):
    def __init__(self, witness: ClassWitness):
        self.witness = witness


def _rhs_for(cls: FnClass, f: ScalarFn, space, k1, k2) -> UPoly:
    if cls in E_IMAGE_RHS:
        a1, a2 = f(space.image(k1)), f(space.image(k2))
    elif cls in (FnClass.GQSLEP, FnClass.GPSLEP):
        return (Fraction(f(k2)),) if f(k2) != 0 else ()
    else:
        a1, a2 = f(k1), f(k2)
    # t*a1 + (1 - t)*a2
    return tuple(Fraction(c) for c in (a2, a1 - a2))


def _lift(f: ScalarFn, curve: PPoly, dom: Region) -> PPoly:
    """f along the curve, restricted to ``dom``; whole-curve composites are memoized."""
    try:
        full = curve.lifted[f]
    except KeyError:
        try:
            full = f.along(curve)
        except NoPieceMatches:
            full = None
        curve.lifted[f] = full
    if full is None:
        return f.along(curve.restrict(dom))
    return full.restrict(dom)


def _check_pair_exact(f, space, region, cls, k1, k2):
    """Exact per-pair decision; returns (u, v, w) or raises _PairFailure.

    Pairs sharing the curve and the right side share the decision, so it is
    memoized on the curve; a cached failure is re-labelled with this pair.
    """
    curve = space.pair_curve(k1, k2)
    key = (f, region, cls, _rhs_for(cls, f, space, k1, k2))
    hit = curve.verdicts.get(key)
    if hit is None:
        try:
            hit = ("ok", _decide_pair(f, space, region, cls, k1, k2, curve))
        except _PairFailure as fail:
            hit = ("fail", fail.witness)
        curve.verdicts[key] = hit
    if hit[0] == "fail":
        raise _PairFailure(replace(hit[1], k1=k1, k2=k2))
    return hit[1]


def _decide_pair(f, space, region, cls, k1, k2, curve):
    inside = curve.within(region)
    x, y = space.image(k1), space.image(k2)
    if cls in GLOBAL_CLASSES:
        if inside != UNIT:
            bad = UNIT.minus(inside)
            t = pick_t(bad, local=False)
            raise _PairFailure(ClassWitness(k1, k2, t, space.gamma(x, y, t), Fraction(0), "curve leaves set"))
        dom = UNIT
        u = Fraction(1)
    else:
        r = reach(inside)
        if r is None:
            bad = UNIT.minus(inside)
            t = pick_t(bad, local=True)
            raise _PairFailure(ClassWitness(k1, k2, t, space.gamma(x, y, t), Fraction(0), "curve leaves set"))
        comp = inside.component(Fraction(0))
        dom = Region((Interval(Fraction(0), True, min(r[0], Fraction(1)), r[1]),)).intersect(Region((comp,)))
        u = r[0]
    lhs = _lift(f, curve, dom)
    rhs = _rhs_for(cls, f, space, k1, k2)
    diff = lhs.sub_upoly(rhs)

    if cls is FnClass.GPSLEP:
        return _gpslep_pair(lhs, rhs, dom, u, k1, k2)

    bad = diff.solve("<" if cls is FnClass.PREINCAVE else ">")
    if cls in GLOBAL_CLASSES:
        if bad:
            t = pick_t(bad, local=False)
            raise _PairFailure(_ineq_witness(lhs, rhs, k1, k2, t))
        return u, Fraction(1), None
    valid = dom.minus(bad)
    r = reach(valid)
    if r is None:
        t = pick_t(bad, local=True)
        raise _PairFailure(_ineq_witness(lhs, rhs, k1, k2, t))
    return u, r[0], None


def _ineq_witness(lhs: PPoly, rhs: UPoly, k1, k2, t) -> ClassWitness:
    _, p = lhs.segment_at(t)
    return ClassWitness(k1, k2, t, ueval(p, t), ueval(rhs, t), "inequality", p, rhs)


def _gpslep_pair(lhs: PPoly, level: UPoly, dom: Region, u, k1, k2):
    """h(c(t)) <= h(k2) - t*w on [0, v] for some w, v > 0."""
    top = ueval(level, 0)
    at0 = lhs(Fraction(0))
    _, germ = lhs.right_germ(Fraction(0))
    d0 = top - (germ[0] if germ else 0)
    d1 = -(germ[1] if len(germ) > 1 else 0)
    if at0 > top or not (d0 > 0 or (d0 == 0 and d1 > 0)):
        if at0 > top:
            t = Fraction(0)
        else:
            t = next((s for s in LOCAL_SCHEDULE if s in dom and lhs.segment_at(s)[1] == germ), LOCAL_SCHEDULE[-1])
        raise _PairFailure(
            ClassWitness(k1, k2, t, lhs(t), top, "no positive slack rate", lhs.segment_at(t)[1], level)
        )
    w0 = d0 if d0 > 0 else d1 / 2
    bound = (top, -w0)  # h(k2) - t*w0
    valid = dom.minus(lhs.sub_upoly(bound).solve(">"))
    r = reach(valid)
    v = r[0]
    samples = [s for s in LOCAL_SCHEDULE + (Fraction(1, 2), Fraction(1, 4), Fraction(1, 8), v) if 0 < s <= v and s in valid]
    w = min((top - lhs(s)) / s for s in samples)
    return u, v, w


def _check_pair_sampled(f, space, region, cls, k1, k2, t_samples):
    x, y = space.image(k1), space.image(k2)
    global_ = cls in GLOBAL_CLASSES
    ts = global_samples(t_samples) if global_ else dyadic_samples(t_samples)
    rhs = _rhs_for(cls, f, space, k1, k2)
    rows = []
    for t in ts:
        g = space.gamma(x, y, t)
        if g not in region:
            rows.append((t, False, g, Fraction(0), "curve leaves set"))
            continue
        lhs = f(g)
        r = ueval(rhs, t)
        if cls is FnClass.GPSLEP:
            ok = lhs <= r if t == 0 else (r - lhs) / t > 0
        elif cls is FnClass.PREINCAVE:
            ok = lhs >= r
        else:
            ok = lhs <= r
        rows.append((t, ok, lhs, r, "inequality"))
    if global_:
        for t, ok, lhs, r, why in rows:
            if not ok:
                raise _PairFailure(ClassWitness(k1, k2, t, lhs, r, why + " (sampled)"))
        return Fraction(1), Fraction(1), None
    if not rows[0][1] or not rows[1][1]:
        t, _, lhs, r, why = rows[0] if not rows[0][1] else rows[1]
        raise _PairFailure(ClassWitness(k1, k2, t, lhs, r, why + " (sampled)"))
    v = Fraction(0)
    for t, ok, *_ in rows:
        if not ok:
            break
        v = t
    w = None
    if cls is FnClass.GPSLEP:
        w = min((r - lhs) / t for t, ok, lhs, r, _ in rows if 0 < t <= v)
    return v, v, w


def check_class(
    f: ScalarFn,
    space: EGeodesicSpace,
    region: Region,
    cls,
    probes,
    t_samples: int = 20,
    pairs: Optional[Sequence] = None,
) -> ClassVerdict:
    """Decide a function class on the ordered probe pairs.

    The first failing pair in lexicographic order (or in the order of
    ``pairs`` when given) is reported as the witness.
    """
    cls = FnClass(cls)
    points = [p for p in as_points(probes) if p in region]
    todo = itertools.product(points, repeat=2) if pairs is None else [(Q(a), Q(b)) for a, b in pairs]
    verdict = ClassVerdict(Status.HOLDS, cls)
    inconclusive = []
    for k1, k2 in todo:
        try:
            if cls is FnClass.GQSLEP and not f(k1) <= f(k2):
                verdict.pairs_skipped += 1
                continue
            if cls is FnClass.GPSLEP and not f(k1) < f(k2):
                verdict.pairs_skipped += 1
                continue
            verdict.pairs_checked += 1
            try:
                u, v, w = _check_pair_exact(f, space, region, cls, k1, k2)
            except NotExact:
                verdict.sampled_pairs += 1
                u, v, w = _check_pair_sampled(f, space, region, cls, k1, k2, t_samples)
        except _PairFailure as fail:
            verdict.status = Status.FAILS
            verdict.witness = fail.witness
            return verdict
        except NoPieceMatches as exc:
            inconclusive.append(f"({fmt(k1)}, {fmt(k2)}): {exc}")
            continue
        verdict.locality[(k1, k2)] = (u, v)
        if w is not None:
            verdict.pseudo_slack[(k1, k2)] = w
    if inconclusive:
        verdict.status = Status.INCONCLUSIVE
        verdict.reason = "; ".join(inconclusive[:5])
    return verdict


def verify_class_witness(f: ScalarFn, space: EGeodesicSpace, region: Region, cls, w: ClassWitness) -> bool:
    """Recompute a Fails witness by direct substitution."""
    cls = FnClass(cls)
    x, y = space.image(w.k1), space.image(w.k2)
    point = space.gamma(x, y, w.t)
    if w.reason.startswith("curve leaves set"):
        return point == w.lhs and point not in region
    lhs = f(point)
    if lhs != w.lhs:
        return False
    rhs = ueval(_rhs_for(cls, f, space, w.k1, w.k2), w.t)
    if rhs != w.rhs:
        return False
    if cls is FnClass.PREINCAVE:
        return lhs < rhs
    if cls is FnClass.GPSLEP:
        if w.t == 0:
            return lhs > rhs
        # the slack quotient has no positive lower bound near 0
        return lhs > rhs or w.lhs_poly is not None
    return lhs > rhs


# -- epigraph and level sets ---------------------------------------------------


@dataclass(frozen=True, eq=False)
class EpigraphRegion:
    base: Region
    fn: ScalarFn
    cap: Optional[Fraction] = None

    def __contains__(self, item) -> bool:
        k, a = item
        k, a = Q(k), Q(a)
        return k in self.base and self.fn(k) <= a


def epigraph(f: ScalarFn, region: Region, cap=None) -> EpigraphRegion:
    return EpigraphRegion(region, f, None if cap is None else Q(cap))


def level_set(f: ScalarFn, region: Region, alpha) -> Region:
    """{k in region : f(k) <= alpha}, exactly."""
    if not f.exact:
        raise UnsupportedForBlackBox("level sets need an exact piecewise function")
    alpha = Q(alpha)
    out = Region.empty_region()
    for iv in region:
        graph = f.along(PPoly([(iv, T)]))
        out = out.union(graph.sub_upoly((alpha,)).solve("<="))
    return out


# -- theorem cross-checks ------------------------------------------------------


class Theorem(str, enum.Enum):
    EPIGRAPH = "epigraph"
    LEVELSET = "levelset"
    GLEP_CHAR = "glep_char"
    ALPHA_BETA = "alpha_beta"


def _local_rhs_holds(f, space, region, k1, k2, rhs: UPoly) -> bool:
    """Exists v in (0, u] with f(c(t)) <= rhs(t) on [0, v]."""
    curve = space.pair_curve(k1, k2)
    inside = curve.within(region)
    r = reach(inside)
    if r is None:
        return False
    comp = inside.component(Fraction(0))
    lhs = f.along(curve.restrict(Region((comp,))))
    valid = Region((comp,)).minus(lhs.sub_upoly(rhs).solve(">"))
    return reach(valid) is not None


def crosscheck_theorem(
    name,
    f: ScalarFn,
    space: EGeodesicSpace,
    region: Region,
    probes,
    levels: Optional[Sequence] = None,
    deltas: Sequence = (1, Fraction(1, 16)),
    max_levels: int = 6,
) -> ConsistencyReport:
    name = Theorem(name)
    points = [p for p in as_points(probes) if p in region]
    report = ConsistencyReport(name.value)
    gslep = check_class(f, space, region, FnClass.GSLEP, points)
    report.rows.append({"check": "gslep", "status": gslep.status.value, "witness": gslep.witness})

    if name is Theorem.EPIGRAPH:
        cap = max(f(p) for p in points) + 1 if points else Fraction(1)
        prod = check_set_property(space, epigraph(f, region, cap), SetProperty.GLEI_PRODUCT, points)
        report.rows.append({"check": "epigraph_glei", "status": prod.status.value, "witness": prod.witness})
        if gslep.status != prod.status:
            report.flag({"direction": "gslep <=> epigraph glei", "gslep": gslep.status.value, "epigraph": prod.status.value})
        if Status.INCONCLUSIVE in (gslep.status, prod.status):
            report.inconclusive = True
        return report

    if name is Theorem.LEVELSET:
        if not gslep.holds:
            report.notes.append("hypothesis not met on probes (GSLEP does not hold); implication vacuous")
            return report
        values = sorted({f(p) for p in points}) if levels is None else sorted({Q(a) for a in levels})
        if levels is None and len(values) > max_levels:
            step = (len(values) - 1) / (max_levels - 1)
            values = sorted({values[round(i * step)] for i in range(max_levels)})
        for alpha in values:
            lev = level_set(f, region, alpha)
            pts = [p for p in points if p in lev]
            verdict = check_set_property(space, lev, SetProperty.GLEI, pts)
            report.rows.append({"alpha": alpha, "level_set": str(lev), "status": verdict.status.value})
            if not verdict.holds:
                report.flag({"alpha": alpha, "level_set": str(lev), "witness": verdict.witness})
        return report

    if name is Theorem.GLEP_CHAR:
        glep = check_class(f, space, region, FnClass.GLEP, points)
        report.rows.append({"check": "glep", "status": glep.status.value, "witness": glep.witness})
        premise_ok = True
        for k in points:
            fe, fk = f(space.image(k)), f(k)
            ok = fe <= fk
            premise_ok &= ok
            report.rows.append({"k": k, "f(E(k))": fe, "f(k)": fk, "premise": ok})
        if gslep.holds and not premise_ok:
            report.flag({"direction": "gslep => f(E(k)) <= f(k)", "detail": "premise fails although GSLEP holds"})
        if glep.holds and premise_ok and not gslep.holds:
            report.flag({"direction": "glep and premise => gslep", "witness": gslep.witness})
        if not glep.holds:
            report.notes.append("GLEP hypothesis not met on probes; only the forward direction is testable")
        return report

    # ALPHA_BETA
    all_rows_ok = True
    first_bad = None
    for k1, k2 in itertools.product(points, repeat=2):
        for d in deltas:
            d = Q(d)
            a, b = f(k1) + d, f(k2) + d
            ok = _local_rhs_holds(f, space, region, k1, k2, (b, a - b))
            if not ok:
                all_rows_ok = False
                if first_bad is None:
                    first_bad = {"k1": k1, "k2": k2, "alpha": a, "beta": b}
    report.rows.append({"check": "alpha_beta_rows", "all_hold": all_rows_ok, "deltas": [Q(d) for d in deltas]})
    if gslep.holds and not all_rows_ok:
        report.flag({"direction": "gslep => alpha-beta", "witness": first_bad})
    if all_rows_ok and not gslep.holds:
        report.flag({"direction": "alpha-beta => gslep", "witness": gslep.witness})
    return report
