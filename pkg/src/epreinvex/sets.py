"""Probe sets and set-level checks: GEI, GLEI, local starshaped E-convexity and
the GLEI property of an epigraph-type product set.

Pair quantifiers are discharged on a finite probe set; the t quantifier is
removed exactly whenever every breakpoint along the curve is rational.
"""

from __future__ import annotations

import enum
import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Sequence

from .geometry import EGeodesicSpace
from .piecewise import NoPieceMatches
from .poly import NotExact
from .rational import Q, fmt
from .region import Region
from .tscan import UNIT, dyadic_samples, global_samples, pick_t, reach


class Status(str, enum.Enum):
    HOLDS = "holds"
    FAILS = "fails"
    INCONCLUSIVE = "inconclusive"


class SetProperty(str, enum.Enum):
    GEI = "gei"
    GLEI = "glei"
    STARSHAPED = "starshaped"
    GLEI_PRODUCT = "glei_product"


class EmptyRegion(ValueError):
    pass


@dataclass(frozen=True)
class ProbePolicy:
    grid_step: Fraction = Fraction(1, 16)
    offset: Fraction = Fraction(1, 64)
    window: Optional[Region] = None

    @classmethod
    def named(cls, name: str) -> "ProbePolicy":
        if name == "default":
            return cls()
        if name == "dense":
            return cls(Fraction(1, 64), Fraction(1, 256))
        raise ValueError(f"unknown probe policy {name!r}")


@dataclass(frozen=True)
class ProbeSet:
    points: tuple  # sorted members of the region
    boundary: tuple = ()  # interval ends outside the region, kept for reporting
    grid_step: Optional[Fraction] = None
    offset: Optional[Fraction] = None
    breakpoints: tuple = ()

    def __iter__(self):
        return iter(self.points)

    def __len__(self):
        return len(self.points)

    def __contains__(self, x):
        return x in self.points

    def restricted(self, region: Region) -> "ProbeSet":
        return ProbeSet(
            tuple(p for p in self.points if p in region),
            self.boundary,
            self.grid_step,
            self.offset,
            self.breakpoints,
        )

    @classmethod
    def of(cls, points) -> "ProbeSet":
        return cls(tuple(sorted({Q(p) for p in points})))


def as_points(probes) -> list[Fraction]:
    if isinstance(probes, ProbeSet):
        return list(probes.points)
    return sorted({Q(p) for p in probes})


def build_probes(
    region: Region,
    space: EGeodesicSpace,
    policy: ProbePolicy = ProbePolicy(),
    extra_breakpoints: Sequence = (),
) -> ProbeSet:
    """Grid + endpoints + guard breakpoints (+/- offset) + E-images, inside ``region``."""
    if policy.grid_step <= 0:
        raise ValueError("grid_step must be positive")
    area = region if policy.window is None else region.intersect(policy.window)
    if not area:
        raise EmptyRegion(f"no probe area in {region}")
    if not area.bounded:
        raise EmptyRegion(f"{region} is unbounded; give the probe policy a window")
    pts: set[Fraction] = set()
    boundary: set[Fraction] = set()
    for iv in area:
        for end in (iv.lo, iv.hi):
            (pts if end in region else boundary).add(end)
        k = 0
        while True:
            x = iv.lo + k * policy.grid_step
            if x > iv.hi:
                break
            if x in iv:
                pts.add(x)
            k += 1
    lo, hi = area.intervals[0].lo, area.intervals[-1].hi
    bps = {Q(b) for b in list(space.breakpoints()) + list(extra_breakpoints)}
    bps = {b for b in bps if lo <= b <= hi}
    for b in sorted(bps):
        for x in (b - policy.offset, b, b + policy.offset):
            if x in area:
                pts.add(x)
    for b in sorted(bps | set(region.endpoints())):
        if b in area:
            try:
                img = space.image(b)
            except NoPieceMatches:
                continue
            if img in area:
                pts.add(img)
    return ProbeSet(
        tuple(sorted(pts)),
        tuple(sorted(boundary)),
        policy.grid_step,
        policy.offset,
        tuple(sorted(b for b in bps if b in region)),
    )


@dataclass(frozen=True)
class SetWitness:
    k1: Fraction
    k2: Fraction
    t: Fraction
    point: Fraction
    reason: str
    alpha1: Optional[Fraction] = None
    alpha2: Optional[Fraction] = None

    def as_dict(self) -> dict:
        d = {"k1": fmt(self.k1), "k2": fmt(self.k2), "t": fmt(self.t), "point": fmt(self.point), "reason": self.reason}
        if self.alpha1 is not None:
            d["alpha1"], d["alpha2"] = fmt(self.alpha1), fmt(self.alpha2)
        return d


@dataclass
class SetVerdict:
    status: Status
    prop: SetProperty
    certificate: dict = field(default_factory=dict)  # (k1, k2) -> (u, v)
    witness: Optional[SetWitness] = None
    reason: str = ""
    pairs_checked: int = 0
    sampled_pairs: int = 0
    scope: str = "probe set"

    @property
    def holds(self) -> bool:
        return self.status is Status.HOLDS

    @property
    def fails(self) -> bool:
        return self.status is Status.FAILS


def _pairs(points: Sequence[Fraction]):
    return itertools.product(points, repeat=2)


def locality_u(space: EGeodesicSpace, region: Region, k1, k2) -> Optional[Fraction]:
    """Largest u in (0, 1] with gamma_{E(k1),E(k2)}([0, u]) inside ``region``.

    When the supremum sits on an open end of the region it is not attained;
    the supremum is returned all the same.  None when no positive u exists.
    """
    curve = space.pair_curve(Q(k1), Q(k2))
    r = reach(curve.within(region))
    return None if r is None else r[0]


def _leave_witness(space, k1, k2, inside: Region, local: bool) -> SetWitness:
    bad = UNIT.minus(inside)
    t = pick_t(bad, local)
    pt = space.gamma(space.image(k1), space.image(k2), t)
    return SetWitness(k1, k2, t, pt, "point outside set")


def check_set_property(
    space: EGeodesicSpace,
    region,
    prop,
    probes,
    t_samples: int = 20,
    pairs: Optional[Sequence] = None,
    alpha_offsets: Sequence = (0, 1),
) -> SetVerdict:
    """Decide a set property on the probe pairs; the first failing pair in
    lexicographic order is reported."""
    prop = SetProperty(prop)
    if prop is SetProperty.GLEI_PRODUCT:
        return _check_product(space, region, probes, t_samples, pairs, alpha_offsets)
    points = [p for p in as_points(probes) if p in region]
    todo = list(_pairs(points)) if pairs is None else [(Q(a), Q(b)) for a, b in pairs]
    verdict = SetVerdict(Status.HOLDS, prop)
    inconclusive = []
    local = prop is not SetProperty.GEI
    for k1, k2 in todo:
        verdict.pairs_checked += 1
        try:
            try:
                inside = space.pair_curve(k1, k2).within(region)
            except NotExact:
                verdict.sampled_pairs += 1
                inside = None
            if inside is None:
                u, bad_t = _sampled_set(space, region, k1, k2, local, t_samples)
                if u is None:
                    x, y = space.image(k1), space.image(k2)
                    verdict.status = Status.FAILS
                    verdict.witness = SetWitness(k1, k2, bad_t, space.gamma(x, y, bad_t), "point outside set (sampled)")
                    return verdict
                verdict.certificate[(k1, k2)] = (u, u)
                continue
            if prop is SetProperty.GEI:
                if inside != UNIT:
                    verdict.status = Status.FAILS
                    verdict.witness = _leave_witness(space, k1, k2, inside, local=False)
                    return verdict
                verdict.certificate[(k1, k2)] = (Fraction(1), Fraction(1))
            else:
                r = reach(inside)
                if r is None:
                    verdict.status = Status.FAILS
                    verdict.witness = _leave_witness(space, k1, k2, inside, local=True)
                    return verdict
                verdict.certificate[(k1, k2)] = (r[0], r[0])
        except NoPieceMatches as exc:
            inconclusive.append(f"({fmt(k1)}, {fmt(k2)}): {exc}")
    if inconclusive:
        verdict.status = Status.INCONCLUSIVE
        verdict.reason = "; ".join(inconclusive[:5])
    return verdict


def _local_from_samples(ts, flags) -> Optional[Fraction]:
    """Largest sample u with every sample in [0, u] passing; None when t = 0
    or the smallest positive sample fails."""
    if not flags[0] or not flags[1]:
        return None
    u = Fraction(0)
    for t, ok in zip(ts, flags):
        if not ok:
            break
        u = t
    return u


def _sampled_set(space, region, k1, k2, local, t_samples):
    x, y = space.image(k1), space.image(k2)
    ts = dyadic_samples(t_samples) if local else global_samples(t_samples)
    flags = [space.gamma(x, y, t) in region for t in ts]
    if not local:
        bad = [t for t, ok in zip(ts, flags) if not ok]
        return (None, bad[-1]) if bad else (Fraction(1), None)
    u = _local_from_samples(ts, flags)
    if u is None:
        return None, ts[0] if not flags[0] else ts[1]
    return u, None


def _check_product(space, epi, probes, t_samples, pairs, alpha_offsets) -> SetVerdict:
    """GLEI of {(k, a): k in base, f(k) <= a} along (gamma(t), t*a1 + (1-t)*a2)."""
    base, fn = epi.base, epi.fn
    verdict = SetVerdict(Status.HOLDS, SetProperty.GLEI_PRODUCT)
    points = [p for p in as_points(probes) if p in base]
    todo = list(_pairs(points)) if pairs is None else [(Q(a), Q(b)) for a, b in pairs]
    inconclusive = []
    for k1, k2 in todo:
        try:
            f1, f2 = fn(k1), fn(k2)
            alphas1 = sorted({min(f1 + Q(d), epi.cap) if epi.cap is not None else f1 + Q(d) for d in alpha_offsets} | {f1})
            alphas2 = sorted({min(f2 + Q(d), epi.cap) if epi.cap is not None else f2 + Q(d) for d in alpha_offsets} | {f2})
            try:
                curve = space.pair_curve(k1, k2)
                in_base = curve.within(base)
                lifted = fn.along(curve)
            except NotExact:
                verdict.sampled_pairs += 1
                in_base = lifted = None
            for a1, a2 in itertools.product(alphas1, alphas2):
                if a1 < f1 or a2 < f2:
                    continue
                verdict.pairs_checked += 1
                height = (a2, a1 - a2)  # t*a1 + (1 - t)*a2
                if lifted is None:
                    x, y = space.image(k1), space.image(k2)
                    ts = dyadic_samples(t_samples)
                    flags = []
                    for t in ts:
                        g = space.gamma(x, y, t)
                        flags.append(g in base and fn(g) <= a2 + t * (a1 - a2))
                    u = _local_from_samples(ts, flags)
                    if u is None:
                        t = ts[0] if not flags[0] else ts[1]
                        verdict.status = Status.FAILS
                        verdict.witness = SetWitness(
                            k1, k2, t, space.gamma(x, y, t), "lifted point outside epigraph (sampled)", a1, a2
                        )
                        return verdict
                    continue
                inside = in_base.intersect(lifted.sub_upoly(height).solve("<="))
                r = reach(inside)
                if r is None:
                    bad = UNIT.minus(inside)
                    t = pick_t(bad, True)
                    pt = space.gamma(space.image(k1), space.image(k2), t)
                    verdict.status = Status.FAILS
                    verdict.witness = SetWitness(k1, k2, t, pt, "lifted point outside epigraph", a1, a2)
                    return verdict
                prev = verdict.certificate.get((k1, k2))
                u = r[0] if prev is None else min(prev[0], r[0])
                verdict.certificate[(k1, k2)] = (u, u)
        except NoPieceMatches as exc:
            inconclusive.append(f"({fmt(k1)}, {fmt(k2)}): {exc}")
    if inconclusive:
        verdict.status = Status.INCONCLUSIVE
        verdict.reason = "; ".join(inconclusive[:5])
    return verdict
