"""E-geodesic spaces: a carrier with a self-map E, a kernel eta and a curve
family gamma(x, y, t) running from base y (t = 0) toward x.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Sequence

from .expr import parse_map
from .piecewise import NoPieceMatches, PiecewiseMap, PPoly
from .poly import T, uconst
from .rational import Q, dyadic
from .region import Region

UNIT = Region.closed(0, 1)


class ParameterOutOfRange(ValueError):
    pass


@dataclass(frozen=True)
class EGeodesicSpace:
    label: str
    E: PiecewiseMap
    eta: PiecewiseMap
    gamma: PiecewiseMap
    dimension: int = 1
    _curves: dict = field(default_factory=dict, compare=False, repr=False, hash=False)
    _images: dict = field(default_factory=dict, compare=False, repr=False, hash=False)

    def __post_init__(self):
        if (self.E.arity, self.eta.arity, self.gamma.arity) != (1, 2, 3):
            raise ValueError("E, eta, gamma must have arities 1, 2, 3")
        if self.dimension != 1:
            raise NotImplementedError("only one-dimensional carriers are supported")

    def __hash__(self):
        return hash(self.label)

    def image(self, k: Fraction) -> Fraction:
        try:
            return self._images[k]
        except KeyError:
            v = self._images[k] = self.E(k)
            return v

    def curve(self, x: Fraction, y: Fraction) -> PPoly:
        """gamma(x, y, .) on [0, 1] as an exact piecewise polynomial."""
        key = (x, y)
        try:
            return self._curves[key]
        except KeyError:
            c = self._curves[key] = self.gamma.along((uconst(x), uconst(y), T), UNIT)
            return c

    def pair_curve(self, k1: Fraction, k2: Fraction) -> PPoly:
        """The curve gamma_{E(k1), E(k2)} used by every defining inequality."""
        return self.curve(self.image(k1), self.image(k2))

    def breakpoints(self) -> list[Fraction]:
        pts = set(self.E.breakpoints(0))
        for m in (self.eta, self.gamma):
            pts.update(m.breakpoints(0))
            pts.update(m.breakpoints(1))
        return sorted(pts)


def eval_E(space: EGeodesicSpace, k) -> Fraction:
    return space.E(Q(k))


def eval_eta(space: EGeodesicSpace, k, i) -> Fraction:
    return space.eta(Q(k), Q(i))


def eval_gamma(space: EGeodesicSpace, x, y, t) -> Fraction:
    t = Q(t)
    if not 0 <= t <= 1:
        raise ParameterOutOfRange(f"t must lie in [0, 1], got {t}")
    return space.gamma(Q(x), Q(y), t)


@dataclass
class ValidationReport:
    space: str
    pairs_checked: int
    base_violations: list = field(default_factory=list)  # (k1, k2, gamma(.,.,0), E(k2))
    velocity_rows: int = 0
    velocity_nonconvergent: int = 0
    max_velocity_deviation: float = 0.0
    velocity_violations: list = field(default_factory=list)  # (k1, k2, quotient, eta)
    errors: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not (self.base_violations or self.velocity_violations or self.errors)


def _initial_velocity(space: EGeodesicSpace, x: Fraction, y: Fraction) -> Optional[float]:
    g0 = space.gamma(x, y, 0)
    prev = None
    for k in range(49):
        t = dyadic(4 + k)
        q = float((space.gamma(x, y, t) - g0) / t)
        if prev is not None and abs(q - prev) < 1e-9:
            return q
        prev = q
    return None


def validate_space(space: EGeodesicSpace, probes: Sequence, tol: float = 1e-6) -> ValidationReport:
    """Check gamma(E(k1), E(k2), 0) = E(k2) and the initial velocity against eta."""
    probes = [Q(p) for p in probes]
    if not probes:
        raise ValueError("probe set is empty")
    report = ValidationReport(space.label, 0)
    for k1, k2 in itertools.product(probes, repeat=2):
        report.pairs_checked += 1
        try:
            x, y = space.image(k1), space.image(k2)
            base = space.gamma(x, y, 0)
            if base != y:
                report.base_violations.append((k1, k2, base, y))
            vel = _initial_velocity(space, x, y)
            if vel is None:
                report.velocity_nonconvergent += 1
                continue
            report.velocity_rows += 1
            dev = abs(vel - float(space.eta(x, y)))
            report.max_velocity_deviation = max(report.max_velocity_deviation, dev)
            if dev > tol:
                report.velocity_violations.append((k1, k2, vel, space.eta(x, y)))
        except NoPieceMatches as exc:
            report.errors.append((k1, k2, str(exc)))
    return report


def make_space(label: str, E, eta, gamma) -> EGeodesicSpace:
    """Build a space from ``[[guard, body], ...]`` piece lists."""
    return EGeodesicSpace(
        label,
        parse_map(E, ["x"], f"{label}.E"),
        parse_map(eta, ["x", "y"], f"{label}.eta"),
        parse_map(gamma, ["x", "y", "t"], f"{label}.gamma"),
    )


EUCLID_PIECES = dict(
    E=[["true", "x"]],
    eta=[["true", "x - y"]],
    gamma=[["true", "y + t*(x - y)"]],
)

# Overlapping guards resolve top to bottom; this order gives gamma_{-1,0}(t) = -t.
EXAMPLE1_PIECES = dict(
    E=[["-2 <= x <= 2", "x^2"], ["x < -2 or x > 2", "-1"]],
    eta=[
        ["x >= 0 and y >= 0 or x <= 0 and y <= 0", "x - y"],
        ["x > 0 and y <= 0 or x >= 0 and y < 0", "-1 - y"],
        ["x < 0 and y >= 0 or x <= 0 and y > 0", "1 - y"],
    ],
    gamma=[
        ["x >= 0 and y >= 0 or x <= 0 and y <= 0", "y + t*(x - y)"],
        ["x > 0 and y <= 0 or x >= 0 and y < 0", "y + t*(-1 - y)"],
        ["x < 0 and y >= 0 or x <= 0 and y > 0", "y + t*(1 - y)"],
    ],
)

EXAMPLE2_PIECES = dict(
    E=[["x < 0", "0"], ["1 < x <= 2", "1"], ["0 <= x <= 1 or x > 2", "x"]],
    eta=[["x == y", "0"], ["x != y", "1 - x"]],
    gamma=[["x == y", "y"], ["x != y", "y + t*(1 - x)"]],
)

BUILTIN_SPACES = {
    "euclid": EUCLID_PIECES,
    "example-1": EXAMPLE1_PIECES,
    "example-2": EXAMPLE2_PIECES,
}
SPACE_ALIASES = {"ex1": "example-1", "ex2": "example-2", "euclidean": "euclid"}

_builtin_cache: dict[str, EGeodesicSpace] = {}


def builtin_space(name: str) -> EGeodesicSpace:
    name = SPACE_ALIASES.get(name, name)
    if name not in BUILTIN_SPACES:
        raise KeyError(f"unknown built-in space {name!r}")
    if name not in _builtin_cache:
        _builtin_cache[name] = make_space(name, **BUILTIN_SPACES[name])
    return _builtin_cache[name]
