"""Fractional multiobjective programs: minimize (f_i/g_i)_i over
K = {k in K0 : h_j(k) <= 0}, plus grid-based weak-efficiency oracles.

All efficiency statements are "grid-weak-efficiency": a grid point is kept
when no feasible grid point is strictly better in every component.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Sequence

from .funclass import combine, polynomial_fn
from .rational import Q, fmt
from .region import Region
from .report import ConsistencyReport


class NonpositiveDenominator(ValueError):
    def __init__(self, index: int, point, value):
        self.index, self.point, self.value = index, point, value
        super().__init__(f"g_{index + 1}({fmt(point)}) = {fmt(value)} is not positive")


class OracleMode(str, enum.Enum):
    FRACTIONAL = "fractional"
    PARAMETRIC = "parametric"


@dataclass(frozen=True, eq=False)
class VfpInstance:
    f: tuple
    g: tuple
    h: tuple
    K0: Region
    label: str = "vfp"

    def __post_init__(self):
        if len(self.f) != len(self.g) or not self.f:
            raise ValueError("need p >= 1 objectives with matching numerators and denominators")

    @property
    def p(self) -> int:
        return len(self.f)

    @property
    def q(self) -> int:
        return len(self.h)

    def check_denominators(self, probes) -> None:
        for k in probes:
            k = Q(k)
            if k not in self.K0:
                continue
            for i, g in enumerate(self.g):
                v = g(k)
                if not v > 0:
                    raise NonpositiveDenominator(i, k, v)


@dataclass(frozen=True)
class Feasibility:
    feasible: bool
    outside_K0: bool = False
    violated: tuple = ()  # 0-based constraint indices with h_j > 0

    def __bool__(self) -> bool:
        return self.feasible


def feasible(inst: VfpInstance, k) -> Feasibility:
    k = Q(k)
    out = k not in inst.K0
    bad = tuple(j for j, h in enumerate(inst.h) if h(k) > 0)
    return Feasibility(not out and not bad, out, bad)


def objective_ratio(inst: VfpInstance, k) -> tuple:
    k = Q(k)
    vals = []
    for i, (f, g) in enumerate(zip(inst.f, inst.g)):
        d = g(k)
        if not d > 0:
            raise NonpositiveDenominator(i, k, d)
        vals.append(f(k) / d)
    return tuple(vals)


def lambda_star(inst: VfpInstance, k) -> tuple:
    return objective_ratio(inst, k)


def active_set(inst: VfpInstance, k) -> tuple:
    """0-based indices j with h_j(k) = 0."""
    k = Q(k)
    return tuple(j for j, h in enumerate(inst.h) if h(k) == 0)


def inactive_set(inst: VfpInstance, k) -> tuple:
    act = set(active_set(inst, k))
    return tuple(j for j in range(inst.q) if j not in act)


def parametric_objective(inst: VfpInstance, lam: Sequence) -> tuple:
    """The functions f_i - lam_i g_i."""
    return tuple(combine((1, f), (-Q(l), g), label=f"{f.label}-{fmt(Q(l))}*{g.label}") for f, g, l in zip(inst.f, inst.g, lam))


@dataclass
class OracleResult:
    mode: OracleMode
    efficient: list
    dominated: dict = field(default_factory=dict)  # k -> dominating grid point
    infeasible: list = field(default_factory=list)
    scope: str = "grid-weak-efficiency"

    def __contains__(self, k) -> bool:
        return Q(k) in self.efficient

    def as_dict(self) -> dict:
        return {
            "mode": self.mode.value,
            "scope": self.scope,
            "efficient": [fmt(k) for k in self.efficient],
            "dominated": {fmt(k): fmt(w) for k, w in self.dominated.items()},
            "infeasible": [fmt(k) for k in self.infeasible],
        }


def _values(inst: VfpInstance, k: Fraction, mode: OracleMode, lam) -> tuple:
    if mode is OracleMode.FRACTIONAL:
        return objective_ratio(inst, k)
    return tuple(f(k) - l * g(k) for f, g, l in zip(inst.f, inst.g, lam))


def weak_efficient_oracle(inst: VfpInstance, grid, mode=OracleMode.FRACTIONAL, lam: Optional[Sequence] = None) -> OracleResult:
    """Brute-force grid-weak-efficiency under strict componentwise domination."""
    mode = OracleMode(mode)
    if mode is OracleMode.PARAMETRIC:
        if lam is None or len(lam) != inst.p:
            raise ValueError("parametric mode needs a lambda vector of length p")
        lam = [Q(l) for l in lam]
    pts = sorted({Q(k) for k in grid})
    result = OracleResult(mode, [])
    feas = []
    for k in pts:
        (feas if feasible(inst, k) else result.infeasible).append(k)
    vals = {k: _values(inst, k, mode, lam) for k in feas}
    for k in feas:
        vk = vals[k]
        dom = next((w for w in feas if all(a < b for a, b in zip(vals[w], vk))), None)
        if dom is None:
            result.efficient.append(k)
        else:
            result.dominated[k] = dom
    return result


def crosscheck_lemma1(inst: VfpInstance, grid) -> ConsistencyReport:
    """Fractional weak efficiency of k* vs parametric weak efficiency at lambda*(k*)."""
    report = ConsistencyReport("fractional-vs-parametric")
    frac = weak_efficient_oracle(inst, grid, OracleMode.FRACTIONAL)
    feas = sorted(set(frac.efficient) | set(frac.dominated))
    for k in feas:
        lam = lambda_star(inst, k)
        par = weak_efficient_oracle(inst, grid, OracleMode.PARAMETRIC, lam)
        a, b = k in frac.efficient, k in par.efficient
        report.rows.append({"k": k, "lambda": list(lam), "fractional": a, "parametric": b})
        if a != b:
            report.flag({"k": k, "fractional": a, "parametric": b, "lambda": list(lam)})
    report.notes.append("scope: grid-weak-efficiency")
    return report


def instance_I1() -> VfpInstance:
    return VfpInstance(
        (polynomial_fn("x", "f1"),),
        (polynomial_fn("2 - x", "g1"),),
        (polynomial_fn("x - 1", "h1"),),
        Region.closed(0, 1),
        "I1",
    )


def instance_I2() -> VfpInstance:
    return VfpInstance(
        (polynomial_fn("x", "f1"), polynomial_fn("1 - x", "f2")),
        (polynomial_fn("1", "g1"), polynomial_fn("1", "g2")),
        (polynomial_fn("x - 1", "h1"),),
        Region.closed(0, 1),
        "I2",
    )


def grid_points(region: Region, step) -> list:
    """Exact grid of ``region`` anchored at each component's left end, plus right ends."""
    step = Q(step)
    if step <= 0:
        raise ValueError("grid step must be positive")
    pts = set()
    for iv in region:
        if iv.lo is None or iv.hi is None:
            raise ValueError("grid needs a bounded region")
        x = iv.lo
        while x <= iv.hi:
            if x in iv:
                pts.add(x)
            x += step
        if iv.hi in iv:
            pts.add(iv.hi)
    return sorted(pts)
