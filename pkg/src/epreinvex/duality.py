"""The dual program as a constraint system: dual feasibility, a weak-duality
scanner and a converse-duality check, each cross-checked against the
grid oracle.

A dual point (alpha, beta, lam, zeta) is feasible when, for every probe k,

    sum_i alpha_i (f_i' - zeta_i g_i') + sum_j beta_j h_j' >= 0

(semiderivatives at lam toward k), f_i(lam) - zeta_i g_i(lam) >= 0 and
beta_j h_j(lam) >= 0.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Sequence

from .certify import _weighted
from .funclass import FnClass, check_class, combine, polynomial_fn
from .geometry import EGeodesicSpace
from .rational import Q, fmt
from .region import Region
from .report import ConsistencyReport, render
from .sets import Status
from .vfp import VfpInstance, feasible, lambda_star, objective_ratio, weak_efficient_oracle


class PremiseViolated(ValueError):
    pass


@dataclass(frozen=True)
class DualPoint:
    alpha: tuple
    beta: tuple
    lam: Fraction
    zeta: tuple

    def __post_init__(self):
        if not self.alpha or any(a <= 0 for a in self.alpha):
            raise ValueError("alpha must be componentwise positive")
        if any(b < 0 for b in self.beta):
            raise ValueError("beta must be nonnegative")
        if any(z < 0 for z in self.zeta):
            raise ValueError("zeta must be nonnegative")
        if len(self.zeta) != len(self.alpha):
            raise ValueError("alpha and zeta must have the same length")

    @classmethod
    def make(cls, alpha, beta, lam, zeta) -> "DualPoint":
        return cls(tuple(Q(a) for a in alpha), tuple(Q(b) for b in beta), Q(lam), tuple(Q(z) for z in zeta))

    def scaled(self, c) -> "DualPoint":
        c = Q(c)
        return DualPoint(tuple(c * a for a in self.alpha), tuple(c * b for b in self.beta), self.lam, self.zeta)

    def as_dict(self) -> dict:
        return {
            "alpha": [fmt(a) for a in self.alpha],
            "beta": [fmt(b) for b in self.beta],
            "lambda": fmt(self.lam),
            "zeta": [fmt(z) for z in self.zeta],
        }


@dataclass
class DualVerdict:
    status: Status
    condition: Optional[str] = None
    witness: Optional[dict] = None
    divergent_rows: list = field(default_factory=list)

    @property
    def holds(self) -> bool:
        return self.status is Status.HOLDS

    def as_dict(self) -> dict:
        d = {"status": self.status.value}
        if self.condition:
            d["condition"] = self.condition
            d["witness"] = render(self.witness)
        if self.divergent_rows:
            d["divergent_rows"] = render(self.divergent_rows)
        return d


def _check_dims(inst: VfpInstance, d: DualPoint) -> None:
    if len(d.alpha) != inst.p or len(d.beta) != inst.q:
        raise ValueError(f"dual point dimensions ({len(d.alpha)}, {len(d.beta)}) do not match p={inst.p}, q={inst.q}")


def dual_feasible(inst: VfpInstance, space: EGeodesicSpace, d: DualPoint, probes) -> DualVerdict:
    _check_dims(inst, d)
    lam = d.lam
    if lam not in inst.K0:
        return DualVerdict(Status.FAILS, "DOMAIN", {"lambda": lam})
    if space.image(lam) != lam:
        return DualVerdict(Status.FAILS, "FIXEDPOINT", {"lambda": lam, "E(lambda)": space.image(lam)})
    for i, (f, g, z) in enumerate(zip(inst.f, inst.g, d.zeta)):
        v = f(lam) - z * g(lam)
        if v < 0:
            return DualVerdict(Status.FAILS, "RATIO", {"i": i, "value": v})
    for j, (h, b) in enumerate(zip(inst.h, d.beta)):
        v = b * h(lam)
        if v < 0:
            return DualVerdict(Status.FAILS, "MULTIPLIER", {"j": j, "value": v})
    terms = []
    for a, z, f, g in zip(d.alpha, d.zeta, inst.f, inst.g):
        terms += [(a, f), (-a * z, g)]
    terms += list(zip(d.beta, inst.h))
    verdict = DualVerdict(Status.HOLDS)
    for k in sorted({Q(k) for k in probes if Q(k) in inst.K0}):
        val = _weighted(terms, space, lam, k)
        if val is None:
            verdict.divergent_rows.append({"k": k})
        elif val < 0:
            return DualVerdict(Status.FAILS, "DERIVATIVE", {"k": k, "value": val if not isinstance(val, float) else "-inf"})
    if verdict.divergent_rows:
        verdict.status = Status.INCONCLUSIVE
    return verdict


def dual_hypotheses(inst: VfpInstance, space: EGeodesicSpace, d: DualPoint, probes) -> list:
    """Class checks behind weak duality: GpSLEP of sum alpha(f - zeta g),
    GqSLEP of sum beta h.  Returns rows with status and witness."""
    pts = sorted({Q(k) for k in probes if Q(k) in inst.K0})
    parts = []
    for a, z, f, g in zip(d.alpha, d.zeta, inst.f, inst.g):
        parts += [(a, f), (-a * z, g)]
    obj = combine(*parts, label="sum alpha(f - zeta g)")
    cons = combine(*zip(d.beta, inst.h), label="sum beta h")
    rows = []
    for name, fn, cls in (("gpslep", obj, FnClass.GPSLEP), ("gqslep", cons, FnClass.GQSLEP)):
        v = check_class(fn, space, inst.K0, cls, pts)
        rows.append({"hypothesis": name, "function": fn.label, "status": v.status.value, "witness": v.witness})
    return rows


def weak_duality_scan(
    inst: VfpInstance,
    space: EGeodesicSpace,
    primal_grid,
    duals: Sequence[DualPoint],
    probes=None,
) -> ConsistencyReport:
    """Look for feasible k with f_i(k)/g_i(k) < zeta_i for every i.

    Each violation names the failed hypothesis checks; a violation with all
    hypotheses passing would contradict weak duality.
    """
    report = ConsistencyReport("weak-duality")
    probes = primal_grid if probes is None else probes
    pts = [Q(k) for k in sorted({Q(k) for k in primal_grid}) if feasible(inst, Q(k))]
    for n, d in enumerate(duals):
        fv = dual_feasible(inst, space, d, probes)
        if not fv.holds:
            report.notes.append(f"dual {n} skipped: not feasible ({fv.condition})")
            continue
        hyp = None
        for k in pts:
            ratios = objective_ratio(inst, k)
            if all(r < z for r, z in zip(ratios, d.zeta)):
                if hyp is None:
                    hyp = dual_hypotheses(inst, space, d, probes)
                failed = [r for r in hyp if r["status"] != "holds"]
                report.flag(
                    {
                        "dual": n,
                        "k": k,
                        "ratios": list(ratios),
                        "zeta": list(d.zeta),
                        "failed_hypotheses": failed,
                        "theorem_counterexample": not failed,
                    }
                )
        report.rows.append({"dual": n, "scanned": len(pts)})
    return report


def converse_duality_check(
    inst: VfpInstance,
    space: EGeodesicSpace,
    d: DualPoint,
    kbar,
    grid,
    probes=None,
) -> ConsistencyReport:
    """With zeta = lambda*(lam) = lambda*(kbar), kbar must be grid-weakly efficient."""
    kbar = Q(kbar)
    probes = grid if probes is None else probes
    report = ConsistencyReport("converse-duality")
    if not feasible(inst, kbar):
        raise PremiseViolated(f"{fmt(kbar)} is not primal feasible")
    fv = dual_feasible(inst, space, d, probes)
    if not fv.holds:
        raise PremiseViolated(f"dual point not feasible ({fv.condition})")
    for name, point in (("lambda", d.lam), ("kbar", kbar)):
        ls = lambda_star(inst, point)
        if tuple(ls) != tuple(d.zeta):
            raise PremiseViolated(
                f"zeta = ({', '.join(fmt(z) for z in d.zeta)}) but ratio at {name} = {fmt(point)} is ({', '.join(fmt(v) for v in ls)})"
            )
    pts = sorted({Q(k) for k in probes if Q(k) in inst.K0})
    failed = []
    for i, (f, g, z) in enumerate(zip(inst.f, inst.g, d.zeta)):
        fn = combine((1, f), (-z, g), label=f"f{i + 1} - zeta{i + 1} g{i + 1}")
        v = check_class(fn, space, inst.K0, FnClass.GSLEP, pts)
        report.rows.append({"hypothesis": "gslep", "function": fn.label, "status": v.status.value})
        if not v.holds:
            failed.append(fn.label)
    for h in inst.h:
        v = check_class(h, space, inst.K0, FnClass.GSLEP, pts)
        report.rows.append({"hypothesis": "gslep", "function": h.label, "status": v.status.value})
        if not v.holds:
            failed.append(h.label)
    if failed:
        report.notes.append("hypotheses fail on probes (" + ", ".join(failed) + "); nothing to test")
        return report
    oracle = weak_efficient_oracle(inst, sorted({Q(k) for k in grid} | {kbar}))
    if kbar not in oracle.efficient:
        report.flag({"point": kbar, "dominated_by": oracle.dominated[kbar]})
    return report


def violating_instance() -> tuple:
    """Euclidean instance whose objective combination is not GpSLEP and whose
    feasible dual point is beaten by the primal: (instance, dual point)."""
    inst = VfpInstance(
        (polynomial_fn("-x^2", "f1"),),
        (polynomial_fn("1", "g1"),),
        (polynomial_fn("x - 1", "h1"),),
        Region.closed(-1, 1),
        "nonpseudo",
    )
    return inst, DualPoint.make([1], [0], 0, [0])
