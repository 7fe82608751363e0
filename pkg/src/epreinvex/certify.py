"""Sufficient optimality conditions for weak efficiency, checked on probes.

Condition ids:

* FIXEDPOINT  E(kbar) = kbar
* SIGNS       zeta >= 0, xi >= 0
* EQ6 / EQ18  complementary slackness xi . h(kbar) = 0
* EQ4         sum_i zeta_i f_i' + sum_j xi_j h_j' >= 0 toward every probe
* EQ5         g_i' <= 0 toward every probe
* EQ17        sum_i zeta_i (f_i' - lam_i g_i') + sum_{j active} xi_j h_j' >= 0

Derivatives are semiderivatives at kbar toward the probe (see ``semidiff``).
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Sequence

from .funclass import FnClass, check_class, combine
from .geometry import EGeodesicSpace
from .rational import Q, fmt
from .report import ConsistencyReport, render
from .semidiff import Kind, semiderivative
from .vfp import VfpInstance, active_set, feasible, lambda_star, parametric_objective, weak_efficient_oracle

class CertKind(str, enum.Enum):
    BASIC = "basic"
    PARAMETRIC = "parametric"
    SCALARIZED_GSLEP = "scalarized_gslep"
    SCALARIZED_GPSLEP = "scalarized_gpslep"
    COROLLARY = "corollary"


BASIC_FAMILY = {CertKind.BASIC, CertKind.SCALARIZED_GSLEP}


class DimensionMismatch(ValueError):
    pass


class InfeasiblePoint(ValueError):
    pass


@dataclass(frozen=True)
class Certificate:
    point: Fraction
    zeta: tuple
    xi: tuple
    kind: CertKind = CertKind.BASIC

    @classmethod
    def make(cls, point, zeta, xi, kind="basic") -> "Certificate":
        return cls(Q(point), tuple(Q(z) for z in zeta), tuple(Q(x) for x in xi), CertKind(kind))

    def scaled(self, c) -> "Certificate":
        c = Q(c)
        return Certificate(self.point, tuple(c * z for z in self.zeta), tuple(c * x for x in self.xi), self.kind)

    def as_dict(self) -> dict:
        return {
            "point": fmt(self.point),
            "zeta": [fmt(z) for z in self.zeta],
            "xi": [fmt(x) for x in self.xi],
            "kind": self.kind.value,
        }


class CertStatus(str, enum.Enum):
    CERTIFIED = "certified"
    REFUTED = "refuted"
    INCONCLUSIVE = "inconclusive"


@dataclass
class CertVerdict:
    status: CertStatus
    condition: Optional[str] = None
    witness: Optional[dict] = None
    log: list = field(default_factory=list)
    warnings: list = field(default_factory=list)
    divergent_rows: list = field(default_factory=list)

    @property
    def certified(self) -> bool:
        return self.status is CertStatus.CERTIFIED

    def as_dict(self) -> dict:
        d = {"status": self.status.value, "log": render(self.log), "warnings": list(self.warnings)}
        if self.condition is not None:
            d["condition"] = self.condition
            d["witness"] = render(self.witness)
        if self.divergent_rows:
            d["divergent_rows"] = render(self.divergent_rows)
        return d


def _deriv(fn, space, base, k):
    """Semiderivative as Fraction, +-inf float, or None when divergent."""
    d = semiderivative(fn, space, base, k)
    if d.kind is Kind.FINITE:
        return d.value
    if d.kind is Kind.DIVERGENT:
        return None
    return math.inf if d.kind is Kind.PLUS_INF else -math.inf


def _weighted(terms, space, base, k):
    """sum c * fn' over terms with c != 0, in extended reals; None if undefined."""
    total = Fraction(0)
    infs = set()
    for c, fn in terms:
        if c == 0:
            continue
        d = _deriv(fn, space, base, k)
        if d is None:
            return None
        if isinstance(d, float):
            infs.add(math.copysign(1, c) * d)
        else:
            total += c * d
    if len(infs) > 1:
        return None
    return infs.pop() if infs else total


def _check_dims(inst: VfpInstance, cert: Certificate) -> None:
    if len(cert.zeta) != inst.p or len(cert.xi) != inst.q:
        raise DimensionMismatch(
            f"certificate has |zeta|={len(cert.zeta)}, |xi|={len(cert.xi)}; instance has p={inst.p}, q={inst.q}"
        )


def _feasible_probes(inst, probes):
    return sorted({Q(k) for k in probes if feasible(inst, Q(k))})


def check_certificate(inst: VfpInstance, space: EGeodesicSpace, cert: Certificate, probes) -> CertVerdict:
    """Check the certificate's conditions in a fixed order; the first failing
    condition is reported with a re-verifiable witness."""
    _check_dims(inst, cert)
    kb = cert.point
    if not feasible(inst, kb):
        raise InfeasiblePoint(f"{fmt(kb)} is not feasible")
    v = CertVerdict(CertStatus.CERTIFIED)
    basic = cert.kind in BASIC_FAMILY
    slack_id = "EQ6" if basic else "EQ18"
    main_id = "EQ4" if basic else "EQ17"

    img = space.image(kb)
    if img != kb:
        return _refute(v, "FIXEDPOINT", {"point": kb, "E(point)": img})
    v.log.append({"condition": "FIXEDPOINT", "ok": True})

    bad = [("zeta", i, z) for i, z in enumerate(cert.zeta) if z < 0] + [("xi", j, x) for j, x in enumerate(cert.xi) if x < 0]
    if bad:
        name, idx, val = bad[0]
        return _refute(v, "SIGNS", {"vector": name, "index": idx, "value": val})
    v.log.append({"condition": "SIGNS", "ok": True})
    if all(z == 0 for z in cert.zeta):
        v.warnings.append("zeta is zero; the sufficiency argument needs some zeta_i > 0")

    hval = [h(kb) for h in inst.h]
    slack = sum((x * hv for x, hv in zip(cert.xi, hval)), Fraction(0))
    if slack != 0:
        return _refute(v, slack_id, {"xi.h": slack, "h": hval})
    v.log.append({"condition": slack_id, "ok": True})

    pts = _feasible_probes(inst, probes)
    if basic:
        terms = [(z, f) for z, f in zip(cert.zeta, inst.f)] + [(x, h) for x, h in zip(cert.xi, inst.h)]
    else:
        lam = lambda_star(inst, kb)
        act = set(active_set(inst, kb))
        terms = [(z, fl) for z, fl in zip(cert.zeta, parametric_objective(inst, lam))]
        terms += [(x, h) for j, (x, h) in enumerate(zip(cert.xi, inst.h)) if j in act]
    for k in pts:
        val = _weighted(terms, space, kb, k)
        if val is None:
            v.divergent_rows.append({"condition": main_id, "k": k})
            continue
        if val < 0:
            return _refute(v, main_id, {"k": k, "value": val if not isinstance(val, float) else "-inf"})
    v.log.append({"condition": main_id, "ok": True, "probes": len(pts)})

    if basic:
        for k in pts:
            for i, g in enumerate(inst.g):
                d = _deriv(g, space, kb, k)
                if d is None:
                    v.divergent_rows.append({"condition": "EQ5", "k": k, "i": i})
                    continue
                if d > 0:
                    return _refute(v, "EQ5", {"k": k, "i": i, "value": d if not isinstance(d, float) else "+inf"})
        v.log.append({"condition": "EQ5", "ok": True, "probes": len(pts)})

    if v.divergent_rows:
        v.status = CertStatus.INCONCLUSIVE
    return v


def _refute(v: CertVerdict, cond: str, witness: dict) -> CertVerdict:
    v.status = CertStatus.REFUTED
    v.condition = cond
    v.witness = witness
    v.log.append({"condition": cond, "ok": False})
    return v


def verify_refutation(inst: VfpInstance, space: EGeodesicSpace, cert: Certificate, verdict: CertVerdict) -> bool:
    """Recompute a Refuted verdict's witness from scratch."""
    if verdict.status is not CertStatus.REFUTED:
        return False
    w, kb = verdict.witness, cert.point
    c = verdict.condition
    if c == "FIXEDPOINT":
        return space.image(kb) != kb
    if c == "SIGNS":
        return (cert.zeta if w["vector"] == "zeta" else cert.xi)[w["index"]] < 0
    if c in ("EQ6", "EQ18"):
        return sum((x * h(kb) for x, h in zip(cert.xi, inst.h)), Fraction(0)) != 0
    if c == "EQ5":
        return _deriv(inst.g[w["i"]], space, kb, w["k"]) > 0
    return check_certificate(inst, space, cert, [w["k"]]).condition == c


# -- hypotheses ------------------------------------------------------------------


@dataclass
class HypothesisReport:
    rows: list = field(default_factory=list)

    def add(self, name, subject, status, witness=None, implicit=False) -> None:
        self.rows.append({"hypothesis": name, "function": subject, "status": status, "witness": witness, "implicit": implicit})

    @property
    def stated_pass(self) -> bool:
        return all(r["status"] == "holds" for r in self.rows if not r["implicit"])

    @property
    def all_pass(self) -> bool:
        return all(r["status"] == "holds" for r in self.rows)

    def failures(self) -> list:
        return [r for r in self.rows if r["status"] != "holds"]

    def as_dict(self) -> dict:
        return {"all_pass": self.all_pass, "stated_pass": self.stated_pass, "rows": render(self.rows)}


def _class_row(report, name, fn, cls, space, region, pts):
    verdict = check_class(fn, space, region, cls, pts)
    report.add(name, fn.label, verdict.status.value, verdict.witness)


def verify_hypotheses(inst: VfpInstance, space: EGeodesicSpace, cert: Certificate, probes) -> HypothesisReport:
    """Run the class checkers that the certificate's theorem assumes.

    Implicit rows (marked ``implicit``) record assumptions the sufficiency
    argument needs without stating them.
    """
    _check_dims(inst, cert)
    kb = cert.point
    region = inst.K0
    pts = sorted({Q(k) for k in probes if Q(k) in region})
    rep = HypothesisReport()
    lam = lambda_star(inst, kb)
    act = set(active_set(inst, kb))
    kind = cert.kind
    if kind is CertKind.BASIC:
        for f in inst.f:
            _class_row(rep, "gslep", f, FnClass.GSLEP, space, region, pts)
        for h in inst.h:
            _class_row(rep, "gslep", h, FnClass.GSLEP, space, region, pts)
        for g in inst.g:
            _class_row(rep, "preincave", g, FnClass.PREINCAVE, space, region, pts)
    elif kind is CertKind.PARAMETRIC:
        for fl in parametric_objective(inst, lam):
            _class_row(rep, "gpslep", fl, FnClass.GPSLEP, space, region, pts)
        for j in sorted(act):
            _class_row(rep, "gqslep", inst.h[j], FnClass.GQSLEP, space, region, pts)
    elif kind is CertKind.SCALARIZED_GSLEP:
        combo = combine(*zip(cert.zeta, inst.f), *zip(cert.xi, inst.h), label="zeta.f + xi.h")
        _class_row(rep, "gslep", combo, FnClass.GSLEP, space, region, pts)
    elif kind is CertKind.SCALARIZED_GPSLEP:
        parts = list(zip(cert.zeta, parametric_objective(inst, lam)))
        parts += [(cert.xi[j], inst.h[j]) for j in sorted(act)]
        combo = combine(*parts, label="zeta.(f - lam g) + xi_Q.h_Q")
        _class_row(rep, "gpslep", combo, FnClass.GPSLEP, space, region, pts)
    else:  # corollary
        for f in inst.f:
            _class_row(rep, "gslep", f, FnClass.GSLEP, space, region, pts)
        for j in sorted(act):
            _class_row(rep, "gslep", inst.h[j], FnClass.GSLEP, space, region, pts)
        for g in inst.g:
            _class_row(rep, "preincave", g, FnClass.PREINCAVE, space, region, pts)
        neg = [l for l in lam if l < 0]
        rep.add("nonneg_lambda", "lambda", "fails" if neg else "holds", {"lambda": list(lam)} if neg else None, implicit=True)

    # semidifferentiability at kbar toward every probe
    div = []
    for fn in list(inst.f) + list(inst.g) + list(inst.h):
        for k in pts:
            if semiderivative(fn, space, kb, k).kind is not Kind.FINITE:
                div.append({"function": fn.label, "k": k})
    rep.add("semidifferentiable", "f,g,h", "holds" if not div else "inconclusive", div[:5] or None)

    rep.add("zeta_nonzero", "zeta", "holds" if any(z > 0 for z in cert.zeta) else "fails", implicit=True)
    if kind in BASIC_FAMILY:
        neg = [(i, f(kb)) for i, f in enumerate(inst.f) if f(kb) < 0]
        rep.add(
            "nonneg_numerator",
            "f(kbar)",
            "fails" if neg else "holds",
            {"negative": [{"i": i, "value": v} for i, v in neg]} if neg else None,
            implicit=True,
        )
    return rep


def soundness_probe(
    inst: VfpInstance,
    space: EGeodesicSpace,
    cert: Certificate,
    grid,
    probes: Optional[Sequence] = None,
) -> ConsistencyReport:
    """When the certificate and all hypotheses pass, kbar must be grid-weakly
    efficient; anything else is a counterexample to the sufficiency claim."""
    report = ConsistencyReport("sufficiency-soundness")
    probes = grid if probes is None else probes
    verdict = check_certificate(inst, space, cert, probes)
    # hypotheses only matter once the conditions themselves hold
    hyp_pass = verify_hypotheses(inst, space, cert, probes).all_pass if verdict.certified else None
    report.rows.append({"certificate": verdict.status.value, "hypotheses_pass": hyp_pass})
    if not (verdict.certified and hyp_pass):
        report.notes.append("premises not met on probes; nothing to test")
        return report
    kb = cert.point
    oracle = weak_efficient_oracle(inst, sorted({Q(k) for k in grid} | {kb}))
    if kb not in oracle.efficient:
        report.flag({"point": kb, "dominated_by": oracle.dominated[kb], "certificate": cert.as_dict()})
    return report
