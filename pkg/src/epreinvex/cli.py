"""Command-line front end.

Exit codes: 0 holds / certified / consistent, 1 fails / refuted / violation,
2 inconclusive, 3 usage or configuration error.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import time
from fractions import Fraction
from typing import Optional, Sequence

from .certify import Certificate, CertKind, CertStatus, check_certificate, soundness_probe, verify_hypotheses
from .config import ConfigDocument, ConfigError, emit_config, parse_config
from .duality import PremiseViolated, converse_duality_check, weak_duality_scan
from .funclass import FnClass, Theorem, check_class, crosscheck_theorem
from .piecewise import NoPieceMatches
from .rational import Q, fmt
from .region import Region
from .report import render
from .semidiff import BaseNotFixedByE, semiderivative
from .sets import EmptyRegion, ProbePolicy, SetProperty, build_probes, check_set_property
from .vfp import OracleMode, crosscheck_lemma1, grid_points, weak_efficient_oracle

EXIT = {"holds": 0, "fails": 1, "inconclusive": 2}
USAGE = 3


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


# -- shared plumbing -------------------------------------------------------------


def _load_doc(path: Optional[str]) -> ConfigDocument:
    if path is None:
        return parse_config("")
    with open(path, encoding="utf-8") as fh:
        return parse_config(fh.read())


def _policy(doc: ConfigDocument, args, window: Optional[Region]) -> ProbePolicy:
    pol = doc.policy(args.probe_policy)
    step = Q(args.grid_step) if args.grid_step else pol.grid_step
    return ProbePolicy(step, pol.offset, window)


def _pairs(items: Optional[Sequence[str]]):
    if not items:
        return None
    out = []
    for s in items:
        parts = s.split(",")
        if len(parts) != 2:
            raise UsageError(f"--pair expects K1,K2, got {s!r}")
        out.append((Q(parts[0]), Q(parts[1])))
    return out


def _probe_block(probes, policy: ProbePolicy) -> dict:
    return {"count": len(probes), "step": fmt(policy.grid_step), "offset": fmt(policy.offset)}


def _locality(cert: dict, slack: Optional[dict] = None) -> list:
    rows = []
    for (k1, k2), (u, v) in sorted(cert.items()):
        row = {"k1": fmt(k1), "k2": fmt(k2), "u": fmt(u), "v": fmt(v)}
        if slack and (k1, k2) in slack:
            row["w"] = fmt(slack[(k1, k2)])
        rows.append(row)
    return rows


def emit_report(report: dict, fmt_name: str = "text") -> bytes:
    """Structured mode is canonical JSON; text mode is indented key/value lines."""
    if fmt_name == "structured":
        return (json.dumps(render(report), sort_keys=True, indent=2, ensure_ascii=False) + "\n").encode("utf-8")
    lines: list[str] = []

    def walk(value, indent):
        pad = "  " * indent
        if isinstance(value, dict):
            for k, v in value.items():
                if isinstance(v, (dict, list)) and v:
                    lines.append(f"{pad}{k}:")
                    walk(v, indent + 1)
                else:
                    lines.append(f"{pad}{k}: {_scalar(v)}")
        elif isinstance(value, list):
            for item in value:
                if isinstance(item, (dict, list)):
                    lines.append(f"{pad}-")
                    walk(item, indent + 1)
                else:
                    lines.append(f"{pad}- {_scalar(item)}")
        else:
            lines.append(pad + _scalar(value))

    walk(render(report), 0)
    return ("\n".join(lines) + "\n").encode("utf-8")


def _scalar(v) -> str:
    if v is None:
        return "-"
    if isinstance(v, bool):
        return "yes" if v else "no"
    if isinstance(v, (list, dict)):
        return "[]" if isinstance(v, list) else "{}"
    return str(v)


# -- commands --------------------------------------------------------------------


def cmd_check_set(args, doc):
    space = doc.space(args.space)
    named = doc.region(args.set)
    policy = _policy(doc, args, named.window)
    probes = build_probes(named.region, space, policy)
    verdict = check_set_property(space, named.region, args.property, probes, pairs=_pairs(args.pair))
    rep = {
        "command": f"check set --space {args.space} --set {args.set} --property {verdict.prop.value}",
        "verdict": verdict.status.value,
        "scope": verdict.scope,
        "probes": _probe_block(probes, policy),
        "pairs_checked": verdict.pairs_checked,
    }
    if verdict.witness is not None:
        rep["witness"] = verdict.witness.as_dict()
    if verdict.holds:
        rep["certificate"] = _locality(verdict.certificate)
    if verdict.reason:
        rep["reason"] = verdict.reason
    return EXIT[verdict.status.value], rep


def cmd_check_fn(args, doc):
    space = doc.space(args.space)
    fn = doc.function(args.fn)
    named = doc.region(args.set)
    policy = _policy(doc, args, named.window)
    probes = build_probes(named.region, space, policy, fn.breakpoints())
    verdict = check_class(fn, space, named.region, args.cls, probes, pairs=_pairs(args.pair))
    rep = {
        "command": f"check fn --space {args.space} --fn {args.fn} --set {args.set} --class {verdict.cls.value}",
        "verdict": verdict.status.value,
        "scope": verdict.scope,
        "probes": _probe_block(probes, policy),
        "pairs_checked": verdict.pairs_checked,
        "pairs_skipped": verdict.pairs_skipped,
    }
    if verdict.witness is not None:
        rep["witness"] = verdict.witness.as_dict()
    if verdict.holds:
        rep["certificate"] = _locality(verdict.locality, verdict.pseudo_slack)
    if verdict.reason:
        rep["reason"] = verdict.reason
    return EXIT[verdict.status.value], rep


def cmd_check_theorem(args, doc):
    space = doc.space(args.space)
    fn = doc.function(args.fn)
    named = doc.region(args.set)
    policy = _policy(doc, args, named.window)
    probes = build_probes(named.region, space, policy, fn.breakpoints())
    report = crosscheck_theorem(args.name, fn, space, named.region, probes)
    rep = {"command": f"check theorem --name {args.name} --fn {args.fn}", "probes": _probe_block(probes, policy)}
    rep.update(report.as_dict())
    rep["verdict"] = "consistent" if report.consistent else "inconsistent"
    code = 0 if report.consistent else 1
    return (2 if report.inconclusive and code == 0 else code), rep


def cmd_semidiff(args, doc):
    space = doc.space(args.space)
    fn = doc.function(args.fn)
    d = semiderivative(fn, space, args.base, args.target, args.mode, args.curve)
    rep = {
        "command": f"semidiff --fn {args.fn} --space {args.space} --base {args.base} --target {args.target}",
        "curve": args.curve,
        "semiderivative": d.as_dict(),
        "verdict": d.kind.value,
    }
    return (0 if d.kind.value != "divergent" else 2), rep


def cmd_vfp_oracle(args, doc):
    inst, _space = doc.vfp(args.vfp)
    grid = grid_points(inst.K0, args.grid_step or doc.policy(args.probe_policy).grid_step)
    if args.lemma1:
        r = crosscheck_lemma1(inst, grid)
        rep = {"command": f"vfp oracle --vfp {args.vfp} --lemma1", "grid": {"count": len(grid)}}
        rep.update(r.as_dict())
        rep["verdict"] = "consistent" if r.consistent else "inconsistent"
        return (0 if r.consistent else 1), rep
    lam = [Q(x) for x in args.lam.split(",")] if args.lam else None
    mode = OracleMode.PARAMETRIC if lam is not None else OracleMode.FRACTIONAL
    res = weak_efficient_oracle(inst, grid, mode, lam)
    rep = {"command": f"vfp oracle --vfp {args.vfp}", "grid": {"count": len(grid)}, "oracle": res.as_dict(), "verdict": "holds"}
    return 0, rep


def _cert_from_args(args, doc):
    if args.certificate:
        vname, cert = doc.certificate(args.certificate)
        return vname, cert
    if not (args.vfp and args.point is not None):
        raise UsageError("give --certificate NAME or --vfp, --point, --zeta, --xi")
    zeta = args.zeta.split(",") if args.zeta else []
    xi = args.xi.split(",") if args.xi else []
    return args.vfp, Certificate.make(args.point, zeta, xi, args.kind)


def cmd_vfp_certify(args, doc):
    vname, cert = _cert_from_args(args, doc)
    inst, space = doc.vfp(vname)
    grid = grid_points(inst.K0, args.grid_step or doc.policy(args.probe_policy).grid_step)
    verdict = check_certificate(inst, space, cert, grid)
    rep = {
        "command": f"vfp certify --vfp {vname}",
        "certificate_input": cert.as_dict(),
        "verdict": verdict.status.value,
        "conditions": verdict.as_dict(),
        "probes": {"count": len(grid)},
    }
    if args.hypotheses:
        rep["hypotheses"] = verify_hypotheses(inst, space, cert, grid).as_dict()
    if args.soundness:
        rep["soundness"] = soundness_probe(inst, space, cert, grid).as_dict()
    code = {CertStatus.CERTIFIED: 0, CertStatus.REFUTED: 1, CertStatus.INCONCLUSIVE: 2}[verdict.status]
    return code, rep


def cmd_vfp_duality(args, doc):
    names = args.dual or []
    if not names:
        raise UsageError("give at least one --dual NAME")
    vnames = {doc.dual(n)[0] for n in names}
    if len(vnames) != 1:
        raise UsageError("all dual points must belong to one program")
    vname = vnames.pop()
    inst, space = doc.vfp(vname)
    duals = [doc.dual(n)[1] for n in names]
    grid = grid_points(inst.K0, args.grid_step or doc.policy(args.probe_policy).grid_step)
    rep = {"command": f"vfp duality --vfp {vname}", "duals": [d.as_dict() for d in duals], "grid": {"count": len(grid)}}
    if args.converse is not None:
        try:
            r = converse_duality_check(inst, space, duals[0], args.converse, grid)
        except PremiseViolated as exc:
            rep["verdict"] = "premise violated"
            rep["reason"] = str(exc)
            return USAGE, rep
    else:
        r = weak_duality_scan(inst, space, grid, duals)
    rep.update(r.as_dict())
    rep["verdict"] = "consistent" if r.consistent else "violation"
    return (0 if r.consistent else 1), rep


def cmd_config(args, doc):
    text = emit_config(doc)
    again = parse_config(text)
    return 0, {"command": "config", "round_trip": again == doc, "warnings": doc.warnings, "document": text}


# -- reproduction ---------------------------------------------------------------


def reproduce_example1(doc, args) -> tuple:
    space = doc.space("ex1")
    A = doc.region("A").region
    policy = _policy(doc, args, None)
    probes = build_probes(A, space, policy)
    rep: dict = {"command": "reproduce example1", "probes": _probe_block(probes, policy), "fidelity": []}

    target = check_set_property(space, A, SetProperty.GEI, probes, pairs=[(3, 0)])
    rep["gei_printed_pair"] = {"verdict": target.status.value, "witness": target.witness.as_dict() if target.witness else None}
    scan = check_set_property(space, A, SetProperty.GEI, probes)
    rep["gei_scan"] = {"verdict": scan.status.value, "witness": scan.witness.as_dict() if scan.witness else None}
    rep["gamma_-1_0"] = {fmt(t): fmt(space.gamma(Fraction(-1), Fraction(0), t)) for t in (Fraction(0), Fraction(1, 2), Fraction(1))}

    if Fraction(0) not in A:
        rep["fidelity"].append(
            {"id": "ex1-iota-outside-set", "detail": "the printed GEI refutation takes iota = 0, which is not a member of A"}
        )
    glei33 = check_set_property(space, A, SetProperty.GLEI, probes, pairs=[(3, 3)])
    glei = check_set_property(space, A, SetProperty.GLEI, probes)
    rep["glei_scan"] = {"verdict": glei.status.value, "witness": glei.witness.as_dict() if glei.witness else None}
    if glei33.fails:
        rep["fidelity"].append(
            {
                "id": "ex1-glei-claim",
                "detail": "A is asserted to be GLEI, but pair (3,3) has base point E(3) = -1 outside A",
                "witness": glei33.witness.as_dict(),
            }
        )
    rep["verdict"] = target.status.value
    return EXIT[target.status.value], rep


def reproduce_example2(doc, args) -> tuple:
    space = doc.space("ex2")
    h = doc.function("h")
    named = doc.region("R")
    R = named.region
    policy = _policy(doc, args, named.window)
    probes = build_probes(R, space, policy, h.breakpoints())
    rep: dict = {"command": "reproduce example2", "probes": _probe_block(probes, policy), "fidelity": []}

    printed = {}
    for cls, pair in ((FnClass.GSLEC, (2, 3)), (FnClass.GSEP, (1, 4)), (FnClass.GSLEP, (3, 2))):
        v = check_class(h, space, R, cls, probes, pairs=[pair])
        printed[cls.value] = {"pair": list(pair), "verdict": v.status.value, "witness": v.witness.as_dict() if v.witness else None}
    rep["printed_pairs"] = printed

    # lhs and rhs along the GSLEC pair for t = 1, 1/2, ..., 2^-20
    x, y = space.image(Fraction(2)), space.image(Fraction(3))
    series = []
    for k in range(21):
        t = Fraction(1, 2**k)
        series.append({"t": fmt(t), "lhs": fmt(h(space.gamma(x, y, t))), "rhs": fmt(t * h(Fraction(2)) + (1 - t) * h(Fraction(3)))})
    rep["gslec_series"] = series

    scans = {}
    for cls in (FnClass.GSLEC, FnClass.GSEP, FnClass.GSLEP):
        v = check_class(h, space, R, cls, probes)
        scans[cls.value] = {"verdict": v.status.value, "witness": v.witness.as_dict() if v.witness else None}
    rep["scans"] = scans

    if printed["gslep"]["verdict"] == "fails":
        rep["fidelity"].append(
            {
                "id": "ex2-gslep-claim",
                "detail": "h is asserted to be GSLEP, but pair (3,2) gives lhs 2t against rhs t",
                "witness": printed["gslep"]["witness"],
            }
        )
    div = semiderivative(h, space, Fraction(1, 2), Fraction(3), curve="literal")
    rep["divergent_semiderivative"] = {"base": "1/2", "target": "3", "curve": "literal", "result": div.as_dict()}
    failed = all(printed[c]["verdict"] == "fails" for c in ("gslec", "gsep"))
    rep["verdict"] = "fails" if failed else "holds"
    return (1 if failed else 0), rep


def cmd_reproduce(args, doc):
    if args.which == "example1":
        return reproduce_example1(doc, args)
    return reproduce_example2(doc, args)


# -- parser ----------------------------------------------------------------------


def _common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--config", help="TOML configuration document")
    p.add_argument("--grid-step", dest="grid_step", help="probe grid step, e.g. 1/16")
    p.add_argument("--probe-policy", dest="probe_policy", default="default")
    p.add_argument("--format", dest="format", choices=["text", "structured"], default="text")
    p.add_argument("--timing", action="store_true", help="append wall-clock time (text mode only)")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="epreinvex", description="Geodesic semilocal E-preinvexity laboratory")
    sub = parser.add_subparsers(dest="cmd", required=True, parser_class=_Parser)

    check = sub.add_parser("check", help="set properties, function classes, theorem cross-checks")
    csub = check.add_subparsers(dest="what", required=True, parser_class=_Parser)
    cs = csub.add_parser("set")
    _common(cs)
    cs.add_argument("--space", default="euclid")
    cs.add_argument("--set", default="unit")
    cs.add_argument("--property", default="gei", choices=[p.value for p in SetProperty if p is not SetProperty.GLEI_PRODUCT])
    cs.add_argument("--pair", action="append", help="check only this ordered pair K1,K2 (repeatable)")
    cs.set_defaults(func=cmd_check_set)
    cf = csub.add_parser("fn")
    _common(cf)
    cf.add_argument("--space", default="euclid")
    cf.add_argument("--set", default="R")
    cf.add_argument("--fn", required=True)
    cf.add_argument("--class", dest="cls", required=True, choices=[c.value for c in FnClass])
    cf.add_argument("--pair", action="append", help="check only this ordered pair K1,K2 (repeatable)")
    cf.set_defaults(func=cmd_check_fn)
    ct = csub.add_parser("theorem")
    _common(ct)
    ct.add_argument("--space", default="euclid")
    ct.add_argument("--set", default="unit")
    ct.add_argument("--fn", required=True)
    ct.add_argument("--name", required=True, choices=[t.value for t in Theorem])
    ct.set_defaults(func=cmd_check_theorem)

    sd = sub.add_parser("semidiff", help="one-sided semiderivative")
    _common(sd)
    sd.add_argument("--space", default="euclid")
    sd.add_argument("--fn", required=True)
    sd.add_argument("--base", required=True)
    sd.add_argument("--target", required=True)
    sd.add_argument("--mode", default="auto", choices=["auto", "exact", "numeric"])
    sd.add_argument("--curve", default="anchored", choices=["anchored", "literal"])
    sd.set_defaults(func=cmd_semidiff)

    vfp = sub.add_parser("vfp", help="fractional programs")
    vsub = vfp.add_subparsers(dest="what", required=True, parser_class=_Parser)
    vo = vsub.add_parser("oracle")
    _common(vo)
    vo.add_argument("--vfp", required=True)
    vo.add_argument("--lambda", dest="lam", help="parametric mode with this comma-separated vector")
    vo.add_argument("--lemma1", action="store_true", help="cross-check fractional vs parametric efficiency")
    vo.set_defaults(func=cmd_vfp_oracle)
    vc = vsub.add_parser("certify")
    _common(vc)
    vc.add_argument("--certificate")
    vc.add_argument("--vfp")
    vc.add_argument("--point")
    vc.add_argument("--zeta")
    vc.add_argument("--xi")
    vc.add_argument("--kind", default="basic", choices=[k.value for k in CertKind])
    vc.add_argument("--hypotheses", action="store_true")
    vc.add_argument("--soundness", action="store_true")
    vc.set_defaults(func=cmd_vfp_certify)
    vd = vsub.add_parser("duality")
    _common(vd)
    vd.add_argument("--dual", action="append")
    vd.add_argument("--converse", help="run the converse check at this primal point")
    vd.set_defaults(func=cmd_vfp_duality)

    rp = sub.add_parser("reproduce", help="re-run the worked examples with the fidelity ledger")
    _common(rp)
    rp.add_argument("which", choices=["example1", "example2"])
    rp.set_defaults(func=cmd_reproduce)

    cfg = sub.add_parser("config", help="parse a document and echo its canonical form")
    _common(cfg)
    cfg.set_defaults(func=cmd_config)
    return parser


def run_command(argv: Sequence[str]) -> tuple:
    """Returns (exit code, report bytes)."""
    start = time.perf_counter()
    fmt_name = "text"
    try:
        args = build_parser().parse_args(list(argv))
        fmt_name = args.format
        doc = _load_doc(args.config)
        code, rep = args.func(args, doc)
    except UsageError as exc:
        return USAGE, emit_report({"error": "usage", "message": str(exc)}, fmt_name)
    except ConfigError as exc:
        rep = {"error": "config", "message": str(exc), "line": exc.line, "column": exc.col}
        return USAGE, emit_report(rep, fmt_name)
    except (EmptyRegion, BaseNotFixedByE, NoPieceMatches, ValueError, TypeError, OSError) as exc:
        return USAGE, emit_report({"error": type(exc).__name__, "message": str(exc)}, fmt_name)
    if args.timing and fmt_name == "text":
        rep["elapsed_seconds"] = round(time.perf_counter() - start, 4)
    return code, emit_report(rep, fmt_name)


def main(argv: Optional[Sequence[str]] = None) -> int:
    code, out = run_command(sys.argv[1:] if argv is None else argv)
    try:
        sys.stdout.buffer.write(out)
        sys.stdout.flush()
    except BrokenPipeError:
        # reader went away (e.g. `| head`); silence the flush at exit
        os.dup2(os.open(os.devnull, os.O_WRONLY), sys.stdout.fileno())
    return code


if __name__ == "__main__":
    sys.exit(main())
