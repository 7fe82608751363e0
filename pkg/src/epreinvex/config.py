"""TOML configuration documents: named spaces, regions, functions, programs,
certificates, dual points and probe policies.

Rationals are written as integers or ``"p/q"`` strings; TOML floats are
rejected.  A user document is merged over the shipped built-ins.
"""

from __future__ import annotations

import itertools
import re
import warnings
from dataclasses import dataclass, field
from fractions import Fraction
from importlib import resources
from typing import Optional

import tomli
import tomli_w

from .certify import Certificate, CertKind
from .duality import DualPoint
from .expr import ExprError, parse_map
from .funclass import PiecewiseFn, ScalarFn, combine
from .geometry import EGeodesicSpace, builtin_space
from .piecewise import PiecewiseMap
from .poly import T
from .rational import Q, fmt
from .region import Interval, Region, parse_interval
from .sets import ProbePolicy
from .vfp import VfpInstance

SECTIONS = ("space", "region", "function", "vfp", "certificate", "dual", "policy")


class ConfigError(ValueError):
    def __init__(self, message: str, line: Optional[int] = None, col: Optional[int] = None):
        self.line, self.col = line, col
        where = f" (line {line}, column {col})" if line is not None else ""
        super().__init__(message + where)


class UnknownReference(ConfigError):
    pass


class OverlapWarning(UserWarning):
    pass


@dataclass(frozen=True)
class NamedRegion:
    region: Region
    window: Optional[Region] = None


@dataclass(eq=False)
class ConfigDocument:
    spaces: dict = field(default_factory=dict)
    regions: dict = field(default_factory=dict)
    functions: dict = field(default_factory=dict)
    vfps: dict = field(default_factory=dict)
    certificates: dict = field(default_factory=dict)
    duals: dict = field(default_factory=dict)
    policies: dict = field(default_factory=dict)
    warnings: list = field(default_factory=list)
    normalized: dict = field(default_factory=dict)

    def __eq__(self, other) -> bool:
        return isinstance(other, ConfigDocument) and self.normalized == other.normalized

    def space(self, name: str) -> EGeodesicSpace:
        if name in self.spaces:
            return self.spaces[name]
        try:
            return builtin_space(name)
        except KeyError:
            raise UnknownReference(f"unknown space {name!r}") from None

    def _get(self, table: dict, kind: str, name: str):
        try:
            return table[name]
        except KeyError:
            raise UnknownReference(f"unknown {kind} {name!r}") from None

    def region(self, name: str) -> NamedRegion:
        return self._get(self.regions, "region", name)

    def function(self, name: str) -> ScalarFn:
        return self._get(self.functions, "function", name)

    def vfp(self, name: str) -> tuple:
        return self._get(self.vfps, "vfp", name)

    def certificate(self, name: str) -> tuple:
        return self._get(self.certificates, "certificate", name)

    def dual(self, name: str) -> tuple:
        return self._get(self.duals, "dual", name)

    def policy(self, name: str) -> ProbePolicy:
        return self._get(self.policies, "policy", name)


# -- helpers -------------------------------------------------------------------


def _locate(text: Optional[str], needle: str) -> tuple:
    """(line, column) of the first occurrence of ``needle`` in ``text``, 1-based."""
    if not text or not needle:
        return None, None
    idx = text.find(needle)
    if idx < 0:
        return None, None
    line = text.count("\n", 0, idx) + 1
    col = idx - (text.rfind("\n", 0, idx) + 1) + 1
    return line, col


def _rat(value, where: str, text: Optional[str]) -> Fraction:
    if isinstance(value, float):
        raise ConfigError(f"{where}: floating-point literal {value!r}; write rationals as \"p/q\"", *_locate(text, repr(value)))
    try:
        return Q(value)
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"{where}: {exc}", *_locate(text, str(value))) from None


def _rats(values, where, text) -> tuple:
    if not isinstance(values, list):
        raise ConfigError(f"{where}: expected a list")
    return tuple(_rat(v, f"{where}[{i}]", text) for i, v in enumerate(values))


def _region_of(items, where, text) -> Region:
    if isinstance(items, str):
        items = [items]
    out = []
    for s in items:
        try:
            out.append(parse_interval(s))
        except ValueError as exc:
            raise ConfigError(f"{where}: {exc}", *_locate(text, s)) from None
    return Region(out)


def _pieces(value, names, label, text) -> PiecewiseMap:
    if not isinstance(value, list) or not value:
        raise ConfigError(f"{label}: pieces must be a non-empty list of [guard, body]")
    try:
        return parse_map(value, names, label)
    except ExprError as exc:
        line, col = _locate(text, exc.text)
        if line is not None:
            col += exc.col
        raise ConfigError(f"{label}: {exc}", line, col) from None


def _overlaps(m: PiecewiseMap) -> list:
    """Pairs of pieces (i, j) whose guards can both hold."""
    found = []
    if m.arity == 1:
        full = Interval(None, False, None, False)
        sets = [p.guard.solve((T,), full) for p in m.pieces]
        for i, j in itertools.combinations(range(len(sets)), 2):
            if sets[i].intersect(sets[j]):
                found.append((i, j))
        return found
    # several arguments: look for simultaneous matches on a small rational lattice
    lattice = [Fraction(k, 2) for k in range(-6, 7)]
    if m.arity == 3:
        grids = itertools.product(lattice, lattice, (Fraction(0), Fraction(1, 2), Fraction(1)))
    else:
        grids = itertools.product(*([lattice] * m.arity))
    seen = set()
    for args in grids:
        hits = [i for i, p in enumerate(m.pieces) if p.guard(args)]
        for pair in itertools.combinations(hits, 2):
            seen.add(pair)
    return sorted(seen)


def _warn_overlaps(doc: ConfigDocument, m: PiecewiseMap) -> None:
    for i, j in _overlaps(m):
        msg = f"{m.label}: guards of pieces {i + 1} and {j + 1} overlap; first match wins"
        doc.warnings.append(msg)
        warnings.warn(msg, OverlapWarning, stacklevel=3)


# -- parsing -------------------------------------------------------------------


def builtin_document_text() -> str:
    return resources.files("epreinvex").joinpath("builtins.toml").read_text(encoding="utf-8")


def _load(text: str) -> dict:
    try:
        return tomli.loads(text)
    except tomli.TOMLDecodeError as exc:
        m = re.search(r"line (\d+), column (\d+)", str(exc))
        line, col = (int(m.group(1)), int(m.group(2))) if m else (None, None)
        raise ConfigError(f"syntax error: {str(exc).split(' (at')[0]}", line, col) from None


def merged_raw(text: str, with_builtins: bool = True) -> dict:
    user = _load(text)
    unknown = sorted(set(user) - set(SECTIONS))
    if unknown:
        raise ConfigError(f"unknown top-level table {unknown[0]!r}", *_locate(text, unknown[0]))
    if not with_builtins:
        return user
    base = _load(builtin_document_text())
    for sec in SECTIONS:
        if sec in user:
            base.setdefault(sec, {}).update(user[sec])
    return base


def parse_config(text: str, with_builtins: bool = True) -> ConfigDocument:
    """Parse a document; the first error carries a line/column when known."""
    raw = merged_raw(text, with_builtins)
    src = text
    doc = ConfigDocument()
    norm: dict = {sec: {} for sec in SECTIONS}

    for name, cfg in raw.get("space", {}).items():
        where = f"space.{name}"
        if "builtin" in cfg:
            try:
                doc.spaces[name] = builtin_space(cfg["builtin"])
            except KeyError:
                raise UnknownReference(f"{where}: unknown built-in space {cfg['builtin']!r}", *_locate(src, cfg["builtin"])) from None
            norm["space"][name] = {"builtin": cfg["builtin"]}
            continue
        missing = [k for k in ("E", "eta", "gamma") if k not in cfg]
        if missing:
            raise ConfigError(f"{where}: missing {', '.join(missing)}", *_locate(src, f"[space.{name}]"))
        maps = {
            "E": _pieces(cfg["E"], ["x"], f"{name}.E", src),
            "eta": _pieces(cfg["eta"], ["x", "y"], f"{name}.eta", src),
            "gamma": _pieces(cfg["gamma"], ["x", "y", "t"], f"{name}.gamma", src),
        }
        for m in maps.values():
            _warn_overlaps(doc, m)
        doc.spaces[name] = EGeodesicSpace(name, maps["E"], maps["eta"], maps["gamma"])
        norm["space"][name] = {k: [list(p) for p in cfg[k]] for k in ("E", "eta", "gamma")}

    for name, cfg in raw.get("region", {}).items():
        where = f"region.{name}"
        if "intervals" not in cfg:
            raise ConfigError(f"{where}: missing intervals", *_locate(src, f"[region.{name}]"))
        reg = _region_of(cfg["intervals"], where, src)
        win = _region_of(cfg["window"], where + ".window", src) if "window" in cfg else None
        doc.regions[name] = NamedRegion(reg, win)
        entry = {"intervals": [str(iv) for iv in reg]}
        if win is not None:
            entry["window"] = [str(iv) for iv in win]
        norm["region"][name] = entry

    _parse_functions(raw.get("function", {}), doc, norm, src)

    for name, cfg in raw.get("policy", {}).items():
        where = f"policy.{name}"
        step = _rat(cfg.get("grid_step", "1/16"), where + ".grid_step", src)
        off = _rat(cfg.get("offset", "1/64"), where + ".offset", src)
        if step <= 0:
            raise ConfigError(f"{where}: grid_step must be positive", *_locate(src, f"[policy.{name}]"))
        doc.policies[name] = ProbePolicy(step, off)
        norm["policy"][name] = {"grid_step": fmt(step), "offset": fmt(off)}

    for name, cfg in raw.get("vfp", {}).items():
        where = f"vfp.{name}"
        space_name = cfg.get("space", "euclid")
        space = _ref(doc.space, space_name, where, src)
        k0 = cfg.get("K0")
        if k0 is None:
            raise ConfigError(f"{where}: missing K0", *_locate(src, f"[vfp.{name}]"))
        region = _ref(doc.region, k0, where, src).region if isinstance(k0, str) and not k0.strip().startswith(("[", "(")) else _region_of(k0, where + ".K0", src)
        fs = {k: tuple(_ref(doc.function, n, where, src) for n in cfg.get(k, [])) for k in ("f", "g", "h")}
        try:
            inst = VfpInstance(fs["f"], fs["g"], fs["h"], region, name)
        except ValueError as exc:
            raise ConfigError(f"{where}: {exc}", *_locate(src, f"[vfp.{name}]")) from None
        doc.vfps[name] = (inst, space)
        norm["vfp"][name] = {"space": space_name, "K0": [str(iv) for iv in region], **{k: list(cfg.get(k, [])) for k in ("f", "g", "h")}}

    for name, cfg in raw.get("certificate", {}).items():
        where = f"certificate.{name}"
        inst, _ = _ref(doc.vfp, cfg.get("vfp", ""), where, src)
        try:
            kind = CertKind(cfg.get("kind", "basic"))
        except ValueError:
            raise ConfigError(f"{where}: unknown kind {cfg.get('kind')!r}", *_locate(src, str(cfg.get("kind")))) from None
        cert = Certificate(
            _rat(cfg.get("point"), where + ".point", src),
            _rats(cfg.get("zeta", []), where + ".zeta", src),
            _rats(cfg.get("xi", []), where + ".xi", src),
            kind,
        )
        doc.certificates[name] = (cfg["vfp"], cert)
        norm["certificate"][name] = dict(vfp=cfg["vfp"], **cert.as_dict())

    for name, cfg in raw.get("dual", {}).items():
        where = f"dual.{name}"
        _ref(doc.vfp, cfg.get("vfp", ""), where, src)
        try:
            d = DualPoint(
                _rats(cfg.get("alpha", []), where + ".alpha", src),
                _rats(cfg.get("beta", []), where + ".beta", src),
                _rat(cfg.get("lambda"), where + ".lambda", src),
                _rats(cfg.get("zeta", []), where + ".zeta", src),
            )
        except ValueError as exc:
            if isinstance(exc, ConfigError):
                raise
            raise ConfigError(f"{where}: {exc}", *_locate(src, f"[dual.{name}]")) from None
        doc.duals[name] = (cfg["vfp"], d)
        norm["dual"][name] = dict(vfp=cfg["vfp"], **d.as_dict())

    doc.normalized = {k: v for k, v in norm.items() if v}
    return doc


def _ref(getter, name, where, src):
    try:
        return getter(name)
    except UnknownReference as exc:
        line, col = _locate(src, f'"{name}"')
        raise UnknownReference(f"{where}: {exc}", line, col) from None


def _parse_functions(table: dict, doc: ConfigDocument, norm: dict, src: str) -> None:
    state: dict[str, str] = {}

    def build(name: str, chain: tuple) -> ScalarFn:
        if name in doc.functions:
            return doc.functions[name]
        if name not in table:
            line, col = _locate(src, f'"{name}"')
            raise UnknownReference(f"function.{chain[-1] if chain else name}: unknown function {name!r}", line, col)
        if state.get(name) == "busy":
            raise ConfigError("cyclic function reference: " + " -> ".join(chain + (name,)), *_locate(src, f"[function.{name}]"))
        state[name] = "busy"
        cfg = table[name]
        where = f"function.{name}"
        if "pieces" in cfg:
            m = _pieces(cfg["pieces"], ["x"], name, src)
            _warn_overlaps(doc, m)
            fn: ScalarFn = PiecewiseFn(m, name)
            norm["function"][name] = {"pieces": [list(p) for p in cfg["pieces"]]}
        elif "expr" in cfg:
            if not isinstance(cfg["expr"], str):
                raise ConfigError(f"{where}: expr must be a string; write rationals as \"p/q\"", *_locate(src, f"[function.{name}]"))
            m = _pieces([["true", cfg["expr"]]], ["x"], name, src)
            fn = PiecewiseFn(m, name)
            norm["function"][name] = {"expr": cfg["expr"]}
        elif "combo" in cfg:
            terms = []
            for item in cfg["combo"]:
                if not isinstance(item, list) or len(item) != 2:
                    raise ConfigError(f"{where}: combo entries are [coefficient, function]", *_locate(src, f"[function.{name}]"))
                c = _rat(item[0], where, src)
                terms.append((c, build(item[1], chain + (name,))))
            fn = combine(*terms, label=name)
            norm["function"][name] = {"combo": [[fmt(Q(c) if not isinstance(c, float) else c), f] for c, f in cfg["combo"]]}
        else:
            raise ConfigError(f"{where}: need one of pieces, expr, combo", *_locate(src, f"[function.{name}]"))
        state[name] = "done"
        doc.functions[name] = fn
        return fn

    for name in table:
        build(name, ())


def emit_config(doc: ConfigDocument) -> str:
    """Canonical TOML echo of a parsed document (built-ins included)."""
    return tomli_w.dumps(doc.normalized)
