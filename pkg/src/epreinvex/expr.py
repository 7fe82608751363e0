"""Parse guard and body expressions such as ``"-2 <= x <= 2"`` or ``"y + t*(x - y)"``.

Python's ``ast`` does the tokenising; only polynomial arithmetic with exact
rational constants, comparisons (chains allowed), ``and``/``or`` and
``true``/``false`` are accepted.  ``^`` and ``**`` both mean power.
"""

from __future__ import annotations

import ast
from fractions import Fraction
from typing import Sequence

from .piecewise import Atom, Guard, Piece, PiecewiseMap
from .poly import Poly


class ExprError(ValueError):
    def __init__(self, message: str, text: str, col: int = 0):
        self.text = text
        self.col = col
        super().__init__(f"{message} (in {text!r}, column {col + 1})")


_CMP = {ast.Lt: "<", ast.LtE: "<=", ast.Gt: ">", ast.GtE: ">=", ast.Eq: "==", ast.NotEq: "!="}


def _parse(text: str) -> ast.AST:
    src = text.replace("^", "**").replace("−", "-").replace("≤", "<=").replace("≥", ">=")
    try:
        return ast.parse(src.strip(), mode="eval").body
    except SyntaxError as exc:
        raise ExprError("syntax error", text, (exc.offset or 1) - 1) from None


class _Builder:
    def __init__(self, names: Sequence[str], text: str):
        self.names = list(names)
        self.n = len(names)
        self.text = text

    def fail(self, node, message):
        raise ExprError(message, self.text, getattr(node, "col_offset", 0))

    def poly(self, node) -> Poly:
        if isinstance(node, ast.Constant):
            if isinstance(node.value, bool) or not isinstance(node.value, int):
                self.fail(node, "only integer literals (use p/q for rationals)")
            return Poly.const(self.n, node.value)
        if isinstance(node, ast.Name):
            if node.id not in self.names:
                self.fail(node, f"unknown variable {node.id!r}; expected one of {self.names}")
            return Poly.var(self.n, self.names.index(node.id))
        if isinstance(node, ast.UnaryOp) and isinstance(node.op, (ast.USub, ast.UAdd)):
            p = self.poly(node.operand)
            return -p if isinstance(node.op, ast.USub) else p
        if isinstance(node, ast.BinOp):
            if isinstance(node.op, ast.Add):
                return self.poly(node.left) + self.poly(node.right)
            if isinstance(node.op, ast.Sub):
                return self.poly(node.left) - self.poly(node.right)
            if isinstance(node.op, ast.Mult):
                return self.poly(node.left) * self.poly(node.right)
            if isinstance(node.op, ast.Div):
                den = self.poly(node.right).constant_value()
                if den is None:
                    self.fail(node.right, "division only by constants")
                if den == 0:
                    self.fail(node.right, "division by zero")
                return self.poly(node.left).scale(Fraction(1) / den)
            if isinstance(node.op, ast.Pow):
                exp = self.poly(node.right).constant_value()
                if exp is None or exp.denominator != 1 or exp < 0:
                    self.fail(node.right, "exponent must be a non-negative integer constant")
                return self.poly(node.left) ** int(exp)
        self.fail(node, f"unsupported expression {type(node).__name__}")

    def guard(self, node) -> Guard:
        if isinstance(node, ast.Name) and node.id in ("true", "True", "otherwise"):
            return Guard.always()
        if isinstance(node, ast.Name) and node.id in ("false", "False"):
            return Guard(())
        if isinstance(node, ast.Constant) and isinstance(node.value, bool):
            return Guard.always() if node.value else Guard(())
        if isinstance(node, ast.BoolOp):
            parts = [self.guard(v) for v in node.values]
            if isinstance(node.op, ast.Or):
                return Guard(tuple(c for g in parts for c in g.clauses))
            clauses: list[tuple] = [()]
            for g in parts:
                clauses = [a + b for a in clauses for b in g.clauses]
            return Guard(tuple(clauses))
        if isinstance(node, ast.Compare):
            atoms = []
            left = self.poly(node.left)
            for op, comp in zip(node.ops, node.comparators):
                if type(op) not in _CMP:
                    self.fail(node, "unsupported comparison")
                right = self.poly(comp)
                atoms.append(Atom(left - right, _CMP[type(op)]))
                left = right
            return Guard((tuple(atoms),))
        self.fail(node, "guard must be a comparison, 'and'/'or' combination, or 'true'")


def parse_poly(text: str, names: Sequence[str]) -> Poly:
    return _Builder(names, text).poly(_parse(text))


def parse_guard(text: str, names: Sequence[str]) -> Guard:
    return _Builder(names, text).guard(_parse(text))


def parse_map(pieces: Sequence[Sequence[str]], names: Sequence[str], label: str) -> PiecewiseMap:
    """Build a first-match map from ``[[guard, body], ...]`` string pairs."""
    built = []
    for item in pieces:
        if len(item) != 2:
            raise ExprError("each piece is [guard, body]", str(item))
        guard_s, body_s = item
        if not (isinstance(guard_s, str) and isinstance(body_s, str)):
            raise ExprError("guards and bodies must be strings; write rationals as \"p/q\"", str(item))
        built.append(Piece(parse_guard(guard_s, names), parse_poly(body_s, names)))
    return PiecewiseMap(tuple(names), tuple(built), label)
