"""Consistency reports shared by the theorem cross-checks and scanners."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any

from .rational import fmt


@dataclass
class ConsistencyReport:
    name: str
    consistent: bool = True
    rows: list = field(default_factory=list)
    findings: list = field(default_factory=list)
    notes: list = field(default_factory=list)
    inconclusive: bool = False

    def flag(self, finding: dict) -> None:
        self.consistent = False
        self.findings.append(finding)

    def as_dict(self) -> dict:
        return {
            "name": self.name,
            "consistent": self.consistent,
            "inconclusive": self.inconclusive,
            "rows": [render(r) for r in self.rows],
            "findings": [render(f) for f in self.findings],
            "notes": list(self.notes),
        }


def render(value: Any) -> Any:
    """Recursively turn Fractions into "p/q" strings for emission."""
    if isinstance(value, Fraction):
        return fmt(value)
    if isinstance(value, bool) or value is None or isinstance(value, (int, str)):
        return value
    if isinstance(value, float):
        return value
    if isinstance(value, dict):
        return {str(k): render(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [render(v) for v in value]
    if hasattr(value, "as_dict"):
        return render(value.as_dict())
    if hasattr(value, "value"):
        return value.value
    return str(value)
