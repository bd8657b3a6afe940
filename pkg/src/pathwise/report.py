"""Verification reports: every asserted comparison with both sides exact."""

from __future__ import annotations

import json
import operator
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any

from .io import format_rational

RELATIONS = {
    "<": operator.lt,
    "<=": operator.le,
    "==": operator.eq,
    ">=": operator.ge,
    ">": operator.gt,
}


def render(value: Any) -> str:
    """Exact text for a report cell: rationals as ``p/q``, flags as ``true``/``false``."""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, (int, Fraction)):
        return format_rational(value)
    if value == float("inf"):
        return "inf"
    return str(value)


@dataclass
class Row:
    case: str
    lhs: Any
    relation: str
    rhs: Any
    passed: bool

    def to_json(self) -> dict:
        return {
            "case": self.case,
            "lhs": render(self.lhs),
            "rhs": render(self.rhs),
            "relation": self.relation,
            "pass": self.passed,
        }


@dataclass
class Report:
    command: str
    params: dict = field(default_factory=dict)
    rows: list[Row] = field(default_factory=list)
    outputs: dict = field(default_factory=dict)

    def check(self, case: str, lhs, relation: str, rhs) -> bool:
        ok = bool(RELATIONS[relation](lhs, rhs))
        self.rows.append(Row(case, lhs, relation, rhs, ok))
        return ok

    def flag(self, case: str, value: bool) -> bool:
        return self.check(case, bool(value), "==", True)

    @property
    def passed(self) -> bool:
        return all(r.passed for r in self.rows)

    def failures(self) -> list[Row]:
        return [r for r in self.rows if not r.passed]

    def to_json(self) -> dict:
        out = {
            "command": self.command,
            "params": {k: v if isinstance(v, (int, str)) or v is None else render(v) for k, v in self.params.items()},
            "rows": [r.to_json() for r in self.rows],
            "pass": self.passed,
        }
        if self.outputs:
            out["outputs"] = self.outputs
        return out

    def dumps(self, fmt: str = "json") -> str:
        if fmt == "json":
            return json.dumps(self.to_json(), indent=2, ensure_ascii=False) + "\n"
        if fmt == "tsv":
            lines = ["case\tlhs\trelation\trhs\tpass"]
            for r in self.rows:
                j = r.to_json()
                lines.append("\t".join([j["case"], j["lhs"], j["relation"], j["rhs"], render(j["pass"])]))
            lines.append(f"# pass={render(self.passed)}")
            return "\n".join(lines) + "\n"
        raise ValueError(f"unknown report format {fmt!r}")
