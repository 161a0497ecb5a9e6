"""Bounds table for (a,b)-towns mod k at a given n, optionally next to the reference mod-3 cells."""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Optional

from .bounds import REFERENCE_MOD3_TABLE, TIGHT_MOD3, bound_oracle, eval_expression
from .constructions import best_construction

TABLE_ROW_ORDER = [(0, 0), (1, 1), (2, 2), (0, 2), (1, 0), (2, 1), (0, 1), (1, 2), (2, 0)]


@dataclass(frozen=True)
class TableCell:
    a: int
    b: int
    n_residue: int
    lower: str
    upper: str
    tight: bool
    source: str  # "reference" or "computed"

    def evaluate(self, n: int) -> tuple[int, int]:
        return eval_expression(self.lower, n), eval_expression(self.upper, n)


@dataclass(frozen=True)
class TableRow:
    a: int
    b: int
    computed: TableCell
    reference: Optional[TableCell]
    exact: Optional[int] = None
    exact_status: Optional[str] = None


def computed_cell(a: int, b: int, k: int, n: int) -> TableCell:
    low = best_construction(a, b, k, n)
    up = bound_oracle(a, b, k, n)
    tight = up.tight and low.size == up.value
    return TableCell(a, b, n % k, low.expression, up.expression, tight, "computed")


def reference_cell(a: int, b: int, n: int) -> TableCell:
    lower, upper = REFERENCE_MOD3_TABLE[(a, b)][n % 3]
    return TableCell(a, b, n % 3, lower, upper, (a, b) in TIGHT_MOD3, "reference")


def build_table(k: int, n: int, cache_entries: Optional[dict] = None) -> list[TableRow]:
    pairs = TABLE_ROW_ORDER if k == 3 else list(itertools.product(range(k), repeat=2))
    rows = []
    for a, b in pairs:
        entry = (cache_entries or {}).get((a, b, k, n))
        rows.append(TableRow(
            a,
            b,
            computed_cell(a, b, k, n),
            reference_cell(a, b, n) if k == 3 else None,
            entry["size"] if entry else None,
            entry["status"] if entry else None,
        ))
    return rows


def render_table(rows: list[TableRow], n: int, evaluate: bool = False, fmt: str = "markdown") -> str:
    def show(expr: str) -> str:
        return str(eval_expression(expr, n)) if evaluate else expr

    with_reference = any(r.reference is not None for r in rows)
    header = ["(a,b)", "lower", "upper", "tight", "exact"]
    if with_reference:
        header += ["reference lower", "reference upper"]
    body = []
    for r in rows:
        exact = "" if r.exact is None else f"{r.exact}" + ("" if r.exact_status == "optimal" else "+")
        line = [f"({r.a},{r.b})", show(r.computed.lower), show(r.computed.upper), "yes" if r.computed.tight else "", exact]
        if with_reference:
            line += [show(r.reference.lower), show(r.reference.upper)] if r.reference else ["", ""]
        body.append(line)
    if fmt == "csv":
        return "\n".join(",".join(f'"{c}"' if "," in c else c for c in line) for line in [header] + body) + "\n"
    out = ["| " + " | ".join(header) + " |", "|" + "|".join("---" for _ in header) + "|"]
    out += ["| " + " | ".join(line) + " |" for line in body]
    return "\n".join(out) + "\n"
