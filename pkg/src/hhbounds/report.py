"""Assembled sides of one certified inequality."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any

CSV_COLUMNS = ("case_id", "x", "y", "lhs", "rhs_main", "error_term", "margin", "theorem")


@dataclass(frozen=True)
class BoundReport:
    """``lhs <= rhs_main + error_term``; ``margin`` is the signed slack."""

    theorem: str
    lhs: float
    rhs_main: float
    error_term: float
    margin: float
    meta: dict[str, Any] = field(default_factory=dict, compare=False)

    @classmethod
    def build(cls, theorem: str, lhs: float, rhs_main: float, error_term: float, **meta) -> "BoundReport":
        lhs, rhs_main, error_term = float(lhs), float(rhs_main), float(error_term)
        return cls(theorem, lhs, rhs_main, error_term, rhs_main + error_term - lhs, meta)

    def holds(self, tol: float = 1e-8) -> bool:
        return self.margin >= -tol

    def row(self, case_id: str = "0", x: float | None = None, y: float | None = None) -> dict:
        x = self.meta.get("x") if x is None else x
        y = self.meta.get("y") if y is None else y
        return {"case_id": case_id, "x": x, "y": y, "lhs": self.lhs, "rhs_main": self.rhs_main,
                "error_term": self.error_term, "margin": self.margin, "theorem": self.theorem}
