# src/reports.py

import numpy as np
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence
import logging

@dataclass
class ReportRow:
    """Data class for one test function's two sides of an inequality"""
    function_id: str
    lhs: float
    rhs: float
    ratio: float
    flagged: bool = False
    reason: str = ""

    @classmethod
    def from_sides(cls, function_id: str, lhs: float, rhs: float) -> "ReportRow":
        """Row with ratio lhs/rhs; 0/0 counts as ratio 0, a non-finite rhs gives a flagged row"""
        lhs, rhs = float(lhs), float(rhs)
        if not np.isfinite(rhs):
            return cls(function_id, lhs, rhs, float("nan"), True,
                       f"rhs is {rhs}; the inequality says nothing for this function")
        if lhs == 0.0:
            ratio = 0.0
        elif rhs == 0.0:
            ratio = float("inf")
        else:
            ratio = lhs / rhs
        return cls(function_id, lhs, rhs, ratio)

    def to_dict(self) -> Dict:
        return {
            "function_id": self.function_id,
            "lhs": self.lhs,
            "rhs": self.rhs,
            "ratio": self.ratio,
            "flagged": self.flagged,
            "reason": self.reason,
        }

@dataclass
class SubCheck:
    """Data class for an auxiliary quantity checked alongside an inequality

    Non-blocking sub-checks are recorded but do not affect the pass flag.
    """
    name: str
    value: float
    bound: Optional[float] = None
    passed: bool = True
    blocking: bool = True
    detail: Dict = field(default_factory=dict)

    def to_dict(self) -> Dict:
        return {
            "name": self.name,
            "value": self.value,
            "bound": self.bound,
            "passed": self.passed,
            "blocking": self.blocking,
            "detail": dict(self.detail),
        }

@dataclass
class InequalityReport:
    """Data class for the outcome of one inequality check over a test family"""
    inequality_id: str
    datum: Dict
    parameters: Dict[str, float]
    bound: float = float("inf")
    suite_id: str = ""
    grid: Dict = field(default_factory=dict)
    rows: List[ReportRow] = field(default_factory=list)
    sub_checks: List[SubCheck] = field(default_factory=list)
    notes: List[str] = field(default_factory=list)
    error: Optional[str] = None
    timings: Dict[str, float] = field(default_factory=dict)
    plots: Dict[str, Dict[str, List[float]]] = field(default_factory=dict)

    def add_row(self, function_id: str, lhs: float, rhs: float) -> ReportRow:
        row = ReportRow.from_sides(function_id, lhs, rhs)
        if row.flagged:
            logging.warning(f"Row {function_id} flagged: {row.reason}")
        self.rows.append(row)
        return row

    def flag_row(self, function_id: str, reason: str) -> ReportRow:
        """Row excluded from the pass decision"""
        row = ReportRow(function_id, float("nan"), float("nan"), float("nan"), True, reason)
        self.rows.append(row)
        return row

    def add_sub_check(self, name: str, value: float, bound: Optional[float] = None,
                      passed: Optional[bool] = None, blocking: bool = True,
                      **detail) -> SubCheck:
        """Record a sub-check; without an explicit verdict it passes iff value is finite and <= bound"""
        value = float(value)
        if passed is None:
            passed = bool(np.isfinite(value)) and (bound is None or value <= bound)
        check = SubCheck(name, value, bound, bool(passed), blocking, dict(detail))
        self.sub_checks.append(check)
        return check

    def add_plot(self, name: str, x: Sequence[float], y: Sequence[float],
                 x_name: str = "xi", y_name: str = "value") -> None:
        self.plots[name] = {"x": [float(v) for v in x], "y": [float(v) for v in y],
                            "x_name": x_name, "y_name": y_name}

    @property
    def active_rows(self) -> List[ReportRow]:
        return [row for row in self.rows if not row.flagged]

    @property
    def max_ratio(self) -> float:
        ratios = [row.ratio for row in self.active_rows]
        return float(max(ratios)) if ratios else 0.0

    @property
    def passed(self) -> bool:
        if self.error is not None:
            return False
        if not all(np.isfinite(row.ratio) for row in self.active_rows):
            return False
        if not self.max_ratio <= self.bound:
            return False
        return all(check.passed for check in self.sub_checks if check.blocking)

    def table_rows(self) -> List[Dict]:
        """Rows for the per-suite CSV"""
        return [{"suite": self.suite_id, "function_id": row.function_id, "lhs": row.lhs,
                 "rhs": row.rhs, "ratio": row.ratio} for row in self.rows]

    def to_dict(self) -> Dict:
        """Deterministic report content; timings and plot series are kept out"""
        return {
            "suite": self.suite_id,
            "inequality": self.inequality_id,
            "datum": dict(self.datum),
            "parameters": dict(self.parameters),
            "bound": self.bound,
            "grid": dict(self.grid),
            "rows": [row.to_dict() for row in self.rows],
            "sub_checks": [check.to_dict() for check in self.sub_checks],
            "notes": list(self.notes),
            "max_ratio": self.max_ratio,
            "passed": self.passed,
            "error": self.error,
        }
