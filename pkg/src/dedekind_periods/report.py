"""Check records and reports with JSON, CSV and plain-text renderings."""
from __future__ import annotations

import csv
import io
import json
import math
import time
from dataclasses import asdict, dataclass, field
from typing import Any, Dict, List, Optional

__all__ = ["Check", "Report", "REPORT_SCHEMA"]

REPORT_SCHEMA = {
    "suite": "string",
    "passed": "bool",
    "wall_time": "seconds (float)",
    "config": "object: configuration snapshot",
    "form_hashes": "object: weight -> content hash",
    "checks": [
        {
            "id": "string, unique within the suite",
            "equation": "string tag of the identity checked",
            "inputs": "object",
            "residual": "float or null when exact",
            "exact": "bool: exact equality (no tolerance involved)",
            "tolerance": "float or null",
            "pass": "bool",
            "detail": "string",
        }
    ],
}


@dataclass
class Check:
    id: str
    equation: str
    inputs: Dict[str, Any]
    residual: Optional[float] = None
    tolerance: Optional[float] = None
    exact: bool = False
    passed: Optional[bool] = None
    detail: str = ""

    def __post_init__(self):
        if self.passed is None:
            if self.exact:
                self.passed = True if self.residual in (None, 0) else False
            else:
                self.passed = (
                    self.residual is not None
                    and math.isfinite(self.residual)
                    and self.residual <= self.tolerance
                )

    def to_dict(self) -> dict:
        d = asdict(self)
        d["pass"] = bool(d.pop("passed"))
        d["inputs"] = {k: _jsonable(v) for k, v in self.inputs.items()}
        return d


def _jsonable(v):
    if isinstance(v, complex):
        return [v.real, v.imag]
    if isinstance(v, (int, float, str, bool)) or v is None:
        return v
    if isinstance(v, (list, tuple)):
        return [_jsonable(x) for x in v]
    return str(v)


@dataclass
class Report:
    suite: str
    checks: List[Check] = field(default_factory=list)
    config: Dict[str, Any] = field(default_factory=dict)
    form_hashes: Dict[str, str] = field(default_factory=dict)
    wall_time: float = 0.0
    _start: float = field(default_factory=time.perf_counter, repr=False)

    def add(self, check: Check) -> Check:
        self.checks.append(check)
        return check

    def extend(self, checks) -> None:
        for c in checks:
            self.add(c)

    def finish(self) -> "Report":
        self.wall_time = time.perf_counter() - self._start
        self.checks.sort(key=lambda c: c.id)
        return self

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    @property
    def failures(self) -> List[Check]:
        return [c for c in self.checks if not c.passed]

    def to_dict(self) -> dict:
        return {
            "suite": self.suite,
            "passed": self.passed,
            "wall_time": self.wall_time,
            "config": {k: _jsonable(v) for k, v in self.config.items()},
            "form_hashes": dict(self.form_hashes),
            "checks": [c.to_dict() for c in self.checks],
        }

    def to_json(self, indent: int = 2) -> str:
        return json.dumps(self.to_dict(), indent=indent)

    def to_csv(self) -> str:
        buf = io.StringIO()
        writer = csv.writer(buf)
        writer.writerow(["id", "equation", "inputs", "residual", "tolerance", "exact", "pass"])
        for c in self.checks:
            writer.writerow(
                [c.id, c.equation, json.dumps(c.to_dict()["inputs"]), c.residual, c.tolerance, c.exact, c.passed]
            )
        return buf.getvalue()

    def to_pretty(self) -> str:
        lines = [f"suite {self.suite}: {'PASS' if self.passed else 'FAIL'} "
                 f"({len(self.checks) - len(self.failures)}/{len(self.checks)}, {self.wall_time:.2f}s)"]
        for c in self.checks:
            res = "exact" if c.exact and c.residual in (None, 0) else f"{c.residual:.3e}" if c.residual is not None else "-"
            tol = f"{c.tolerance:.0e}" if c.tolerance is not None else "-"
            lines.append(f"  [{'ok' if c.passed else 'FAIL'}] {c.id:<40} {c.equation:<22} {res:>10} <= {tol}")
            if c.detail and not c.passed:
                lines.append(f"         {c.detail}")
        return "\n".join(lines)

    def render(self, fmt: str = "pretty") -> str:
        if fmt == "json":
            return self.to_json()
        if fmt == "csv":
            return self.to_csv()
        return self.to_pretty()
