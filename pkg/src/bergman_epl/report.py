"""Report rows, per-check bookkeeping and CSV/JSON serialisation."""

from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import dataclass, field


def fmt_float(x: float) -> str:
    """17 significant digits, enough to round-trip any double."""
    if math.isnan(x):
        return "nan"
    if math.isinf(x):
        return "inf" if x > 0 else "-inf"
    return format(x, ".17g")


def add_check(row: dict, name: str, residual: float, tol: float, passed: bool | None = None) -> bool:
    """Record ``<name>_residual`` and ``<name>_tol`` on ``row``; failures go to ``failed_checks``."""
    residual = float(residual)
    ok = (residual <= tol) if passed is None else bool(passed)
    ok = ok and math.isfinite(residual)
    row[f"{name}_residual"] = residual
    row[f"{name}_tol"] = float(tol)
    if not ok:
        row.setdefault("_failed", []).append(name)
    return ok


def finish_row(row: dict, source: str, error_estimate: float, tolerance: float, flag: str = "") -> dict:
    """Append the provenance and verdict columns in a fixed order."""
    failed = row.pop("_failed", [])
    row["source"] = source
    row["error_estimate"] = float(error_estimate)
    row["tolerance"] = float(tolerance)
    row["flag"] = flag
    row["failed_checks"] = ";".join(failed)
    row["pass"] = bool(flag or not failed)
    return row


@dataclass
class Report:
    command: str
    config: dict
    rows: list[dict]
    summary_checks: dict = field(default_factory=dict)
    extras: dict = field(default_factory=dict)

    def check(self, name: str, residual: float, tol: float, passed: bool | None = None, **info) -> bool:
        """A report-level check (limits, drift, KE, ...) that is not tied to one row."""
        residual = float(residual)
        ok = (residual <= tol) if passed is None else bool(passed)
        ok = ok and math.isfinite(residual)
        self.summary_checks[name] = {"residual": residual, "tolerance": float(tol), "pass": ok, **info}
        return ok

    def families(self) -> dict:
        """Max residual per row-level check family over unflagged rows."""
        out: dict[str, dict] = {}
        for row in self.rows:
            if row.get("flag"):
                continue
            for key, val in row.items():
                if not key.endswith("_residual"):
                    continue
                name = key[: -len("_residual")]
                fam = out.setdefault(name, {"max_residual": 0.0, "tolerance": row[f"{name}_tol"], "failures": 0})
                if not math.isfinite(val) or val > fam["max_residual"]:
                    fam["max_residual"] = val if math.isfinite(val) else float("nan")
                fam["tolerance"] = max(fam["tolerance"], row[f"{name}_tol"])
                if name in row.get("failed_checks", "").split(";"):
                    fam["failures"] += 1
        return out

    @property
    def passed(self) -> bool:
        rows_ok = all(r["pass"] for r in self.rows)
        return rows_ok and all(c["pass"] for c in self.summary_checks.values())

    def summary(self) -> dict:
        return {
            "command": self.command,
            "passed": self.passed,
            "rows": len(self.rows),
            "flagged_rows": sum(1 for r in self.rows if r.get("flag")),
            "failed_rows": sum(1 for r in self.rows if not r["pass"]),
            "families": self.families(),
            "checks": self.summary_checks,
            **self.extras,
        }


def _jsonable(v):
    if isinstance(v, float):
        return v if math.isfinite(v) else None
    if isinstance(v, dict):
        return {k: _jsonable(x) for k, x in v.items()}
    if isinstance(v, (list, tuple)):
        return [_jsonable(x) for x in v]
    return v


def to_json(report: Report) -> str:
    doc = {"config": report.config, "rows": report.rows, "summary": report.summary()}
    return json.dumps(_jsonable(doc), indent=2, allow_nan=False) + "\n"


def _cell(v) -> str:
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, float):
        return fmt_float(v)
    return str(v)


def to_csv(report: Report) -> str:
    header: list[str] = []
    for row in report.rows:
        header.extend(k for k in row if k not in header)
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    for row in report.rows:
        writer.writerow([_cell(row[k]) if k in row else "" for k in header])
    return buf.getvalue()
