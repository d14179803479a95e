"""
Reporting utilities for presenting run results.

RunReport is the one record every CLI command produces. Numbers are
rounded to REPORT_SIGNIFICANT_DIGITS before they enter a report so that
text, JSON and CSV renderings agree digit for digit.
"""

from __future__ import annotations

import json
import math
from dataclasses import asdict, dataclass, field
from enum import Enum
from typing import Any, Dict, List, Optional, Tuple

import numpy as np
import pandas as pd

from .bounds import BoundReport
from .config import REPORT_SIGNIFICANT_DIGITS


BOUND_COLUMNS = ["bound_name", "value"]
FIELD_COLUMNS = ["field", "value"]


def round_significant(value: float, digits: int = REPORT_SIGNIFICANT_DIGITS) -> float:
    if value == 0.0 or not math.isfinite(value):
        return float(value)
    return float(f"{value:.{digits}g}")


def to_report_value(value: Any, digits: int = REPORT_SIGNIFICANT_DIGITS) -> Any:
    """Recursively convert numpy/enum/dataclass payloads into rounded JSON values."""
    if value is None or isinstance(value, (bool, str)):
        return value
    if isinstance(value, np.bool_):
        return bool(value)
    if isinstance(value, (int, np.integer)):
        return int(value)
    if isinstance(value, (float, np.floating)):
        return round_significant(float(value), digits)
    if isinstance(value, (complex, np.complexfloating)):
        return [round_significant(value.real, digits), round_significant(value.imag, digits)]
    if isinstance(value, Enum):
        return value.value
    if isinstance(value, np.ndarray):
        return [to_report_value(v, digits) for v in value.tolist()]
    if isinstance(value, dict):
        return {str(k): to_report_value(v, digits) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [to_report_value(v, digits) for v in value]
    if hasattr(value, "to_dict") and callable(getattr(value, "to_dict")):
        return to_report_value(value.to_dict(), digits)
    return str(value)


@dataclass
class RunReport:
    command: str
    input_digest: Optional[str]
    results: Dict[str, Any] = field(default_factory=dict)
    warnings: List[str] = field(default_factory=list)
    errors: List[str] = field(default_factory=list)
    exit_status: int = 0
    source: Optional[str] = None

    def to_dict(self) -> Dict[str, Any]:
        return asdict(self)

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> 'RunReport':
        return cls(
            command=data["command"],
            input_digest=data.get("input_digest"),
            results=dict(data.get("results", {})),
            warnings=list(data.get("warnings", [])),
            errors=list(data.get("errors", [])),
            exit_status=int(data.get("exit_status", 0)),
            source=data.get("source"),
        )

    def to_json(self, indent: Optional[int] = 2) -> str:
        return json.dumps(self.to_dict(), indent=indent, sort_keys=False)

    @classmethod
    def from_json(cls, text: str) -> 'RunReport':
        return cls.from_dict(json.loads(text))


def flatten_results(results: Dict[str, Any], prefix: str = "") -> List[Tuple[str, Any]]:
    """(dotted field, scalar) pairs; list entries are numbered from 1."""
    rows: List[Tuple[str, Any]] = []

    def walk(value: Any, name: str) -> None:
        if isinstance(value, dict):
            if not value and name:
                rows.append((name, None))
            for key, item in value.items():
                walk(item, f"{name}.{key}" if name else str(key))
        elif isinstance(value, list):
            if not value and name:
                rows.append((name, None))
            for index, item in enumerate(value, start=1):
                walk(item, f"{name}[{index}]")
        else:
            rows.append((name, value))

    walk(results, prefix)
    return rows


def bound_report_frame(report: BoundReport) -> pd.DataFrame:
    rows = [(name, None if value is None else round_significant(value)) for name, value in report.rows()]
    return pd.DataFrame(rows, columns=BOUND_COLUMNS)


def report_frame(report: RunReport) -> pd.DataFrame:
    """Bounds reports tabulate (bound_name, value); everything else (field, value)."""
    if report.command == "bounds" and "rows" in report.results:
        return pd.DataFrame([tuple(row) for row in report.results["rows"]], columns=BOUND_COLUMNS)
    return pd.DataFrame(flatten_results(report.results), columns=FIELD_COLUMNS)


def render_csv(reports: List[RunReport]) -> str:
    frames = []
    for report in reports:
        frame = report_frame(report)
        if len(reports) > 1:
            frame.insert(0, "source", report.source or "")
        frames.append(frame)
    return pd.concat(frames, ignore_index=True).to_csv(index=False)


def _format_value(value: Any) -> str:
    if value is None:
        return "-"
    if isinstance(value, float):
        return f"{value:.12g}"
    return str(value)


def render_text(reports: List[RunReport]) -> str:
    blocks = []
    for report in reports:
        lines = [f"== {report.command}" + (f" {report.source}" if report.source else "")]
        if report.input_digest:
            lines.append(f"input sha256: {report.input_digest}")
        if report.command == "bounds" and "rows" in report.results:
            width = max(len(str(name)) for name, _ in report.results["rows"])
            for name, value in report.results["rows"]:
                lines.append(f"  {name:<{width}}  {_format_value(value)}")
            for note in report.results.get("bounds", {}).get("notes", []):
                lines.append(f"  note: {note}")
        else:
            for name, value in flatten_results(report.results):
                lines.append(f"  {name}: {_format_value(value)}")
        for message in report.warnings:
            lines.append(f"warning: {message}")
        for message in report.errors:
            lines.append(f"error: {message}")
        lines.append(f"exit status: {report.exit_status}")
        blocks.append("\n".join(lines))
    return "\n\n".join(blocks) + "\n"


def render_json(reports: List[RunReport]) -> str:
    if len(reports) == 1:
        return reports[0].to_json() + "\n"
    return json.dumps([r.to_dict() for r in reports], indent=2) + "\n"
