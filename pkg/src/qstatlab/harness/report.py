"""Report container and deterministic serialization.

Floats are serialized with 17 significant digits so identical runs produce
byte-identical payloads and regression diffs are exact.  Non-finite values
appear as the literal strings "inf" / "-inf" / "not-comparable" (the last is
also used for a gap of infinity minus infinity, which the divergence layer
reports as ``None``).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from ..errors import ValidationError


@dataclass
class ExperimentReport:
    """Structured results of one experiment run.

    ``results`` holds every intermediate per-n / per-alpha value the
    acceptance criteria use; ``checks`` are pass/fail flags against declared
    tolerances; ``csv_header``/``csv_rows`` define the flat numeric series.
    """

    experiment: str
    config: dict
    results: dict
    checks: list
    csv_header: list
    csv_rows: list
    duration_seconds: float = 0.0
    version: str = "0"

    def all_passed(self) -> bool:
        return all(check["pass"] for check in self.checks)

    def payload(self) -> dict:
        """The deterministic numeric payload (everything but wall clock)."""
        return {
            "experiment": self.experiment,
            "config": self.config,
            "results": self.results,
            "checks": self.checks,
            "csv_header": self.csv_header,
            "csv_rows": self.csv_rows,
        }


def format_float(value: float) -> str:
    if math.isnan(value):
        return "not-comparable"
    if math.isinf(value):
        return "inf" if value > 0 else "-inf"
    text = format(float(value), ".17g")
    return text


def _json_scalar(value) -> str:
    if value is None:
        return '"not-comparable"'
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, (float, np.floating)):
        text = format_float(float(value))
        if text in ("inf", "-inf", "not-comparable"):
            return f'"{text}"'
        return text
    if isinstance(value, str):
        import json

        return json.dumps(value)
    raise ValidationError(f"cannot serialize {type(value).__name__} in a report")


def _json_value(value, pieces):
    if isinstance(value, dict):
        pieces.append("{")
        for i, key in enumerate(sorted(value)):
            if i:
                pieces.append(",")
            pieces.append(_json_scalar(str(key)))
            pieces.append(":")
            _json_value(value[key], pieces)
        pieces.append("}")
    elif isinstance(value, (list, tuple)) or (
        isinstance(value, np.ndarray) and value.ndim >= 1
    ):
        pieces.append("[")
        for i, item in enumerate(value):
            if i:
                pieces.append(",")
            _json_value(item, pieces)
        pieces.append("]")
    else:
        pieces.append(_json_scalar(value))


def dumps_deterministic(value) -> str:
    """JSON text with sorted keys and 17-significant-digit floats."""
    pieces = []
    _json_value(value, pieces)
    return "".join(pieces)


def to_json_bytes(report: ExperimentReport) -> bytes:
    doc = {
        "experiment": report.experiment,
        "config": report.config,
        "results": report.results,
        "checks": report.checks,
        "duration_seconds": report.duration_seconds,
        "version": report.version,
    }
    return (dumps_deterministic(doc) + "\n").encode("utf-8")


def _csv_cell(value) -> str:
    if value is None:
        return "not-comparable"
    if isinstance(value, bool):
        return "1" if value else "0"
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, (float, np.floating)):
        return format_float(float(value))
    if isinstance(value, str):
        return value
    raise ValidationError(f"cannot serialize {type(value).__name__} in a CSV cell")


def to_csv_bytes(report: ExperimentReport) -> bytes:
    lines = [",".join(report.csv_header)]
    for row in report.csv_rows:
        lines.append(",".join(_csv_cell(cell) for cell in row))
    return ("\n".join(lines) + "\n").encode("utf-8")


def write_report(report: ExperimentReport, format: str = "json") -> bytes:
    """Serialize a report as full nested JSON or as the flat CSV series."""
    if format == "json":
        return to_json_bytes(report)
    if format == "csv":
        return to_csv_bytes(report)
    raise ValidationError(f"unknown report format {format!r}; use 'json' or 'csv'")
