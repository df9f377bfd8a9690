"""Deterministic rendering of tabular reports as text, CSV or JSON."""

from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import dataclass, field
from typing import Any, Sequence

FORMATS = ("text", "csv", "json")


@dataclass
class Report:
    """A table plus provenance notes.

    ``cells`` are pre-formatted strings used by the text and CSV renderers;
    ``records`` carry full-precision values for JSON.
    """

    title: str
    columns: Sequence[str]
    cells: list[Sequence[str]] = field(default_factory=list)
    records: list[dict] = field(default_factory=list)
    notes: list[str] = field(default_factory=list)
    extra: dict = field(default_factory=dict)


def _jsonable(value: Any) -> Any:
    if isinstance(value, float) and not math.isfinite(value):
        return "nan" if math.isnan(value) else ("inf" if value > 0 else "-inf")
    if isinstance(value, dict):
        return {k: _jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_jsonable(v) for v in value]
    return value


def _is_numeric(text: str) -> bool:
    try:
        float(text.rstrip("%"))
    except ValueError:
        return False
    return True


def render_text(report: Report) -> str:
    rows = [list(report.columns)] + [list(r) for r in report.cells]
    widths = [max(len(r[i]) for r in rows) for i in range(len(report.columns))]
    lines = [report.title, ""]
    for k, row in enumerate(rows):
        parts = []
        for i, cell in enumerate(row):
            if i > 0 and k > 0 and _is_numeric(cell):
                parts.append(cell.rjust(widths[i]))
            else:
                parts.append(cell.ljust(widths[i]))
        lines.append("  ".join(parts).rstrip())
        if k == 0:
            lines.append("  ".join("-" * w for w in widths))
    if report.notes:
        lines.append("")
        lines.append("Provenance:")
        lines.extend(f"  - {note}" for note in report.notes)
    return "\n".join(lines) + "\n"


def render_csv(report: Report) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(report.columns)
    writer.writerows(report.cells)
    for note in report.notes:
        buf.write(f"# {note}\n")
    return buf.getvalue()


def render_json(report: Report) -> str:
    doc = {"title": report.title, "rows": report.records}
    doc.update(report.extra)
    if report.notes:
        doc["provenance"] = report.notes
    return json.dumps(_jsonable(doc), indent=2, allow_nan=False) + "\n"


def render(report: Report, fmt: str) -> str:
    if fmt == "text":
        return render_text(report)
    if fmt == "csv":
        return render_csv(report)
    if fmt == "json":
        return render_json(report)
    raise ValueError(f"unknown format {fmt!r}")
