"""Report writers: text tables mirroring the published layout, CSV, JSON.

Output is a pure function of the report: no timestamps, no environment
details, byte-identical across runs.
"""

from __future__ import annotations

import csv
import io
import json
from importlib import resources
from pathlib import Path

from .metrics import ComponentRow, CountRow, MetricsReport, TypeRow

FORMATS = ("text-table", "csv", "structured")


def _latency_text(value: float | None) -> str:
    return "-" if value is None else f"{value:.2f}"


def render_text(report: MetricsReport) -> str:
    lines: list[str] = []
    if report.plan_rows:
        name_w = max(len(r.category) for r in report.plan_rows) + 2
        header = f"{'':<{name_w}}{'Total Steps':>12}{'Correct Steps':>15}{'Percentage':>12}"
        rule = "-" * len(header)
        lines.append(header)
        lines.append(rule)
        last_group = report.plan_rows[0].group
        for row in report.plan_rows:
            if row.group != last_group:
                lines.append(rule)
                last_group = row.group
            lines.append(
                f"{row.category:<{name_w}}{row.total:>12}{row.correct:>15}"
                f"{row.percentage_text:>12}"
            )
        lines.append(rule)
    if report.type_rows:
        if lines:
            lines.append("")
        labels = [r.label for r in report.type_rows] + [
            "  " + c.label for r in report.type_rows for c in r.components
        ]
        name_w = max(len(l) for l in labels) + 2
        header = f"{'Type / Component':<{name_w}}{'Accuracy':>10}{'Latency (s)':>13}"
        rule = "-" * len(header)
        lines.append(header)
        lines.append(rule)
        for row in report.type_rows:
            lines.append(
                f"{row.label:<{name_w}}{_accuracy_text(row):>10}"
                f"{_latency_text(row.mean_latency_s):>13}"
            )
            for comp in row.components:
                lines.append(
                    f"{'  ' + comp.label:<{name_w}}{_accuracy_text(comp):>10}"
                    f"{_latency_text(comp.mean_latency_s):>13}"
                )
            lines.append(rule)
    return "\n".join(lines) + "\n"


def _accuracy_text(row) -> str:
    p = row.percentage
    return "n/a" if p is None else f"{p:.1f}%"


def render_csv(report: MetricsReport) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["section", "group", "label", "total", "correct", "latency_s", "percentage"])
    for row in report.plan_rows:
        writer.writerow(
            ["plan", row.group, row.category, row.total, row.correct, "", row.percentage_text]
        )
    for row in report.type_rows:
        writer.writerow(
            ["type", "", row.label, row.total, row.correct,
             "" if row.mean_latency_s is None else row.mean_latency_s, _accuracy_text(row)]
        )
        for comp in row.components:
            writer.writerow(
                ["component", row.label, comp.label, comp.total, comp.correct,
                 "" if comp.mean_latency_s is None else comp.mean_latency_s, _accuracy_text(comp)]
            )
    return buf.getvalue()


def parse_csv(text: str) -> MetricsReport:
    """Inverse of render_csv (percentages are derived, so they are ignored)."""
    plan_rows: list[CountRow] = []
    type_rows: list[TypeRow] = []
    pending: dict[str, list[ComponentRow]] = {}
    order: list[TypeRow] = []
    for record in csv.DictReader(io.StringIO(text)):
        total, correct = int(record["total"]), int(record["correct"])
        latency = float(record["latency_s"]) if record["latency_s"] else None
        if record["section"] == "plan":
            plan_rows.append(CountRow(record["label"], total, correct, record["group"]))
        elif record["section"] == "type":
            row = TypeRow(record["label"], total, correct, latency)
            order.append(row)
            pending[record["label"]] = []
        elif record["section"] == "component":
            pending[record["group"]].append(ComponentRow(record["label"], total, correct, latency))
    for row in order:
        type_rows.append(
            TypeRow(row.label, row.total, row.correct, row.mean_latency_s,
                    tuple(pending[row.label]))
        )
    return MetricsReport(plan_rows=tuple(plan_rows), type_rows=tuple(type_rows))


def render_structured(report: MetricsReport) -> str:
    doc = {
        "plan_rows": [
            {
                "category": r.category,
                "group": r.group,
                "total": r.total,
                "correct": r.correct,
                "percentage": r.percentage,
            }
            for r in report.plan_rows
        ],
        "type_rows": [
            {
                "label": r.label,
                "total": r.total,
                "correct": r.correct,
                "accuracy_percent": r.percentage,
                "mean_latency_s": r.mean_latency_s,
                "components": [
                    {
                        "label": c.label,
                        "total": c.total,
                        "correct": c.correct,
                        "accuracy_percent": c.percentage,
                        "mean_latency_s": c.mean_latency_s,
                    }
                    for c in r.components
                ],
            }
            for r in report.type_rows
        ],
    }
    return json.dumps(doc, indent=2, sort_keys=True) + "\n"


def report_schema() -> dict:
    text = resources.files("arguide.evalharness").joinpath("data/report_schema.json").read_text()
    return json.loads(text)


def emit_report(report: MetricsReport, fmt: str, path: str | Path | None = None) -> str:
    if fmt == "text-table":
        rendered = render_text(report)
    elif fmt == "csv":
        rendered = render_csv(report)
    elif fmt == "structured":
        rendered = render_structured(report)
    else:
        raise ValueError(f"unknown report format {fmt!r}; choose from {FORMATS}")
    if path is not None:
        Path(path).write_text(rendered, encoding="utf-8")
    return rendered
