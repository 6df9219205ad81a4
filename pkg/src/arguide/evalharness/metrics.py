"""Outcome records and their aggregation into the two published table shapes.

The user-query table counts each row independently (field rows over all
steps, per-type rows over steps whose plan was fully correct, a Total row
from the overall verdict). Rows never store percentages; they are recomputed
from (correct, total) at render time, one decimal.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path

from ..plan import VisualType

TYPE_LABELS = {
    VisualType.HIGHLIGHT: "Highlight",
    VisualType.MOVEMENT: "Movement",
    VisualType.HAND_GESTURE: "Hand Gesture",
    VisualType.TOOL: "Tool",
    VisualType.WIDGET: "Widget",
}

# canonical ordering for the balanced per-type evaluation rows
TYPE_EVAL_ORDER = [
    "Highlight",
    "Translational Movement",
    "Rotational Movement",
    "Hand Gesture",
    "Tool",
    "Widget",
]

COMPONENT_ORDER = [
    "2D Box",
    "End Position",
    "Segmentation",
    "Rotation Info",
    "Type",
    "Placement",
    "Tool Gen",
]


def percentage(correct: int, total: int) -> float | None:
    if total == 0:
        return None
    return round(100.0 * correct / total, 1)


def percentage_text(correct: int, total: int) -> str:
    p = percentage(correct, total)
    return "n/a" if p is None else f"{p:.1f}%"


@dataclass(frozen=True)
class StepOutcome:
    """Per-step verdicts from one replayed task.

    In a replay the derived fields follow mechanically (plan_correct = all
    three field verdicts; end-to-end = plan and guidance both correct).
    Outcome fixtures may carry explicit flags instead: the published
    user-query table's per-type correct counts exceed its own total, so rows
    must be reproducible independently.
    """

    task_id: str
    step_index: int
    expected_type: int
    instruction_correct: bool
    type_correct: bool
    component_correct: bool
    plan_correct: bool
    guidance_assessed: bool
    guidance_correct: bool
    end_to_end_correct: bool

    @staticmethod
    def from_verdicts(
        task_id: str,
        step_index: int,
        expected_type: int,
        instruction_correct: bool,
        type_correct: bool,
        component_correct: bool,
        guidance_correct: bool,
    ) -> "StepOutcome":
        plan_correct = instruction_correct and type_correct and component_correct
        return StepOutcome(
            task_id=task_id,
            step_index=step_index,
            expected_type=expected_type,
            instruction_correct=instruction_correct,
            type_correct=type_correct,
            component_correct=component_correct,
            plan_correct=plan_correct,
            guidance_assessed=plan_correct,
            guidance_correct=plan_correct and guidance_correct,
            end_to_end_correct=plan_correct and guidance_correct,
        )


@dataclass(frozen=True)
class CountRow:
    category: str
    total: int
    correct: int
    group: str  # "field" | "type" | "total"

    def __post_init__(self) -> None:
        if self.correct > self.total:
            raise ValueError(f"{self.category}: correct {self.correct} > total {self.total}")

    @property
    def percentage(self) -> float | None:
        return percentage(self.correct, self.total)

    @property
    def percentage_text(self) -> str:
        return percentage_text(self.correct, self.total)


@dataclass(frozen=True)
class ComponentRow:
    label: str
    total: int
    correct: int
    mean_latency_s: float | None

    @property
    def percentage(self) -> float | None:
        return percentage(self.correct, self.total)


@dataclass(frozen=True)
class TypeRow:
    label: str
    total: int
    correct: int
    mean_latency_s: float | None
    components: tuple[ComponentRow, ...] = ()

    @property
    def percentage(self) -> float | None:
        return percentage(self.correct, self.total)


@dataclass(frozen=True)
class MetricsReport:
    plan_rows: tuple[CountRow, ...] = ()
    type_rows: tuple[TypeRow, ...] = ()

    def plan_row(self, category: str) -> CountRow:
        for row in self.plan_rows:
            if row.category == category:
                return row
        raise KeyError(category)

    def type_row(self, label: str) -> TypeRow:
        for row in self.type_rows:
            if row.label == label:
                return row
        raise KeyError(label)


def aggregate(outcomes: list[StepOutcome]) -> MetricsReport:
    """Fold step outcomes into the user-query table (order-independent)."""
    if not outcomes:
        raise ValueError("need at least one outcome")
    n = len(outcomes)
    rows = [
        CountRow("Text Instruction", n, sum(o.instruction_correct for o in outcomes), "field"),
        CountRow("Visual Type", n, sum(o.type_correct for o in outcomes), "field"),
        CountRow("Key Component", n, sum(o.component_correct for o in outcomes), "field"),
    ]
    for vt in VisualType:
        bucket = [o for o in outcomes if o.expected_type == int(vt) and o.plan_correct]
        rows.append(
            CountRow(
                TYPE_LABELS[vt],
                len(bucket),
                sum(o.guidance_correct for o in bucket),
                "type",
            )
        )
    rows.append(CountRow("Total", n, sum(o.end_to_end_correct for o in outcomes), "total"))
    return MetricsReport(plan_rows=tuple(rows))


@dataclass(frozen=True)
class TypeEvalRecord:
    """One step of the balanced per-type evaluation."""

    type_label: str
    correct: bool
    latency_s: float | None = None
    components: dict[str, dict] = field(default_factory=dict)


def _mean(values: list[float]) -> float | None:
    return round(sum(values) / len(values), 2) if values else None


def aggregate_type_eval(records: list[TypeEvalRecord]) -> MetricsReport:
    """Fold balanced-evaluation records into per-type accuracy/latency rows."""
    if not records:
        raise ValueError("need at least one record")
    labels = sorted(
        {r.type_label for r in records},
        key=lambda l: (TYPE_EVAL_ORDER.index(l) if l in TYPE_EVAL_ORDER else 99, l),
    )
    type_rows = []
    for label in labels:
        bucket = [r for r in records if r.type_label == label]
        component_labels = sorted(
            {c for r in bucket for c in r.components},
            key=lambda l: (COMPONENT_ORDER.index(l) if l in COMPONENT_ORDER else 99, l),
        )
        components = []
        for comp in component_labels:
            seen = [r.components[comp] for r in bucket if comp in r.components]
            latencies = [c["latency_s"] for c in seen if c.get("latency_s") is not None]
            components.append(
                ComponentRow(
                    label=comp,
                    total=len(seen),
                    correct=sum(bool(c.get("correct")) for c in seen),
                    mean_latency_s=_mean(latencies),
                )
            )
        latencies = [r.latency_s for r in bucket if r.latency_s is not None]
        type_rows.append(
            TypeRow(
                label=label,
                total=len(bucket),
                correct=sum(r.correct for r in bucket),
                mean_latency_s=_mean(latencies),
                components=tuple(components),
            )
        )
    return MetricsReport(type_rows=tuple(type_rows))


# -- fixture loading ---------------------------------------------------------


def load_outcomes(path: str | Path) -> list[StepOutcome]:
    doc = json.loads(Path(path).read_text())
    return [StepOutcome(**record) for record in doc["outcomes"]]


def load_type_records(path: str | Path) -> list[TypeEvalRecord]:
    doc = json.loads(Path(path).read_text())
    return [TypeEvalRecord(**record) for record in doc["records"]]
