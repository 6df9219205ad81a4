"""Parsing, validation, and serialization of task-plan documents.

Wire format: a JSON object with a top-level ``"instructions"`` array; each
entry has ``"instruction"`` (text), ``"visual_type"`` (integer 1..5) and
``"key_components"`` (list of strings). Optional top-level ``"source_query"``
and ``"device_hint"`` are carried through; unknown per-step fields are
preserved but ignored.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Any, Mapping

from ..errors import GuidanceError
from .types import (
    PlanStep,
    TaskPlan,
    VisualType,
    WAIT_PATTERN,
    parse_gesture,
    parse_movement_kind,
    parse_tool_motion,
)


class MalformedDocument(GuidanceError):
    """The document is not parseable as a plan at all."""


@dataclass(frozen=True)
class SchemaViolation:
    """One violated plan-step invariant.

    ``step_index`` is -1 for plan-level problems (e.g. an empty step list).
    """

    step_index: int
    field: str
    reason: str

    def __str__(self) -> str:
        return f"step {self.step_index}: {self.field}: {self.reason}"


class PlanSchemaError(GuidanceError):
    """Raised by parse_plan when one or more steps violate the schema."""

    def __init__(self, violations: list[SchemaViolation]):
        self.violations = violations
        super().__init__("; ".join(str(v) for v in violations))


# Required key_components arity per visual type; -1 means "at least one".
REQUIRED_ARITY: dict[int, int] = {1: -1, 2: 2, 3: 2, 4: 3, 5: 2}


def _clean_components(raw: list[Any]) -> tuple[str, ...]:
    """Trim entries and drop blank-after-trim strings (treated as absent)."""
    out = []
    for entry in raw:
        if isinstance(entry, str):
            entry = entry.strip()
            if entry:
                out.append(entry)
        elif entry is not None:
            out.append(str(entry))
    return tuple(out)


def _check_arity(vt: int, n: int) -> str | None:
    required = REQUIRED_ARITY[vt]
    if required == -1:
        if n < 1:
            return "requires at least 1 entry"
    elif n != required:
        return f"requires exactly {required} entries, got {n}"
    return None


def validate_step(step: PlanStep | Mapping[str, Any], step_index: int = 0) -> list[SchemaViolation]:
    """Return every violated invariant of a step (empty list means ok).

    Accepts either a constructed PlanStep or the raw document mapping, so
    out-of-range enum codes that can never exist on a PlanStep are still
    reportable.
    """
    if isinstance(step, PlanStep):
        data: Mapping[str, Any] = {
            "instruction": step.instruction,
            "visual_type": int(step.visual_type),
            "key_components": list(step.key_components),
        }
    else:
        data = step

    violations: list[SchemaViolation] = []

    def bad(field: str, reason: str) -> None:
        violations.append(SchemaViolation(step_index, field, reason))

    instruction = data.get("instruction")
    if not isinstance(instruction, str) or not instruction.strip():
        bad("instruction", "missing or blank")

    raw_vt = data.get("visual_type")
    if isinstance(raw_vt, str) and raw_vt.strip().lstrip("-").isdigit():
        raw_vt = int(raw_vt)
    vt: int | None = raw_vt if isinstance(raw_vt, int) and not isinstance(raw_vt, bool) else None
    if vt is None or vt not in (1, 2, 3, 4, 5):
        bad("visual_type", f"invalid visual type {raw_vt!r}, expected integer 1..5")
        vt = None

    raw_kc = data.get("key_components")
    if not isinstance(raw_kc, list):
        bad("key_components", "missing or not a list")
        return violations
    components = _clean_components(raw_kc)
    if not components:
        bad("key_components", "must contain a non-blank interaction target")
        return violations

    if vt is None:
        return violations

    arity_problem = _check_arity(vt, len(components))
    if arity_problem is not None:
        bad("key_components", arity_problem)
        return violations

    if vt == VisualType.MOVEMENT:
        try:
            parse_movement_kind(components[1])
        except ValueError:
            bad("key_components[1]", f"not a movement kind: {components[1]!r}")
    elif vt == VisualType.HAND_GESTURE:
        try:
            parse_gesture(components[1])
        except ValueError:
            bad("key_components[1]", f"not a known gesture: {components[1]!r}")
    elif vt == VisualType.TOOL:
        try:
            parse_tool_motion(components[1])
        except ValueError:
            bad("key_components[1]", f"not a tool motion: {components[1]!r}")
        if not components[2].strip():
            bad("key_components[2]", "tool name is blank")
    elif vt == VisualType.WIDGET:
        if WAIT_PATTERN.match(components[1]) is None:
            bad("key_components[1]", f"not mm:ss with fields 00..59: {components[1]!r}")

    return violations


STEP_FIELDS = ("instruction", "visual_type", "key_components")


def _build_step(data: Mapping[str, Any]) -> PlanStep:
    extras = {k: v for k, v in data.items() if k not in STEP_FIELDS}
    raw_vt = data["visual_type"]
    if isinstance(raw_vt, str):
        raw_vt = int(raw_vt)
    return PlanStep(
        instruction=data["instruction"].strip(),
        visual_type=VisualType(raw_vt),
        key_components=_clean_components(data["key_components"]),
        extras=extras,
    )


def parse_plan(document: str) -> TaskPlan:
    """Parse and validate a plan document.

    Validation stops at the first violation per step but keeps scanning the
    remaining steps, so one error report covers the whole document.

    Raises MalformedDocument if the text is not a JSON object with an
    ``"instructions"`` list, PlanSchemaError for any invariant violation.
    """
    try:
        doc = json.loads(document)
    except json.JSONDecodeError as exc:
        raise MalformedDocument(f"not valid JSON: {exc}") from exc
    if not isinstance(doc, dict):
        raise MalformedDocument("top level is not an object")
    raw_steps = doc.get("instructions")
    if not isinstance(raw_steps, list):
        raise MalformedDocument('missing top-level "instructions" list')
    if not raw_steps:
        raise PlanSchemaError([SchemaViolation(-1, "instructions", "plan has no steps")])

    violations: list[SchemaViolation] = []
    steps: list[PlanStep] = []
    for i, raw in enumerate(raw_steps):
        if not isinstance(raw, dict):
            violations.append(SchemaViolation(i, "step", "step is not an object"))
            continue
        step_violations = validate_step(raw, step_index=i)
        if step_violations:
            violations.append(step_violations[0])
            continue
        steps.append(_build_step(raw))
    if violations:
        raise PlanSchemaError(violations)

    device_hint = doc.get("device_hint")
    if isinstance(device_hint, str):
        device_hint = device_hint.strip() or None
    else:
        device_hint = None
    source_query = doc.get("source_query", "")
    if not isinstance(source_query, str):
        source_query = ""
    return TaskPlan(steps=tuple(steps), source_query=source_query, device_hint=device_hint)


def serialize_plan(plan: TaskPlan) -> str:
    """Serialize a TaskPlan back to its wire format (reparses to an equal plan)."""
    doc: dict[str, Any] = {
        "instructions": [
            {
                "instruction": s.instruction,
                "visual_type": int(s.visual_type),
                "key_components": list(s.key_components),
                **dict(s.extras),
            }
            for s in plan.steps
        ]
    }
    if plan.source_query:
        doc["source_query"] = plan.source_query
    if plan.device_hint:
        doc["device_hint"] = plan.device_hint
    return json.dumps(doc, indent=2)
