"""Structured task plans: types, parsing, validation, reference classifier."""

from .classifier import (
    Classification,
    ClassifierLexicons,
    classify_visual_type,
    default_lexicons,
    load_lexicons,
    parse_lexicons,
)
from .parsing import (
    MalformedDocument,
    PlanSchemaError,
    SchemaViolation,
    parse_plan,
    serialize_plan,
    validate_step,
)
from .types import (
    GestureKind,
    MovementKind,
    PatternError,
    PlanStep,
    TaskPlan,
    ToolMotion,
    VisualType,
    parse_gesture,
    parse_movement_kind,
    parse_tool_motion,
    parse_wait_duration,
)

__all__ = [
    "Classification",
    "ClassifierLexicons",
    "GestureKind",
    "MalformedDocument",
    "MovementKind",
    "PatternError",
    "PlanSchemaError",
    "PlanStep",
    "SchemaViolation",
    "TaskPlan",
    "ToolMotion",
    "VisualType",
    "classify_visual_type",
    "default_lexicons",
    "load_lexicons",
    "parse_gesture",
    "parse_lexicons",
    "parse_movement_kind",
    "parse_plan",
    "parse_tool_motion",
    "parse_wait_duration",
    "serialize_plan",
    "validate_step",
]
