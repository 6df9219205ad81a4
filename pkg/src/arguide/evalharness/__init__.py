"""Fixture replay and reproduction of the published metric tables."""

from .metrics import (
    ComponentRow,
    CountRow,
    MetricsReport,
    StepOutcome,
    TypeEvalRecord,
    TypeRow,
    aggregate,
    aggregate_type_eval,
    load_outcomes,
    load_type_records,
    percentage,
    percentage_text,
)
from .replay import (
    BundleFormatError,
    ConfigError,
    FixtureBundle,
    ReplayResult,
    StepDetail,
    StepLabel,
    normalize_component,
    replay,
)
from .report import FORMATS, emit_report, parse_csv, render_csv, render_structured, render_text, report_schema

__all__ = [
    "BundleFormatError",
    "ComponentRow",
    "ConfigError",
    "CountRow",
    "FORMATS",
    "FixtureBundle",
    "MetricsReport",
    "ReplayResult",
    "StepDetail",
    "StepLabel",
    "StepOutcome",
    "TypeEvalRecord",
    "TypeRow",
    "aggregate",
    "aggregate_type_eval",
    "emit_report",
    "load_outcomes",
    "load_type_records",
    "normalize_component",
    "parse_csv",
    "percentage",
    "percentage_text",
    "render_csv",
    "render_structured",
    "render_text",
    "replay",
    "report_schema",
]
