"""Domain types for structured task plans.

A task plan is an ordered list of steps. Each step carries a short text
instruction, one of five visual-guidance types, and a list of key components
whose layout depends on the type (the first entry always names the physical
part the user interacts with, described as property + name).
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from enum import Enum, IntEnum
from typing import Any, Mapping


class VisualType(IntEnum):
    """The five-way visual guidance taxonomy."""

    HIGHLIGHT = 1
    MOVEMENT = 2
    HAND_GESTURE = 3
    TOOL = 4
    WIDGET = 5


class GestureKind(str, Enum):
    """Six static hand poses for one-handed machine interactions."""

    POKE = "poke"
    HOOK = "hook"
    PALM_PRESS = "palm_press"
    GRIP = "grip"
    CYLINDRICAL_GRASP = "cylindrical_grasp"
    PINCH = "pinch"


class ToolMotion(str, Enum):
    """How a hand-held tool moves against the target surface."""

    UP_AND_DOWN = "up_and_down"
    LEFT_AND_RIGHT = "left_and_right"
    ROTATE = "rotate"
    CLOCKWISE = "clockwise"
    COUNTERCLOCKWISE = "counterclockwise"


class MovementKind(str, Enum):
    TRANSLATION = "translation"
    ROTATION = "rotation"


def _canonical(text: str) -> str:
    # "palm press", "Palm-Press" and "palm_press" all name the same member.
    return re.sub(r"[\s_-]+", "_", text.strip().lower())


def parse_gesture(text: str) -> GestureKind:
    """Parse a gesture name, tolerating spacing/caps variants."""
    try:
        return GestureKind(_canonical(text))
    except ValueError:
        raise ValueError(f"unknown gesture {text!r}") from None


def parse_tool_motion(text: str) -> ToolMotion:
    """Parse a tool motion name ("up and down", "counter clockwise", ...)."""
    canon = _canonical(text)
    if canon == "counter_clockwise":
        canon = "counterclockwise"
    try:
        return ToolMotion(canon)
    except ValueError:
        raise ValueError(f"unknown tool motion {text!r}") from None


def parse_movement_kind(text: str) -> MovementKind:
    try:
        return MovementKind(_canonical(text))
    except ValueError:
        raise ValueError(f"unknown movement kind {text!r}") from None


WAIT_PATTERN = re.compile(r"^([0-5]\d):([0-5]\d)$")


class PatternError(ValueError):
    """A wait duration string is not mm:ss with both fields in 00..59."""


def parse_wait_duration(text: str) -> int:
    """Parse an mm:ss wait time into whole seconds (0..3599)."""
    m = WAIT_PATTERN.match(text.strip())
    if m is None:
        raise PatternError(f"not an mm:ss duration: {text!r}")
    return 60 * int(m.group(1)) + int(m.group(2))


@dataclass(frozen=True)
class PlanStep:
    """One step of a task plan.

    ``key_components[0]`` names the interaction target; further entries carry
    the type-specific payload (movement kind, gesture, tool motion + tool
    name, or wait duration). ``extras`` preserves unknown document fields.
    """

    instruction: str
    visual_type: VisualType
    key_components: tuple[str, ...]
    extras: Mapping[str, Any] = field(default_factory=dict)

    @property
    def target(self) -> str:
        return self.key_components[0]

    def movement_kind(self) -> MovementKind:
        return parse_movement_kind(self.key_components[1])

    def gesture(self) -> GestureKind:
        return parse_gesture(self.key_components[1])

    def tool_motion(self) -> ToolMotion:
        return parse_tool_motion(self.key_components[1])

    def tool_name(self) -> str:
        return self.key_components[2]

    def wait_seconds(self) -> int:
        return parse_wait_duration(self.key_components[1])


@dataclass(frozen=True)
class TaskPlan:
    """An ordered, non-empty list of plan steps for one user query."""

    steps: tuple[PlanStep, ...]
    source_query: str = ""
    device_hint: str | None = None
