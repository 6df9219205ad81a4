"""Reply parsing for box, translation, and rotation queries.

Providers answer in loose JSON, sometimes wrapped in a markdown fence.
Coordinate order follows the prompt contracts: boxes are
[y_min, x_min, y_max, x_max], translation targets are [xEnd, yEnd].
"""

from __future__ import annotations

import json
import logging
import re
from typing import Any

from ..geometry import BoundingBox2D, Point2, box_from_provider
from .types import (
    BoundingBoxResult,
    ParseError,
    RotationAxis,
    RotationDirection,
    RotationResult,
    TranslationResult,
    ZeroAreaBox,
)

log = logging.getLogger(__name__)

_FENCE_RE = re.compile(r"^```[a-zA-Z]*\n(.*?)\n```\s*$", re.DOTALL)


def _strip_fence(text: str) -> str:
    m = _FENCE_RE.match(text.strip())
    return m.group(1) if m else text


def _load_reply(text: str) -> dict[str, Any]:
    try:
        doc = json.loads(_strip_fence(text))
    except json.JSONDecodeError as exc:
        raise ParseError(f"reply is not JSON: {exc}") from exc
    if not isinstance(doc, dict):
        raise ParseError("reply is not a JSON object")
    return doc


def _parse_box(values: Any, image_width: int, image_height: int) -> BoundingBox2D:
    if not isinstance(values, list) or len(values) != 4:
        raise ParseError(f"pos must be a 4-element list, got {values!r}")
    try:
        y0, x0, y1, x1 = (float(v) for v in values)
    except (TypeError, ValueError) as exc:
        raise ParseError(f"non-numeric box values: {values!r}") from exc
    if y0 > y1 or x0 > x1:
        raise ParseError(f"inverted box: {values!r}")
    try:
        box = box_from_provider([y0, x0, y1, x1], image_width, image_height)
    except ValueError as exc:
        raise ZeroAreaBox(str(exc)) from exc
    if max(image_width, image_height) > 1000 and max(y0, x0, y1, x1) <= 1000.0:
        log.info("box %s interpreted as 0-1000 normalized units", values)
    return box


def parse_bounding_box_reply(text: str, image_width: int, image_height: int) -> BoundingBoxResult:
    doc = _load_reply(text)
    if "pos" not in doc:
        raise ParseError('reply missing "pos"')
    box = _parse_box(doc["pos"], image_width, image_height)
    return BoundingBoxResult(name=str(doc.get("name", "")), box=box)


def parse_translation_reply(
    text: str, image_width: int, image_height: int
) -> tuple[TranslationResult, list[str]]:
    """Parse a translation reply; returns the result plus any clamp warnings."""
    doc = _load_reply(text)
    if "pos" not in doc:
        raise ParseError('reply missing "pos"')
    if "target_pos" not in doc:
        raise ParseError('reply missing "target_pos"')
    box = _parse_box(doc["pos"], image_width, image_height)
    raw_target = doc["target_pos"]
    if not isinstance(raw_target, list) or len(raw_target) != 2:
        raise ParseError(f"target_pos must be [xEnd, yEnd], got {raw_target!r}")
    try:
        tx, ty = float(raw_target[0]), float(raw_target[1])
    except (TypeError, ValueError) as exc:
        raise ParseError(f"non-numeric target: {raw_target!r}") from exc
    warnings: list[str] = []
    cx = min(max(tx, 0.0), float(image_width))
    cy = min(max(ty, 0.0), float(image_height))
    if (cx, cy) != (tx, ty):
        warnings.append(f"target ({tx}, {ty}) clamped to image bounds ({cx}, {cy})")
    return TranslationResult(name=str(doc.get("name", "")), box=box, target=Point2(cx, cy)), warnings


_DIRECTION_ALIASES = {
    "cw": RotationDirection.CW,
    "clockwise": RotationDirection.CW,
    "ccw": RotationDirection.CCW,
    "counterclockwise": RotationDirection.CCW,
    "counter clockwise": RotationDirection.CCW,
    "counter-clockwise": RotationDirection.CCW,
}


def parse_rotation_reply(text: str) -> RotationResult:
    doc = _load_reply(text)
    rotation = doc.get("rotation")
    if not isinstance(rotation, list) or len(rotation) != 2:
        raise ParseError(f'reply needs "rotation": [axis, direction], got {rotation!r}')
    raw_axis, raw_direction = str(rotation[0]).strip().lower(), str(rotation[1]).strip().lower()
    try:
        axis = RotationAxis(raw_axis)
    except ValueError:
        raise ParseError(f"unknown rotation axis {rotation[0]!r}") from None
    direction = _DIRECTION_ALIASES.get(raw_direction)
    if direction is None:
        raise ParseError(f"unknown rotation direction {rotation[1]!r}")
    return RotationResult(axis=axis, direction=direction)
