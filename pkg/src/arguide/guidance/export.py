"""Scene-graph export: one JSON document per compiled step.

Every primitive carries reference 2D projections computed through the saved
pose so overlay renderers can be checked for projection parity without
reimplementing trust in themselves.
"""

from __future__ import annotations

import base64
import json

import numpy as np

from ..geometry import BehindCamera, Point3, SceneSnapshot, project
from ..geometry.snapshot import intrinsics_to_meta, pose_to_meta
from ..plan import PlanStep
from .compiler import CompiledStep
from .imaging import encode_png
from .primitives import (
    ArcArrowPayload,
    Box3DPayload,
    GesturePayload,
    GuidancePrimitive,
    ImagePlanePayload,
    ParticlePayload,
    PrimitiveKind,
    TimerPayload,
    ToolPayload,
    arc_points,
)

ARC_EXPORT_SAMPLES = 17


def _xyz(p: Point3) -> list[float]:
    return [p.x, p.y, p.z]


def _project_or_none(point: Point3, snap: SceneSnapshot) -> list[float] | None:
    try:
        q = project(point, snap.intrinsics, snap.pose)
    except BehindCamera:
        return None
    return [q.u, q.v]


def _payload_doc(primitive: GuidancePrimitive) -> dict:
    payload = primitive.payload
    if isinstance(payload, Box3DPayload):
        return {
            "corners": {
                "bl": _xyz(payload.corners.bl),
                "br": _xyz(payload.corners.br),
                "tl": _xyz(payload.corners.tl),
                "tr": _xyz(payload.corners.tr),
            },
            "edge_lengths_m": payload.edge_lengths,
        }
    if isinstance(payload, ParticlePayload):
        return {"effect": payload.effect, "extent_m": payload.extent_m}
    if isinstance(payload, ImagePlanePayload):
        return {
            "crop_png_b64": base64.b64encode(payload.crop_png).decode(),
            "start": _xyz(payload.start),
            "end": _xyz(payload.end),
            "plane_width_m": payload.plane_width_m,
            "plane_height_m": payload.plane_height_m,
            "duration_s": payload.duration_s,
            "loop": payload.loop,
            "pause_s": payload.pause_s,
        }
    if isinstance(payload, ArcArrowPayload):
        return {
            "axis": [float(v) for v in payload.axis],
            "direction": payload.direction.value,
            "radius_m": payload.radius_m,
            "sweep_deg": payload.sweep_deg,
            "center": _xyz(payload.center),
        }
    if isinstance(payload, GesturePayload):
        return {
            "asset": {
                "library_id": payload.asset.library_id,
                "fallback_generated": payload.asset.fallback_generated,
            },
            "gesture": payload.gesture.value,
        }
    if isinstance(payload, ToolPayload):
        motion = None
        if payload.motion is not None:
            motion = {
                "start": _xyz(payload.motion.start),
                "end": _xyz(payload.motion.end),
                "duration_s": payload.motion.duration_s,
                "loop": payload.motion.loop,
                "pause_s": payload.motion.pause_s,
            }
        return {
            "asset": {
                "library_id": payload.asset.library_id,
                "fallback_generated": payload.asset.fallback_generated,
            },
            "tool_name": payload.tool_name,
            "motion": motion,
        }
    if isinstance(payload, TimerPayload):
        return {"total_seconds": payload.total_seconds}
    raise TypeError(f"unknown payload {type(payload).__name__}")


def _ref_projections(primitive: GuidancePrimitive, snap: SceneSnapshot) -> dict:
    refs: dict = {"anchor": _project_or_none(primitive.transform.position, snap)}
    payload = primitive.payload
    if isinstance(payload, Box3DPayload):
        refs["corners"] = {
            name: _project_or_none(getattr(payload.corners, name), snap)
            for name in ("bl", "br", "tl", "tr")
        }
    elif isinstance(payload, ImagePlanePayload):
        refs["start"] = _project_or_none(payload.start, snap)
        refs["end"] = _project_or_none(payload.end, snap)
    elif isinstance(payload, ArcArrowPayload):
        refs["arc"] = [
            _project_or_none(p, snap) for p in arc_points(payload, ARC_EXPORT_SAMPLES)
        ]
    elif isinstance(payload, (GesturePayload, ToolPayload)):
        tip = Point3.from_array(
            primitive.transform.position.as_array() + 0.05 * primitive.transform.orientation[:, 1]
        )
        refs["axis_tip"] = _project_or_none(tip, snap)
        if isinstance(payload, ToolPayload) and payload.motion is not None:
            refs["start"] = _project_or_none(payload.motion.start, snap)
            refs["end"] = _project_or_none(payload.motion.end, snap)
    return refs


def _primitive_doc(primitive: GuidancePrimitive, snap: SceneSnapshot) -> dict:
    t = primitive.transform
    return {
        "kind": primitive.kind.value,
        "transform": {
            "position": _xyz(t.position),
            "orientation": [float(v) for v in np.asarray(t.orientation).reshape(-1)],
            "scale": list(t.scale),
        },
        "payload": _payload_doc(primitive),
        "ref_projections": _ref_projections(primitive, snap),
    }


def export_step(compiled: CompiledStep, step: PlanStep, snap: SceneSnapshot) -> dict:
    """Build the per-step scene-graph document (timings stay out on purpose:
    the document must be byte-stable across identical runs).

    The saved frame travels inline so overlay clients can composite over the
    exact view the guidance was anchored to.
    """
    return {
        "step_index": compiled.step_index,
        "instruction": step.instruction,
        "visual_type": int(compiled.visual_type),
        "category": compiled.category,
        "scene_id": snap.scene_id,
        "camera": {
            "intrinsics": intrinsics_to_meta(snap.intrinsics),
            "pose": pose_to_meta(snap.pose),
        },
        "frame_png_b64": base64.b64encode(encode_png(snap.image)).decode(),
        "primitives": [_primitive_doc(p, snap) for p in compiled.primitives],
    }


def export_json(doc: dict) -> str:
    return json.dumps(doc, sort_keys=True, separators=(",", ":"))
