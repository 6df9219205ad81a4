"""Compiles one plan step against one scene snapshot into guidance primitives.

Dispatch is total over the five visual types:

    1 highlight  -> box3d, or a particle emitter when the shortest world
                    edge of the lifted box is under 5 cm
    2 movement   -> a blue-highlighted crop on an animated image plane
                    (translation), or a static plane plus an arc arrow
                    (rotation)
    3 gesture    -> a hand-pose asset at the lifted box center
    4 tool       -> a tool asset seated on the surface normal, with either a
                    translate animation or a self-rotation arc
    5 widget     -> a countdown timer above the component

All outputs are in world coordinates anchored by the snapshot's saved pose.
"""

from __future__ import annotations

import time
from contextlib import contextmanager
from dataclasses import dataclass

import numpy as np

from ..errors import GuidanceError
from ..geometry import (
    BoundingBox2D,
    CameraPose,
    HoleError,
    Point2,
    Point3,
    SceneSnapshot,
    WorldBox,
    bbox_to_world_corners,
    face_pose_orientation,
    sample_depth,
    surface_normal,
    unproject,
)
from ..geometry.orientation import orthonormal_frame_with_z
from ..plan import (
    ClassifierLexicons,
    MovementKind,
    PlanSchemaError,
    PlanStep,
    VisualType,
    classify_visual_type,
    validate_step,
)
from ..vision import FrameRef, Gateway, RotationAxis, RotationDirection
from .assets import AssetLibrary, default_asset_library
from .imaging import crop_image, encode_png, enhance_blue, image_plane_scale
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
    Transform,
    TranslateMotion,
)

# Highlight boxes whose shortest world edge is under this are replaced with
# a particle effect at the box center; exactly at the threshold stays a box.
PARTICLE_THRESHOLD_M = 0.05

TRANSLATION_DURATION_S = 2.0
LOOP_PAUSE_S = 0.5
ARC_SWEEP_DEG = 180.0

_AXIS_VECTORS = {
    RotationAxis.X: np.array([1.0, 0.0, 0.0]),
    RotationAxis.Y: np.array([0.0, 1.0, 0.0]),
    RotationAxis.Z: np.array([0.0, 0.0, 1.0]),
}

CATEGORY_BY_KIND = {
    PrimitiveKind.BOX3D: "highlight",
    PrimitiveKind.PARTICLE_EMITTER: "highlight",
    PrimitiveKind.IMAGE_PLANE_ANIMATION: "movement",
    PrimitiveKind.ARC_ARROW: "movement",
    PrimitiveKind.GESTURE_PLACEMENT: "gesture",
    PrimitiveKind.TOOL_PLACEMENT: "tool",
    PrimitiveKind.TIMER_WIDGET: "widget",
}


class CompileError(GuidanceError):
    """A step failed to compile; carries the step index and failing stage."""

    def __init__(self, step_index: int, stage: str, cause: Exception):
        self.step_index = step_index
        self.stage = stage
        self.cause = cause
        super().__init__(f"step {step_index} failed at stage {stage}: {cause}")


@dataclass(frozen=True)
class StepTiming:
    vision_s: float
    geometry_s: float
    total_s: float


@dataclass(frozen=True, eq=False)
class CompiledStep:
    step_index: int
    visual_type: VisualType
    primitives: tuple[GuidancePrimitive, ...]
    timing: StepTiming
    notes: tuple[str, ...] = ()

    @property
    def category(self) -> str:
        return CATEGORY_BY_KIND[self.primitives[0].kind]

    @property
    def kinds(self) -> tuple[str, ...]:
        return tuple(p.kind.value for p in self.primitives)


class _Stages:
    def __init__(self) -> None:
        self.vision = 0.0
        self.geometry = 0.0
        self.current = "dispatch"

    @contextmanager
    def stage(self, name: str):
        previous = self.current
        self.current = name
        start = time.perf_counter()
        ok = False
        try:
            yield
            ok = True
        finally:
            elapsed = time.perf_counter() - start
            if name == "vision":
                self.vision += elapsed
            else:
                self.geometry += elapsed
            if ok:
                # on failure, keep the failing stage visible for error tags
                self.current = previous


class _StepContext:
    """Per-compile scratch: snapshot views, stage clocks, and note flags."""

    def __init__(
        self,
        step: PlanStep,
        snap: SceneSnapshot,
        gateway: Gateway,
        initial_snapshot: SceneSnapshot | None,
        assets: AssetLibrary,
    ) -> None:
        self.step = step
        self.snap = snap
        self.gateway = gateway
        self.assets = assets
        self.frame = FrameRef(frame_id=snap.scene_id, image=snap.image)
        if initial_snapshot is not None:
            self.initial_frame = FrameRef(
                frame_id=initial_snapshot.scene_id, image=initial_snapshot.image
            )
            self.initial_rotation = initial_snapshot.pose.rotation
        else:
            self.initial_frame = self.frame
            self.initial_rotation = np.eye(3)
        self.stages = _Stages()
        self.notes: list[str] = []

    @property
    def K(self):
        return self.snap.intrinsics

    @property
    def pose(self) -> CameraPose:
        return self.snap.pose

    def depth_at(self, p: Point2) -> float:
        return sample_depth(self.snap.depth, p, self.K.width, self.K.height)

    def depth_or_fallback(self, p: Point2, fallback: float, what: str) -> float:
        try:
            return self.depth_at(p)
        except HoleError:
            self.notes.append(f"{what}: no valid depth, reusing {fallback:.3f} m")
            return fallback

    def lift(self, p: Point2, d: float) -> Point3:
        return unproject(p, d, self.K, self.pose)

    def world_box(self, box: BoundingBox2D) -> WorldBox:
        return bbox_to_world_corners(box, self.snap.depth, self.K, self.pose)

    def billboard(self, anchor: Point3) -> np.ndarray:
        return face_pose_orientation(anchor, self.pose)


def compile_step(
    step: PlanStep,
    snap: SceneSnapshot,
    gateway: Gateway,
    *,
    step_index: int = 0,
    initial_snapshot: SceneSnapshot | None = None,
    assets: AssetLibrary | None = None,
    lexicons: ClassifierLexicons | None = None,
) -> CompiledStep:
    """Compile a step; validation and the classifier cross-check run first.

    Gateway and geometry errors are re-raised as CompileError tagged with the
    step index and the failing stage; the original exception is chained.
    """
    total_start = time.perf_counter()
    violations = validate_step(step, step_index=step_index)
    if violations:
        raise CompileError(step_index, "validation", PlanSchemaError(violations))

    ctx = _StepContext(step, snap, gateway, initial_snapshot, assets or default_asset_library())

    verdict = classify_visual_type(step.instruction, lexicons)
    if verdict.visual_type != step.visual_type:
        ctx.notes.append(
            "classifier-mismatch: provider assigned type "
            f"{int(step.visual_type)}, reference classifier says "
            f"{int(verdict.visual_type)} (rule={verdict.rule}, token={verdict.token})"
        )

    compilers = {
        VisualType.HIGHLIGHT: compile_highlight,
        VisualType.MOVEMENT: compile_movement,
        VisualType.HAND_GESTURE: compile_hand_gesture,
        VisualType.TOOL: compile_tool,
        VisualType.WIDGET: compile_widget,
    }
    try:
        primitives = compilers[step.visual_type](ctx)
    except GuidanceError as exc:
        raise CompileError(step_index, ctx.stages.current, exc) from exc

    timing = StepTiming(
        vision_s=ctx.stages.vision,
        geometry_s=ctx.stages.geometry,
        total_s=time.perf_counter() - total_start,
    )
    return CompiledStep(
        step_index=step_index,
        visual_type=step.visual_type,
        primitives=tuple(primitives),
        timing=timing,
        notes=tuple(ctx.notes),
    )


# ---------------------------------------------------------------------------
# Per-type compilers
# ---------------------------------------------------------------------------


def compile_highlight(ctx: _StepContext) -> list[GuidancePrimitive]:
    with ctx.stages.stage("vision"):
        result = ctx.gateway.request_bounding_box(ctx.frame, ctx.step.target, visual_type=1)
    with ctx.stages.stage("geometry"):
        world = ctx.world_box(result.box)
        if world.min_edge < PARTICLE_THRESHOLD_M:
            transform = Transform(position=world.center, orientation=np.eye(3))
            payload = ParticlePayload(extent_m=max(world.min_edge, 0.02))
            kind = PrimitiveKind.PARTICLE_EMITTER
        else:
            transform = Transform(position=world.center, orientation=np.eye(3))
            payload = Box3DPayload(corners=world, edge_lengths=world.edge_lengths)
            kind = PrimitiveKind.BOX3D
    return [GuidancePrimitive(kind=kind, transform=transform, payload=payload, anchor_pose=ctx.pose)]


def _highlighted_plane(
    ctx: _StepContext,
    box: BoundingBox2D,
    start: Point3,
    end: Point3,
    mask,
    loop: bool,
) -> GuidancePrimitive:
    crop = crop_image(ctx.snap.image, box)
    rgba = enhance_blue(crop, mask)
    d_center = ctx.depth_at(box.center)
    width_m, height_m = image_plane_scale(box, d_center, ctx.K)
    payload = ImagePlanePayload(
        crop_png=encode_png(rgba),
        start=start,
        end=end,
        plane_width_m=width_m,
        plane_height_m=height_m,
        duration_s=TRANSLATION_DURATION_S,
        loop=loop,
        pause_s=LOOP_PAUSE_S,
    )
    transform = Transform(position=start, orientation=ctx.billboard(start))
    return GuidancePrimitive(
        kind=PrimitiveKind.IMAGE_PLANE_ANIMATION,
        transform=transform,
        payload=payload,
        anchor_pose=ctx.pose,
    )


def compile_movement(ctx: _StepContext) -> list[GuidancePrimitive]:
    if ctx.step.movement_kind() is MovementKind.TRANSLATION:
        return compile_movement_translation(ctx)
    return compile_movement_rotation(ctx)


def compile_movement_translation(ctx: _StepContext) -> list[GuidancePrimitive]:
    with ctx.stages.stage("vision"):
        result = ctx.gateway.request_translation_target(
            ctx.frame, ctx.step.target, ctx.step.instruction, visual_type=2
        )
        mask = ctx.gateway.request_segmentation(ctx.frame, result.box, visual_type=2)
    with ctx.stages.stage("geometry"):
        d_start = ctx.depth_at(result.box.center)
        start = ctx.lift(result.box.center, d_start)
        d_end = ctx.depth_or_fallback(result.target, d_start, "translation target")
        end = ctx.lift(result.target, d_end)
        plane = _highlighted_plane(ctx, result.box, start, end, mask, loop=True)
    return [plane]


def compile_movement_rotation(ctx: _StepContext) -> list[GuidancePrimitive]:
    with ctx.stages.stage("vision"):
        bbox = ctx.gateway.request_bounding_box(ctx.frame, ctx.step.target, visual_type=2)
        mask = ctx.gateway.request_segmentation(ctx.frame, bbox.box, visual_type=2)
        rotation = ctx.gateway.request_rotation_info(
            ctx.initial_frame, ctx.frame, ctx.step.target, ctx.step.instruction, visual_type=2
        )
    with ctx.stages.stage("geometry"):
        world = ctx.world_box(bbox.box)
        center = world.center
        # axis letters live in the initial frame that fixed the world axes
        axis = ctx.initial_rotation @ _AXIS_VECTORS[rotation.axis]
        arc_payload = ArcArrowPayload(
            axis=axis,
            direction=rotation.direction,
            radius_m=world.max_edge / 2.0,
            sweep_deg=ARC_SWEEP_DEG,
            center=center,
        )
        arc = GuidancePrimitive(
            kind=PrimitiveKind.ARC_ARROW,
            transform=Transform(position=center, orientation=orthonormal_frame_with_z(axis)),
            payload=arc_payload,
            anchor_pose=ctx.pose,
        )
        d_center = ctx.depth_at(bbox.box.center)
        anchor = ctx.lift(bbox.box.center, d_center)
        plane = _highlighted_plane(ctx, bbox.box, anchor, anchor, mask, loop=False)
    return [arc, plane]


def compile_hand_gesture(ctx: _StepContext) -> list[GuidancePrimitive]:
    gesture = ctx.step.gesture()
    asset = ctx.assets.resolve(ctx.assets.gesture_id(gesture.value))
    if asset.fallback_generated:
        ctx.notes.append(f"gesture asset {asset.library_id!r} not in library")
    with ctx.stages.stage("vision"):
        result = ctx.gateway.request_bounding_box(ctx.frame, ctx.step.target, visual_type=3)
    with ctx.stages.stage("geometry"):
        center = result.box.center
        position = ctx.lift(center, ctx.depth_at(center))
        transform = Transform(position=position, orientation=ctx.billboard(position))
    payload = GesturePayload(asset=asset, gesture=gesture)
    return [
        GuidancePrimitive(
            kind=PrimitiveKind.GESTURE_PLACEMENT,
            transform=transform,
            payload=payload,
            anchor_pose=ctx.pose,
        )
    ]


def _rot_x(sign: int) -> np.ndarray:
    # exact +/-90 degree rotation about local x
    return np.array([[1.0, 0.0, 0.0], [0.0, 0.0, -float(sign)], [0.0, float(sign), 0.0]])


def compile_tool(ctx: _StepContext) -> list[GuidancePrimitive]:
    motion = ctx.step.tool_motion()
    tool_id = ctx.assets.tool_id(ctx.step.tool_name())
    asset = ctx.assets.resolve(tool_id)
    if asset.fallback_generated:
        ctx.notes.append(f"tool asset {tool_id!r} missing from library, using generated fallback")

    with ctx.stages.stage("vision"):
        result = ctx.gateway.request_bounding_box(ctx.frame, ctx.step.target, visual_type=4)
    box = result.box

    with ctx.stages.stage("geometry"):
        bl_px = Point2(box.x_min, box.y_max)
        br_px = Point2(box.x_max, box.y_max)
        center_px = box.center
        bl = ctx.lift(bl_px, ctx.depth_at(bl_px))
        br = ctx.lift(br_px, ctx.depth_at(br_px))
        d_center = ctx.depth_at(center_px)
        center = ctx.lift(center_px, d_center)
        normal = surface_normal(bl, br, center, Point3.from_array(ctx.pose.origin))

        bc_px = Point2((box.x_min + box.x_max) / 2.0, box.y_max)
        bc = ctx.lift(bc_px, ctx.depth_or_fallback(bc_px, d_center, "bottom-center"))
        forward = _project_out(bc.as_array() - center.as_array(), normal)
        if np.linalg.norm(forward) < 1e-9:
            # bottom-center collapses onto the center: fall back to a
            # camera-facing yaw
            ctx.notes.append("tool yaw fallback: bottom-center coincides with center")
            forward = _project_out(ctx.pose.origin - center.as_array(), normal)
        if np.linalg.norm(forward) < 1e-9:
            forward = _any_perpendicular(normal)
        forward = forward / np.linalg.norm(forward)
        rotation = np.column_stack([np.cross(normal, forward), normal, forward])
        transform = Transform(position=center, orientation=rotation)

        translate_motion: TranslateMotion | None = None
        extra: list[GuidancePrimitive] = []
        if motion.value in ("up_and_down", "left_and_right"):
            if motion.value == "up_and_down":
                a_px = Point2((box.x_min + box.x_max) / 2.0, box.y_min)
                b_px = bc_px
            else:
                a_px = Point2(box.x_min, (box.y_min + box.y_max) / 2.0)
                b_px = Point2(box.x_max, (box.y_min + box.y_max) / 2.0)
            a = ctx.lift(a_px, ctx.depth_or_fallback(a_px, d_center, "motion endpoint"))
            b = ctx.lift(b_px, ctx.depth_or_fallback(b_px, d_center, "motion endpoint"))
            translate_motion = TranslateMotion(
                start=a, end=b, duration_s=TRANSLATION_DURATION_S, loop=True, pause_s=LOOP_PAUSE_S
            )
        else:
            # self-rotation: counterclockwise tilts the arrow frame the
            # opposite way; plain "rotate" defaults to clockwise
            sign = -1 if motion.value == "counterclockwise" else 1
            direction = (
                RotationDirection.CCW
                if motion.value == "counterclockwise"
                else RotationDirection.CW
            )
            world = ctx.world_box(box)
            arc_payload = ArcArrowPayload(
                axis=rotation[:, 1],
                direction=direction,
                radius_m=world.max_edge / 2.0,
                sweep_deg=ARC_SWEEP_DEG,
                center=center,
            )
            extra.append(
                GuidancePrimitive(
                    kind=PrimitiveKind.ARC_ARROW,
                    transform=Transform(position=center, orientation=rotation @ _rot_x(sign)),
                    payload=arc_payload,
                    anchor_pose=ctx.pose,
                )
            )

    payload = ToolPayload(asset=asset, tool_name=ctx.step.tool_name(), motion=translate_motion)
    tool = GuidancePrimitive(
        kind=PrimitiveKind.TOOL_PLACEMENT,
        transform=transform,
        payload=payload,
        anchor_pose=ctx.pose,
    )
    return [tool, *extra]


def compile_widget(ctx: _StepContext) -> list[GuidancePrimitive]:
    seconds = ctx.step.wait_seconds()
    with ctx.stages.stage("vision"):
        result = ctx.gateway.request_bounding_box(ctx.frame, ctx.step.target, visual_type=5)
    with ctx.stages.stage("geometry"):
        top_center = Point2((result.box.x_min + result.box.x_max) / 2.0, result.box.y_min)
        position = ctx.lift(top_center, ctx.depth_at(top_center))
        transform = Transform(position=position, orientation=ctx.billboard(position))
    return [
        GuidancePrimitive(
            kind=PrimitiveKind.TIMER_WIDGET,
            transform=transform,
            payload=TimerPayload(total_seconds=seconds),
            anchor_pose=ctx.pose,
        )
    ]


def _project_out(v: np.ndarray, n: np.ndarray) -> np.ndarray:
    return v - (v @ n) * n


def _any_perpendicular(n: np.ndarray) -> np.ndarray:
    candidate = np.array([1.0, 0.0, 0.0]) if abs(n[0]) < 0.9 else np.array([0.0, 0.0, 1.0])
    v = np.cross(candidate, n)
    return v / np.linalg.norm(v)
