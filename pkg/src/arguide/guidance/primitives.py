"""World-space guidance primitives emitted by the step compiler."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum

import numpy as np

from ..geometry import CameraPose, Point3, WorldBox
from ..geometry.camera import check_rotation
from ..geometry.orientation import orthonormal_frame_with_z
from ..plan import GestureKind
from ..vision import RotationDirection


class PrimitiveKind(str, Enum):
    BOX3D = "box3d"
    PARTICLE_EMITTER = "particle_emitter"
    IMAGE_PLANE_ANIMATION = "image_plane_animation"
    ARC_ARROW = "arc_arrow"
    GESTURE_PLACEMENT = "gesture_placement"
    TOOL_PLACEMENT = "tool_placement"
    TIMER_WIDGET = "timer_widget"


@dataclass(frozen=True, eq=False)
class Transform:
    position: Point3
    orientation: np.ndarray
    scale: tuple[float, float, float] = (1.0, 1.0, 1.0)

    def __post_init__(self) -> None:
        object.__setattr__(self, "orientation", check_rotation(self.orientation))
        if any(s <= 0 for s in self.scale):
            raise ValueError(f"scale components must be positive: {self.scale}")


@dataclass(frozen=True)
class AssetRef:
    """Reference into the curated asset library.

    ``fallback_generated`` marks ids that missed the library and were filled
    by the generative hook instead.
    """

    library_id: str
    fallback_generated: bool = False


@dataclass(frozen=True, eq=False)
class Box3DPayload:
    corners: WorldBox
    edge_lengths: dict[str, float]


@dataclass(frozen=True)
class ParticlePayload:
    effect: str = "sparkle"
    extent_m: float = 0.05


@dataclass(frozen=True, eq=False)
class ImagePlanePayload:
    """A masked, blue-enhanced crop shown on a billboard, optionally moving.

    ``start == end`` degenerates to a static highlighted plane.
    """

    crop_png: bytes = field(repr=False)
    start: Point3 = Point3(0, 0, 0)
    end: Point3 = Point3(0, 0, 0)
    plane_width_m: float = 0.0
    plane_height_m: float = 0.0
    duration_s: float = 2.0
    loop: bool = True
    pause_s: float = 0.5

    def __post_init__(self) -> None:
        if self.plane_width_m <= 0 or self.plane_height_m <= 0:
            raise ValueError("plane dimensions must be positive")
        if self.duration_s <= 0:
            raise ValueError("duration must be positive")


@dataclass(frozen=True, eq=False)
class ArcArrowPayload:
    """A curved arrow: rotation axis plus direction seen from the +axis side."""

    axis: np.ndarray
    direction: RotationDirection
    radius_m: float
    sweep_deg: float
    center: Point3

    def __post_init__(self) -> None:
        axis = np.asarray(self.axis, dtype=np.float64).reshape(3)
        if abs(np.linalg.norm(axis) - 1.0) > 1e-9:
            raise ValueError("axis must be a unit vector")
        object.__setattr__(self, "axis", axis)
        if self.radius_m <= 0:
            raise ValueError("radius must be positive")
        if not (0 < self.sweep_deg <= 360):
            raise ValueError("sweep must be in (0, 360]")


@dataclass(frozen=True)
class TranslateMotion:
    start: Point3
    end: Point3
    duration_s: float = 2.0
    loop: bool = True
    pause_s: float = 0.5


@dataclass(frozen=True)
class GesturePayload:
    asset: AssetRef
    gesture: GestureKind


@dataclass(frozen=True)
class ToolPayload:
    asset: AssetRef
    tool_name: str
    motion: TranslateMotion | None = None


@dataclass(frozen=True)
class TimerPayload:
    total_seconds: int

    def __post_init__(self) -> None:
        if self.total_seconds < 0:
            raise ValueError("timer duration cannot be negative")


Payload = (
    Box3DPayload
    | ParticlePayload
    | ImagePlanePayload
    | ArcArrowPayload
    | GesturePayload
    | ToolPayload
    | TimerPayload
)

_PAYLOAD_FOR_KIND = {
    PrimitiveKind.BOX3D: Box3DPayload,
    PrimitiveKind.PARTICLE_EMITTER: ParticlePayload,
    PrimitiveKind.IMAGE_PLANE_ANIMATION: ImagePlanePayload,
    PrimitiveKind.ARC_ARROW: ArcArrowPayload,
    PrimitiveKind.GESTURE_PLACEMENT: GesturePayload,
    PrimitiveKind.TOOL_PLACEMENT: ToolPayload,
    PrimitiveKind.TIMER_WIDGET: TimerPayload,
}


@dataclass(frozen=True, eq=False)
class GuidancePrimitive:
    kind: PrimitiveKind
    transform: Transform
    payload: Payload
    anchor_pose: CameraPose

    def __post_init__(self) -> None:
        expected = _PAYLOAD_FOR_KIND[self.kind]
        if not isinstance(self.payload, expected):
            raise TypeError(f"{self.kind.value} payload must be {expected.__name__}")


def arc_points(payload: ArcArrowPayload, n: int = 33) -> list[Point3]:
    """Sample the arc polyline.

    Points run counterclockwise as seen from the positive side of the axis;
    a CW arrow traverses the same points in reverse, so flipping the
    direction only swaps endpoint order.
    """
    frame = orthonormal_frame_with_z(payload.axis)
    e1, e2 = frame[:, 0], frame[:, 1]
    half = math.radians(payload.sweep_deg) / 2.0
    center = payload.center.as_array()
    pts = []
    for theta in np.linspace(-half, half, n):
        offset = payload.radius_m * (math.cos(theta) * e1 + math.sin(theta) * e2)
        pts.append(Point3.from_array(center + offset))
    if payload.direction is RotationDirection.CW:
        pts.reverse()
    return pts
