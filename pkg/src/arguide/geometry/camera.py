"""Camera model types and the world/camera axis conventions.

World frame (fixed by the initial capture): x right in the photo, y up,
z toward the viewer. The camera looks along its local -z; pixel u grows
rightward (maps to +x) and pixel v grows downward (maps to -y).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from ..errors import GuidanceError

ORTHONORMAL_TOL = 1e-9


@dataclass(frozen=True)
class CameraIntrinsics:
    """Pinhole intrinsics in pixels."""

    fx: float
    fy: float
    cx: float
    cy: float
    width: int
    height: int

    def __post_init__(self) -> None:
        if self.fx <= 0 or self.fy <= 0:
            raise ValueError("focal lengths must be positive")
        if not (0 <= self.cx < self.width) or not (0 <= self.cy < self.height):
            raise ValueError("principal point outside image bounds")


class NotARotation(GuidanceError):
    """The supplied 3x3 matrix is not a proper rotation."""


def check_rotation(matrix: np.ndarray, tol: float = ORTHONORMAL_TOL) -> np.ndarray:
    """Validate a camera-to-world rotation: orthonormal with det +1."""
    r = np.asarray(matrix, dtype=np.float64)
    if r.shape != (3, 3):
        raise NotARotation(f"expected 3x3 matrix, got shape {r.shape}")
    if not np.allclose(r.T @ r, np.eye(3), atol=tol, rtol=0.0):
        raise NotARotation("matrix is not orthonormal")
    if abs(np.linalg.det(r) - 1.0) > tol:
        raise NotARotation("matrix determinant is not +1")
    return r


@dataclass(frozen=True)
class CameraPose:
    """Rigid camera-to-world transform: rotation plus camera origin in meters."""

    rotation: np.ndarray
    translation: np.ndarray

    def __post_init__(self) -> None:
        object.__setattr__(self, "rotation", check_rotation(self.rotation))
        t = np.asarray(self.translation, dtype=np.float64).reshape(3)
        object.__setattr__(self, "translation", t)

    @staticmethod
    def identity() -> "CameraPose":
        return CameraPose(np.eye(3), np.zeros(3))

    @property
    def origin(self) -> np.ndarray:
        return self.translation

    def to_world(self, cam_point: np.ndarray) -> np.ndarray:
        return self.rotation @ np.asarray(cam_point, dtype=np.float64) + self.translation

    def to_camera(self, world_point: np.ndarray) -> np.ndarray:
        return self.rotation.T @ (np.asarray(world_point, dtype=np.float64) - self.translation)


def _require_finite(*values: float) -> None:
    for v in values:
        if not math.isfinite(v):
            raise ValueError("non-finite coordinate")


@dataclass(frozen=True)
class Point2:
    """Pixel coordinates: u right, v down."""

    u: float
    v: float

    def __post_init__(self) -> None:
        _require_finite(self.u, self.v)

    def as_array(self) -> np.ndarray:
        return np.array([self.u, self.v], dtype=np.float64)


@dataclass(frozen=True)
class Point3:
    """World-frame position in meters."""

    x: float
    y: float
    z: float

    def __post_init__(self) -> None:
        _require_finite(self.x, self.y, self.z)

    def as_array(self) -> np.ndarray:
        return np.array([self.x, self.y, self.z], dtype=np.float64)

    @staticmethod
    def from_array(a: np.ndarray) -> "Point3":
        return Point3(float(a[0]), float(a[1]), float(a[2]))


@dataclass(frozen=True)
class BoundingBox2D:
    """Axis-aligned pixel box stored as (y_min, x_min, y_max, x_max)."""

    y_min: float
    x_min: float
    y_max: float
    x_max: float

    def __post_init__(self) -> None:
        _require_finite(self.y_min, self.x_min, self.y_max, self.x_max)
        if self.y_min >= self.y_max or self.x_min >= self.x_max:
            raise ValueError(
                f"degenerate box: y {self.y_min}..{self.y_max}, x {self.x_min}..{self.x_max}"
            )

    @property
    def width(self) -> float:
        return self.x_max - self.x_min

    @property
    def height(self) -> float:
        return self.y_max - self.y_min

    @property
    def center(self) -> Point2:
        return Point2((self.x_min + self.x_max) / 2.0, (self.y_min + self.y_max) / 2.0)

    def clamped(self, width: int, height: int) -> "BoundingBox2D":
        """Clamp to image bounds; raises ValueError if nothing remains."""
        return BoundingBox2D(
            y_min=min(max(self.y_min, 0.0), float(height)),
            x_min=min(max(self.x_min, 0.0), float(width)),
            y_max=min(max(self.y_max, 0.0), float(height)),
            x_max=min(max(self.x_max, 0.0), float(width)),
        )


def box_from_provider(values: list[float], image_width: int, image_height: int) -> BoundingBox2D:
    """Build a box from provider-reported [y_min, x_min, y_max, x_max].

    Providers sometimes answer in 0..1000 normalized units instead of pixels.
    That convention is detectable only when the image is larger than 1000 px
    on a side; in that case values all <= 1000 are rescaled, otherwise they
    are taken as pixels.
    """
    if len(values) != 4:
        raise ValueError(f"expected 4 box values, got {len(values)}")
    y0, x0, y1, x1 = (float(v) for v in values)
    normalized = max(image_width, image_height) > 1000 and max(y0, x0, y1, x1) <= 1000.0
    if normalized:
        y0 = y0 / 1000.0 * image_height
        y1 = y1 / 1000.0 * image_height
        x0 = x0 / 1000.0 * image_width
        x1 = x1 / 1000.0 * image_width
    return BoundingBox2D(y0, x0, y1, x1).clamped(image_width, image_height)
