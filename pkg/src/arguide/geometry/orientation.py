"""Surface normals and billboard orientation toward a saved camera pose."""

from __future__ import annotations

import math

import numpy as np

from ..errors import GuidanceError
from .camera import CameraPose, Point3

DEGENERATE_CROSS_NORM = 1e-9

# View rays closer than 1 degree to world up use the camera-up fallback.
_SINGULAR_RAY_COS = math.cos(math.radians(1.0))

WORLD_UP = np.array([0.0, 1.0, 0.0])


class DegenerateError(GuidanceError):
    """The three surface points are collinear."""


def surface_normal(bl: Point3, br: Point3, c: Point3, camera_origin: Point3) -> np.ndarray:
    """Unit normal of the plane through three lifted points, facing the camera.

    The normal is normalize((br - bl) x (c - bl)), sign-flipped if needed so
    it points toward the camera origin.
    """
    a = br.as_array() - bl.as_array()
    b = c.as_array() - bl.as_array()
    cross = np.cross(a, b)
    norm = np.linalg.norm(cross)
    if norm < DEGENERATE_CROSS_NORM:
        raise DegenerateError("surface points are collinear")
    n = cross / norm
    if float(n @ (camera_origin.as_array() - c.as_array())) < 0:
        n = -n
    return n


def orthonormal_frame_with_z(z: np.ndarray, up_hint: np.ndarray | None = None) -> np.ndarray:
    """Right-handed rotation (columns x, y, z) with the given +z axis.

    +x is chosen perpendicular to the up hint (world up by default); when the
    hint is parallel to z any perpendicular axis is used instead.
    """
    z = np.asarray(z, dtype=np.float64)
    z = z / np.linalg.norm(z)
    if up_hint is None:
        up_hint = WORLD_UP
    x = np.cross(up_hint, z)
    x_norm = np.linalg.norm(x)
    if x_norm < DEGENERATE_CROSS_NORM:
        # up hint parallel to the view ray; any perpendicular axis works
        alt = np.array([1.0, 0.0, 0.0]) if abs(z[0]) < 0.9 else np.array([0.0, 0.0, 1.0])
        x = np.cross(alt, z)
        x_norm = np.linalg.norm(x)
    x = x / x_norm
    y = np.cross(z, x)
    return np.column_stack([x, y, z])


def face_pose_orientation(anchor: Point3, saved_pose: CameraPose) -> np.ndarray:
    """Billboard rotation whose +z axis points from the anchor at the camera.

    +x stays horizontal (perpendicular to world up) and +y completes the
    right-handed frame. When the view ray is within 1 degree of world up the
    horizontal constraint is singular and the saved camera's up axis is used
    as the reference instead.
    """
    ray = saved_pose.origin - anchor.as_array()
    norm = np.linalg.norm(ray)
    if norm < DEGENERATE_CROSS_NORM:
        raise ValueError("anchor coincides with the camera origin")
    z = ray / norm
    if abs(float(z @ WORLD_UP)) > _SINGULAR_RAY_COS:
        up_hint = saved_pose.rotation @ np.array([0.0, 1.0, 0.0])
    else:
        up_hint = WORLD_UP
    return orthonormal_frame_with_z(z, up_hint)
