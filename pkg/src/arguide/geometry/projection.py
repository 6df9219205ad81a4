"""2D <-> 3D pinhole projection and box lifting.

Unprojection maps a pixel plus metric depth into the camera frame as
((u - cx) * d / fx, -(v - cy) * d / fy, -d) and then into world coordinates
through the camera-to-world pose. Projection is its exact inverse for points
in front of the camera.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..errors import GuidanceError
from .camera import BoundingBox2D, CameraIntrinsics, CameraPose, Point2, Point3
from .depth import DepthMap, sample_depth

BEHIND_CAMERA_EPS = 1e-6


class BehindCamera(GuidanceError):
    """The world point lies on or behind the camera plane."""


def unproject(p: Point2, d: float, K: CameraIntrinsics, pose: CameraPose) -> Point3:
    """Lift pixel ``p`` at depth ``d`` meters to a world-frame point."""
    if d <= 0:
        raise ValueError(f"depth must be positive, got {d}")
    cam = np.array(
        [
            (p.u - K.cx) * d / K.fx,
            -(p.v - K.cy) * d / K.fy,
            -d,
        ]
    )
    return Point3.from_array(pose.to_world(cam))


def project(q: Point3, K: CameraIntrinsics, pose: CameraPose) -> Point2:
    """Project a world point to pixel coordinates.

    Raises BehindCamera when the point is not strictly in front of the
    camera plane (camera looks along -z, so z_cam must be < -eps).
    """
    cam = pose.to_camera(q.as_array())
    z = cam[2]
    if z >= -BEHIND_CAMERA_EPS:
        raise BehindCamera(f"point at camera-frame z={z:.3g}")
    return Point2(
        K.cx + K.fx * cam[0] / (-z),
        K.cy - K.fy * cam[1] / (-z),
    )


@dataclass(frozen=True)
class WorldBox:
    """A 2D box lifted corner-by-corner into world space.

    Corners follow (bottom-left, bottom-right, top-left, top-right) image
    order; edge lengths are world-space distances of adjacent corners.
    """

    bl: Point3
    br: Point3
    tl: Point3
    tr: Point3

    @property
    def corners(self) -> tuple[Point3, Point3, Point3, Point3]:
        return (self.bl, self.br, self.tl, self.tr)

    @property
    def edge_lengths(self) -> dict[str, float]:
        def dist(a: Point3, b: Point3) -> float:
            return float(np.linalg.norm(a.as_array() - b.as_array()))

        return {
            "bottom": dist(self.bl, self.br),
            "top": dist(self.tl, self.tr),
            "left": dist(self.bl, self.tl),
            "right": dist(self.br, self.tr),
        }

    @property
    def min_edge(self) -> float:
        return min(self.edge_lengths.values())

    @property
    def max_edge(self) -> float:
        return max(self.edge_lengths.values())

    @property
    def center(self) -> Point3:
        stacked = np.stack([c.as_array() for c in self.corners])
        return Point3.from_array(stacked.mean(axis=0))


def bbox_to_world_corners(
    box: BoundingBox2D,
    depth: DepthMap,
    K: CameraIntrinsics,
    pose: CameraPose,
) -> WorldBox:
    """Lift each box corner with its own sampled depth.

    Hole filling applies per corner; a corner with no valid depth in the
    window propagates HoleError.
    """
    pixels = {
        "bl": Point2(box.x_min, box.y_max),
        "br": Point2(box.x_max, box.y_max),
        "tl": Point2(box.x_min, box.y_min),
        "tr": Point2(box.x_max, box.y_min),
    }
    lifted = {}
    for name, pixel in pixels.items():
        d = sample_depth(depth, pixel, K.width, K.height)
        lifted[name] = unproject(pixel, d, K, pose)
    return WorldBox(**lifted)
