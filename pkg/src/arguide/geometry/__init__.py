"""Camera model, depth sampling, projection, and pose-anchored orientation."""

from .camera import (
    BoundingBox2D,
    CameraIntrinsics,
    CameraPose,
    NotARotation,
    Point2,
    Point3,
    box_from_provider,
)
from .depth import DepthMap, HoleError, sample_depth
from .orientation import DegenerateError, face_pose_orientation, surface_normal
from .projection import BehindCamera, WorldBox, bbox_to_world_corners, project, unproject
from .snapshot import SceneSnapshot, load_scene_bundle, save_scene_bundle

__all__ = [
    "BehindCamera",
    "BoundingBox2D",
    "CameraIntrinsics",
    "CameraPose",
    "DegenerateError",
    "DepthMap",
    "HoleError",
    "NotARotation",
    "Point2",
    "Point3",
    "SceneSnapshot",
    "WorldBox",
    "bbox_to_world_corners",
    "box_from_provider",
    "face_pose_orientation",
    "load_scene_bundle",
    "project",
    "sample_depth",
    "save_scene_bundle",
    "surface_normal",
    "unproject",
]
