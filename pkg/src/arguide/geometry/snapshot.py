"""Scene snapshots and their on-disk bundle format.

A snapshot is one captured moment: color image, depth map, intrinsics, and
camera pose; its pose is the saved pose that anchors a step's guidance.

Bundle layout (one directory per scene):
    meta.json   image size, depth size, intrinsics, pose (row-major 3x3
                rotation + 3-vector translation), all lengths in meters
    image.png   color image
    depth.f32   little-endian float32 depth, row-major
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

import numpy as np
from PIL import Image

from .camera import CameraIntrinsics, CameraPose
from .depth import DepthMap


@dataclass(frozen=True)
class SceneSnapshot:
    scene_id: str
    image: np.ndarray
    depth: DepthMap
    intrinsics: CameraIntrinsics
    pose: CameraPose

    def __post_init__(self) -> None:
        img = np.asarray(self.image)
        if img.ndim != 3 or img.shape[2] not in (3, 4):
            raise ValueError("image must be HxWx3 or HxWx4")
        if img.shape[0] != self.intrinsics.height or img.shape[1] != self.intrinsics.width:
            raise ValueError("image size disagrees with intrinsics")
        object.__setattr__(self, "image", img.astype(np.uint8, copy=False))


def pose_to_meta(pose: CameraPose) -> dict:
    return {
        "rotation": [float(v) for v in pose.rotation.reshape(-1)],
        "translation": [float(v) for v in pose.translation],
    }


def pose_from_meta(meta: dict) -> CameraPose:
    rotation = np.array(meta["rotation"], dtype=np.float64).reshape(3, 3)
    return CameraPose(rotation=rotation, translation=np.array(meta["translation"]))


def intrinsics_to_meta(K: CameraIntrinsics) -> dict:
    return {
        "fx": K.fx,
        "fy": K.fy,
        "cx": K.cx,
        "cy": K.cy,
        "width": K.width,
        "height": K.height,
    }


def intrinsics_from_meta(meta: dict) -> CameraIntrinsics:
    return CameraIntrinsics(
        fx=float(meta["fx"]),
        fy=float(meta["fy"]),
        cx=float(meta["cx"]),
        cy=float(meta["cy"]),
        width=int(meta["width"]),
        height=int(meta["height"]),
    )


def save_scene_bundle(snapshot: SceneSnapshot, directory: str | Path) -> Path:
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    Image.fromarray(snapshot.image).save(directory / "image.png")
    (directory / "depth.f32").write_bytes(snapshot.depth.to_bytes())
    meta = {
        "scene_id": snapshot.scene_id,
        "depth": {"width": snapshot.depth.width, "height": snapshot.depth.height},
        "intrinsics": intrinsics_to_meta(snapshot.intrinsics),
        "pose": pose_to_meta(snapshot.pose),
    }
    (directory / "meta.json").write_text(json.dumps(meta, indent=2))
    return directory


def load_scene_bundle(directory: str | Path) -> SceneSnapshot:
    directory = Path(directory)
    meta = json.loads((directory / "meta.json").read_text())
    image = np.asarray(Image.open(directory / "image.png").convert("RGB"))
    depth = DepthMap.from_bytes(
        (directory / "depth.f32").read_bytes(),
        width=int(meta["depth"]["width"]),
        height=int(meta["depth"]["height"]),
    )
    return SceneSnapshot(
        scene_id=str(meta.get("scene_id", directory.name)),
        image=image,
        depth=depth,
        intrinsics=intrinsics_from_meta(meta["intrinsics"]),
        pose=pose_from_meta(meta["pose"]),
    )
