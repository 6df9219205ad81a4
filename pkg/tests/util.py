"""Shared test helpers: synthetic snapshots and a scripted provider."""

import json

import numpy as np

from arguide.geometry import CameraIntrinsics, CameraPose, DepthMap, SceneSnapshot
from arguide.vision import ALL_CAPABILITIES, SegmentationMask, VisionProvider, crop_bounds


def make_snapshot(
    depth_m=1.0,
    scene_id="test-scene",
    width=640,
    height=480,
    fx=500.0,
    fy=500.0,
    depth_size=(160, 120),
    pose=None,
    color=(200, 200, 200),
    depth_values=None,
):
    image = np.zeros((height, width, 3), np.uint8)
    image[:, :] = color
    dw, dh = depth_size
    if depth_values is None:
        depth_values = np.full((dh, dw), depth_m, np.float32)
    depth = DepthMap(width=dw, height=dh, values=depth_values)
    intrinsics = CameraIntrinsics(fx=fx, fy=fy, cx=width / 2, cy=height / 2, width=width, height=height)
    return SceneSnapshot(
        scene_id=scene_id,
        image=image,
        depth=depth,
        intrinsics=intrinsics,
        pose=pose or CameraPose.identity(),
    )


class ScriptedProvider(VisionProvider):
    """Answers every request from constructor-supplied values."""

    capabilities = ALL_CAPABILITIES

    def __init__(self, box=None, target=None, rotation=None, plan_doc=None, mask_mode="full"):
        self.box = box
        self.target = target
        self.rotation = rotation
        self.plan_doc = plan_doc
        self.mask_mode = mask_mode

    def plan_reply(self, prompt, query, frame):
        return json.dumps(self.plan_doc)

    def bbox_reply(self, prompt, frame):
        return json.dumps({"name": "scripted", "pos": list(self.box)})

    def translation_reply(self, prompt, frame):
        return json.dumps(
            {"name": "scripted", "pos": list(self.box), "target_pos": list(self.target)}
        )

    def rotation_reply(self, prompt, initial_frame, current_frame):
        return json.dumps({"rotation": list(self.rotation)})

    def segmentation_reply(self, frame, box):
        x0, y0, x1, y1 = crop_bounds(box)
        w, h = x1 - x0, y1 - y0
        if self.mask_mode == "full":
            bits = np.ones((h, w), bool)
        elif self.mask_mode == "empty":
            bits = np.zeros((h, w), bool)
        else:
            bits = np.zeros((h, w), bool)
            bits[: max(h // 2, 1), : max(w // 2, 1)] = True
        return SegmentationMask(width=w, height=h, bitmask=bits).to_png()
