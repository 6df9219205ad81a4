"""Crop extraction and the blue-enhanced mask compositing for movement cues."""

from __future__ import annotations

import io

import numpy as np
from PIL import Image

from ..errors import GuidanceError
from ..geometry import BoundingBox2D, CameraIntrinsics
from ..vision import SegmentationMask, crop_bounds


class DimensionMismatch(GuidanceError):
    """Crop and mask dimensions disagree."""


def crop_image(image: np.ndarray, box: BoundingBox2D) -> np.ndarray:
    """Extract the integer pixel rectangle covering the box."""
    x0, y0, x1, y1 = crop_bounds(box)
    h, w = image.shape[:2]
    x0, y0 = max(x0, 0), max(y0, 0)
    x1, y1 = min(x1, w), min(y1, h)
    if x1 <= x0 or y1 <= y0:
        raise ValueError("box crops to nothing")
    return image[y0:y1, x0:x1]


def enhance_blue(crop: np.ndarray, mask: SegmentationMask) -> np.ndarray:
    """Highlight masked pixels by tripling the blue channel (clamped).

    Red and green are never touched. Unmasked pixels keep their color but
    become fully transparent; the result is RGBA.
    """
    if crop.shape[:2] != (mask.height, mask.width):
        raise DimensionMismatch(
            f"crop is {crop.shape[1]}x{crop.shape[0]}, mask is {mask.width}x{mask.height}"
        )
    rgb = crop[:, :, :3].astype(np.uint16)
    out = np.zeros((mask.height, mask.width, 4), dtype=np.uint8)
    out[:, :, :3] = rgb.astype(np.uint8)
    blue = np.minimum(rgb[:, :, 2] * 3, 255).astype(np.uint8)
    out[:, :, 2] = np.where(mask.bitmask, blue, out[:, :, 2])
    out[:, :, 3] = np.where(mask.bitmask, 255, 0).astype(np.uint8)
    return out


def image_plane_scale(
    box: BoundingBox2D, d: float, K: CameraIntrinsics
) -> tuple[float, float]:
    """Metric plane size for a box crop shown at depth ``d``."""
    if d <= 0:
        raise ValueError("depth must be positive")
    return (box.width * d / K.fx, box.height * d / K.fy)


def encode_png(rgba: np.ndarray) -> bytes:
    mode = "RGBA" if rgba.shape[2] == 4 else "RGB"
    buf = io.BytesIO()
    Image.fromarray(rgba, mode=mode).save(buf, format="PNG")
    return buf.getvalue()
