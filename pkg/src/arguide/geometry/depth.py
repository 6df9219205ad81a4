"""Depth-map storage and hole-tolerant sampling.

Depth grids may be lower resolution than the color image; sampling scales
pixel coordinates into the grid with nearest lookup. Cells holding 0 or NaN
are holes (specular dropouts in LiDAR captures) and are filled with the
median of valid values in an expanding square window.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..errors import GuidanceError
from .camera import Point2

MAX_HOLE_RADIUS = 7


class HoleError(GuidanceError):
    """No valid depth within the hole-fill window."""


@dataclass(frozen=True)
class DepthMap:
    """Row-major grid of depth in meters; 0 or NaN marks a hole."""

    width: int
    height: int
    values: np.ndarray

    def __post_init__(self) -> None:
        v = np.asarray(self.values, dtype=np.float32).reshape(self.height, self.width)
        finite = v[np.isfinite(v)]
        if finite.size and (finite < 0).any():
            raise ValueError("depth values must be non-negative")
        object.__setattr__(self, "values", v)

    @staticmethod
    def from_bytes(data: bytes, width: int, height: int) -> "DepthMap":
        """Decode little-endian float32 row-major bytes."""
        flat = np.frombuffer(data, dtype="<f4")
        if flat.size != width * height:
            raise ValueError(f"depth payload holds {flat.size} values, expected {width * height}")
        return DepthMap(width=width, height=height, values=flat.reshape(height, width).copy())

    def to_bytes(self) -> bytes:
        return self.values.astype("<f4").tobytes()

    def valid_mask(self) -> np.ndarray:
        return np.isfinite(self.values) & (self.values > 0)


def sample_depth(
    depth: DepthMap,
    p: Point2,
    image_width: int | None = None,
    image_height: int | None = None,
    max_radius: int = MAX_HOLE_RADIUS,
) -> float:
    """Depth in meters at a pixel of the color image.

    The pixel is scaled into the depth grid (nearest cell). A hole at the
    landing cell is filled with the median of valid values in the smallest
    square window that contains any, up to ``max_radius`` cells.

    Raises HoleError when no valid value exists within the window.
    """
    u, v = p.u, p.v
    if image_width and image_width != depth.width:
        u = u * depth.width / image_width
    if image_height and image_height != depth.height:
        v = v * depth.height / image_height
    col = min(max(int(round(u)), 0), depth.width - 1)
    row = min(max(int(round(v)), 0), depth.height - 1)

    values = depth.values
    value = float(values[row, col])
    if np.isfinite(value) and value > 0:
        return value

    valid = depth.valid_mask()
    for radius in range(1, max_radius + 1):
        r0, r1 = max(row - radius, 0), min(row + radius + 1, depth.height)
        c0, c1 = max(col - radius, 0), min(col + radius + 1, depth.width)
        window = values[r0:r1, c0:c1]
        ok = valid[r0:r1, c0:c1]
        if ok.any():
            return float(np.median(window[ok]))
    raise HoleError(f"no valid depth within {max_radius} cells of ({row}, {col})")
