"""Parsed provider outputs and provider-facing frame handles."""

from __future__ import annotations

import io
from dataclasses import dataclass, field
from enum import Enum

import numpy as np
from PIL import Image

from ..errors import GuidanceError
from ..geometry import BoundingBox2D, Point2


class CapabilityError(GuidanceError):
    """The provider does not declare the requested capability."""


class ProviderTimeout(GuidanceError):
    """The provider did not answer within the configured timeout."""


class ProviderRefusal(GuidanceError):
    """The provider declined to answer."""


class ParseError(GuidanceError):
    """The provider reply could not be parsed into the expected shape."""


class ZeroAreaBox(GuidanceError):
    """The reply box has no area (possibly after clamping)."""


class EmptyMask(GuidanceError):
    """The segmentation mask contains no true bits."""


class MissingSlot(GuidanceError):
    """A prompt template slot was not supplied."""


@dataclass(frozen=True)
class FrameRef:
    """An image handed to a provider, addressable by a stable id."""

    frame_id: str
    image: np.ndarray

    @property
    def width(self) -> int:
        return int(self.image.shape[1])

    @property
    def height(self) -> int:
        return int(self.image.shape[0])


@dataclass(frozen=True)
class BoundingBoxResult:
    name: str
    box: BoundingBox2D


@dataclass(frozen=True)
class TranslationResult:
    name: str
    box: BoundingBox2D
    target: Point2


class RotationAxis(str, Enum):
    X = "x"
    Y = "y"
    Z = "z"


class RotationDirection(str, Enum):
    """Sense of rotation when viewed from the positive side of the axis."""

    CW = "CW"
    CCW = "CCW"


@dataclass(frozen=True)
class RotationResult:
    axis: RotationAxis
    direction: RotationDirection


@dataclass(frozen=True)
class SegmentationMask:
    """Boolean mask over a box crop; row-major, same dims as the crop."""

    width: int
    height: int
    bitmask: np.ndarray = field(repr=False)

    def __post_init__(self) -> None:
        m = np.asarray(self.bitmask, dtype=bool).reshape(self.height, self.width)
        object.__setattr__(self, "bitmask", m)

    @property
    def true_count(self) -> int:
        return int(self.bitmask.sum())

    def coverage(self) -> float:
        return self.true_count / float(self.width * self.height)

    @staticmethod
    def from_png(data: bytes) -> "SegmentationMask":
        img = Image.open(io.BytesIO(data)).convert("L")
        arr = np.asarray(img) > 127
        return SegmentationMask(width=img.width, height=img.height, bitmask=arr)

    def to_png(self) -> bytes:
        img = Image.fromarray((self.bitmask.astype(np.uint8)) * 255, mode="L")
        buf = io.BytesIO()
        img.save(buf, format="PNG")
        return buf.getvalue()
