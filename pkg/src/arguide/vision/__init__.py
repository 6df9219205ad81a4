"""Provider abstraction: prompts, parsing, mock fixtures, request gateway."""

from .gateway import Gateway, GatewayConfig, LatencyRecorder, LatencySample, PlanResult, crop_bounds
from .mock import FixtureMissing, MockProvider, box_key, component_key
from .parsing import parse_bounding_box_reply, parse_rotation_reply, parse_translation_reply
from .prompts import render_prompt, required_slots, template_text
from .provider import (
    ALL_CAPABILITIES,
    BBOX,
    PLAN,
    ROTATION,
    SEGMENTATION,
    TRANSLATION,
    LiveProvider,
    LiveProviderConfig,
    VisionProvider,
    segment_remote,
)
from .types import (
    BoundingBoxResult,
    CapabilityError,
    EmptyMask,
    FrameRef,
    MissingSlot,
    ParseError,
    ProviderRefusal,
    ProviderTimeout,
    RotationAxis,
    RotationDirection,
    RotationResult,
    SegmentationMask,
    TranslationResult,
    ZeroAreaBox,
)

__all__ = [
    "ALL_CAPABILITIES",
    "BBOX",
    "BoundingBoxResult",
    "CapabilityError",
    "EmptyMask",
    "FixtureMissing",
    "FrameRef",
    "Gateway",
    "GatewayConfig",
    "LatencyRecorder",
    "LatencySample",
    "LiveProvider",
    "LiveProviderConfig",
    "MissingSlot",
    "MockProvider",
    "PLAN",
    "ParseError",
    "PlanResult",
    "ProviderRefusal",
    "ProviderTimeout",
    "ROTATION",
    "RotationAxis",
    "RotationDirection",
    "RotationResult",
    "SEGMENTATION",
    "SegmentationMask",
    "TRANSLATION",
    "TranslationResult",
    "VisionProvider",
    "ZeroAreaBox",
    "box_key",
    "component_key",
    "crop_bounds",
    "parse_bounding_box_reply",
    "parse_rotation_reply",
    "parse_translation_reply",
    "render_prompt",
    "required_slots",
    "segment_remote",
    "template_text",
]
