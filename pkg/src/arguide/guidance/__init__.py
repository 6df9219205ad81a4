"""Step compilation into world-space guidance primitives."""

from .assets import AssetLibrary, UnknownAsset, default_asset_library, normalize_asset_name
from .compiler import (
    ARC_SWEEP_DEG,
    CATEGORY_BY_KIND,
    PARTICLE_THRESHOLD_M,
    CompileError,
    CompiledStep,
    StepTiming,
    compile_step,
)
from .export import export_json, export_step
from .imaging import DimensionMismatch, crop_image, encode_png, enhance_blue, image_plane_scale
from .primitives import (
    ArcArrowPayload,
    AssetRef,
    Box3DPayload,
    GesturePayload,
    GuidancePrimitive,
    ImagePlanePayload,
    ParticlePayload,
    PrimitiveKind,
    TimerPayload,
    ToolPayload,
    Transform,
    TranslateMotion,
    arc_points,
)

__all__ = [
    "ARC_SWEEP_DEG",
    "ArcArrowPayload",
    "AssetLibrary",
    "AssetRef",
    "Box3DPayload",
    "CATEGORY_BY_KIND",
    "CompileError",
    "CompiledStep",
    "DimensionMismatch",
    "GesturePayload",
    "GuidancePrimitive",
    "ImagePlanePayload",
    "PARTICLE_THRESHOLD_M",
    "ParticlePayload",
    "PrimitiveKind",
    "StepTiming",
    "TimerPayload",
    "ToolPayload",
    "Transform",
    "TranslateMotion",
    "UnknownAsset",
    "arc_points",
    "compile_step",
    "crop_image",
    "default_asset_library",
    "encode_png",
    "enhance_blue",
    "export_json",
    "export_step",
    "image_plane_scale",
    "normalize_asset_name",
]
