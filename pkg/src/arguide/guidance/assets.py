"""Curated gesture/tool asset library with a generative fallback hook.

The manifest maps asset ids (gesture/pinch, tool/whisk, ...) to mesh files
plus canonical-orientation metadata: the typical contact point sits at the
mesh origin and a tool's functional end lies on the local -y side, so
placement math can treat every asset uniformly. The shipped meshes are
placeholders; placement math, not visual fidelity, is what matters here.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass
from importlib import resources
from pathlib import Path
from typing import Callable

from ..errors import GuidanceError
from .primitives import AssetRef


class UnknownAsset(GuidanceError):
    """The asset id is not in the manifest and no fallback hook is enabled."""


def normalize_asset_name(name: str) -> str:
    return re.sub(r"[\s-]+", "_", name.strip().lower())


@dataclass(frozen=True)
class AssetEntry:
    library_id: str
    mesh_path: str
    contact_point: tuple[float, float, float] = (0.0, 0.0, 0.0)
    functional_axis: str = "-y"


def placeholder_asset_generator(library_id: str) -> AssetRef:
    """Default generative hook: records the id as a generated placeholder."""
    return AssetRef(library_id=library_id, fallback_generated=True)


class AssetLibrary:
    def __init__(
        self,
        manifest_path: str | Path | None = None,
        generator: Callable[[str], AssetRef] | None = placeholder_asset_generator,
    ) -> None:
        if manifest_path is None:
            text = resources.files("arguide.guidance").joinpath("data/asset_manifest.json").read_text()
        else:
            text = Path(manifest_path).read_text()
        doc = json.loads(text)
        self.entries: dict[str, AssetEntry] = {}
        for library_id, meta in doc.get("assets", {}).items():
            self.entries[library_id] = AssetEntry(
                library_id=library_id,
                mesh_path=meta["mesh"],
                contact_point=tuple(meta.get("contact_point", (0.0, 0.0, 0.0))),
                functional_axis=meta.get("functional_axis", "-y"),
            )
        self.generator = generator

    def resolve(self, library_id: str) -> AssetRef:
        """Resolve an id to a library asset, or synthesize via the hook."""
        if library_id in self.entries:
            return AssetRef(library_id=library_id, fallback_generated=False)
        if self.generator is not None:
            return self.generator(library_id)
        raise UnknownAsset(f"{library_id!r} not in manifest and fallback generation disabled")

    def entry(self, library_id: str) -> AssetEntry:
        try:
            return self.entries[library_id]
        except KeyError:
            raise UnknownAsset(f"{library_id!r} not in manifest") from None

    def gesture_id(self, gesture_name: str) -> str:
        return f"gesture/{normalize_asset_name(gesture_name)}"

    def tool_id(self, tool_name: str) -> str:
        return f"tool/{normalize_asset_name(tool_name)}"


_default_library: AssetLibrary | None = None


def default_asset_library() -> AssetLibrary:
    global _default_library
    if _default_library is None:
        _default_library = AssetLibrary()
    return _default_library
