"""Deterministic fixture-backed provider.

A fixture is a directory of canned replies:

    <fixture_id>/
      labels.json          per-scene request-key -> label maps
      plan/reply_0.txt     raw plan replies, later indices used for retries
      masks/*.png          segmentation masks, referenced from labels.json
      scenes/<scene_id>/   scene bundles (meta.json, image.png, depth.f32)

Replies are a pure function of (fixture id, request content): a retried plan
request selects ``reply_<n>`` by counting correction blocks in the prompt, so
identical requests always return byte-identical results.
"""

from __future__ import annotations

import json
import re
from pathlib import Path

from ..errors import GuidanceError
from ..geometry import BoundingBox2D, SceneSnapshot, load_scene_bundle
from .provider import ALL_CAPABILITIES, VisionProvider
from .types import FrameRef

CORRECTION_MARKER = "The previous reply was invalid"


class FixtureMissing(GuidanceError):
    """The fixture has no canned reply for this request."""


def component_key(text: str) -> str:
    return re.sub(r"\s+", " ", text.strip().lower())


def box_key(box: BoundingBox2D) -> str:
    return ",".join(
        str(int(round(v))) for v in (box.y_min, box.x_min, box.y_max, box.x_max)
    )


class MockProvider(VisionProvider):
    capabilities = ALL_CAPABILITIES

    def __init__(self, fixture_dir: str | Path):
        self.root = Path(fixture_dir)
        if not self.root.is_dir():
            raise FixtureMissing(f"no fixture directory at {self.root}")
        self.fixture_id = self.root.name
        labels_path = self.root / "labels.json"
        self.labels: dict = (
            json.loads(labels_path.read_text()) if labels_path.exists() else {}
        )
        self._plan_replies = sorted((self.root / "plan").glob("reply_*.txt"))

    # -- scene access -----------------------------------------------------

    def scene_ids(self) -> list[str]:
        scenes = self.root / "scenes"
        return sorted(p.name for p in scenes.iterdir() if p.is_dir()) if scenes.is_dir() else []

    def load_scene(self, scene_id: str) -> SceneSnapshot:
        return load_scene_bundle(self.root / "scenes" / scene_id)

    def canonical_query(self) -> str:
        return str(self.labels.get("query", ""))

    # -- provider surface --------------------------------------------------

    def _scene_labels(self, frame: FrameRef, kind: str) -> dict:
        scenes = self.labels.get("scenes", {})
        if frame.frame_id not in scenes:
            raise FixtureMissing(f"fixture {self.fixture_id} has no scene {frame.frame_id!r}")
        return scenes[frame.frame_id].get(kind, {})

    def plan_reply(self, prompt: str, query: str, frame: FrameRef) -> str:
        if not self._plan_replies:
            raise FixtureMissing(f"fixture {self.fixture_id} has no plan replies")
        attempt = prompt.count(CORRECTION_MARKER)
        index = min(attempt, len(self._plan_replies) - 1)
        return self._plan_replies[index].read_text()

    def _component_from_prompt(self, prompt: str, table: dict, kind: str) -> tuple[str, dict]:
        # the rendered prompt embeds the component text verbatim; match the
        # longest known key to avoid prefix collisions
        lowered = component_key(prompt)
        hits = [k for k in table if k in lowered]
        if not hits:
            raise FixtureMissing(
                f"fixture {self.fixture_id}: no {kind} label matching the prompt"
            )
        key = max(hits, key=len)
        return key, table[key]

    def bbox_reply(self, prompt: str, frame: FrameRef) -> str:
        table = self._scene_labels(frame, "bbox")
        key, label = self._component_from_prompt(prompt, table, "bbox")
        return json.dumps({"name": label.get("name", key), "pos": label["pos"]})

    def translation_reply(self, prompt: str, frame: FrameRef) -> str:
        table = self._scene_labels(frame, "translation")
        key, label = self._component_from_prompt(prompt, table, "translation")
        return json.dumps(
            {"name": label.get("name", key), "pos": label["pos"], "target_pos": label["target_pos"]}
        )

    def rotation_reply(self, prompt: str, initial_frame: FrameRef, current_frame: FrameRef) -> str:
        table = self._scene_labels(current_frame, "rotation")
        key, label = self._component_from_prompt(prompt, table, "rotation")
        return json.dumps({"rotation": [label["axis"], label["direction"]]})

    def segmentation_reply(self, frame: FrameRef, box: BoundingBox2D) -> bytes:
        table = self._scene_labels(frame, "segmentation")
        key = box_key(box)
        if key not in table:
            raise FixtureMissing(
                f"fixture {self.fixture_id} scene {frame.frame_id}: no mask for box {key}"
            )
        return (self.root / table[key]).read_bytes()
