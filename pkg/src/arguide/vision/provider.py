"""Provider abstraction over the external language/vision services.

A provider declares a capability set and implements one raw-reply method per
capability. The gateway owns prompt rendering, parsing, retries, and latency
accounting, so providers stay thin transports.
"""

from __future__ import annotations

import base64
import json
import logging
import os
import urllib.request
from dataclasses import dataclass, field

from ..geometry import BoundingBox2D
from .types import CapabilityError, FrameRef, ProviderRefusal, ProviderTimeout

log = logging.getLogger(__name__)

PLAN = "plan"
BBOX = "bbox"
TRANSLATION = "translation"
ROTATION = "rotation"
SEGMENTATION = "segmentation"

ALL_CAPABILITIES = frozenset({PLAN, BBOX, TRANSLATION, ROTATION, SEGMENTATION})


class VisionProvider:
    """Base provider; subclasses override the methods they declare."""

    capabilities: frozenset[str] = frozenset()

    def require(self, capability: str) -> None:
        if capability not in self.capabilities:
            raise CapabilityError(f"provider lacks {capability!r} capability")

    def plan_reply(self, prompt: str, query: str, frame: FrameRef) -> str:
        raise CapabilityError("plan not implemented")

    def bbox_reply(self, prompt: str, frame: FrameRef) -> str:
        raise CapabilityError("bbox not implemented")

    def translation_reply(self, prompt: str, frame: FrameRef) -> str:
        raise CapabilityError("translation not implemented")

    def rotation_reply(self, prompt: str, initial_frame: FrameRef, current_frame: FrameRef) -> str:
        raise CapabilityError("rotation not implemented")

    def segmentation_reply(self, frame: FrameRef, box: BoundingBox2D) -> bytes:
        raise CapabilityError("segmentation not implemented")


@dataclass(frozen=True)
class LiveProviderConfig:
    """Connection settings for HTTPS providers; keys come from the environment."""

    chat_endpoint: str
    chat_model: str
    segmentation_endpoint: str | None = None
    api_key_env: str = "ARGUIDE_API_KEY"
    timeout_s: float = 30.0
    extra_headers: dict[str, str] = field(default_factory=dict)

    def __post_init__(self) -> None:
        if self.timeout_s <= 0:
            raise ValueError("timeout must be positive")

    def api_key(self) -> str:
        key = os.environ.get(self.api_key_env, "")
        if not key:
            raise RuntimeError(f"environment variable {self.api_key_env} is not set")
        return key


def _png_data_url(frame: FrameRef) -> str:
    import io

    from PIL import Image

    buf = io.BytesIO()
    Image.fromarray(frame.image).save(buf, format="PNG")
    return "data:image/png;base64," + base64.b64encode(buf.getvalue()).decode()


class LiveProvider(VisionProvider):
    """Chat-completions style HTTPS provider (never exercised in CI).

    Sends prompt text plus inline-encoded frames; replies are taken from
    ``choices[0].message.content``.
    """

    capabilities = frozenset({PLAN, BBOX, TRANSLATION, ROTATION, SEGMENTATION})

    def __init__(self, config: LiveProviderConfig):
        self.config = config

    def _chat(self, prompt: str, frames: list[FrameRef], user_text: str | None = None) -> str:
        content: list[dict] = [{"type": "text", "text": prompt}]
        for frame in frames:
            content.append({"type": "image_url", "image_url": {"url": _png_data_url(frame)}})
        if user_text:
            content.append({"type": "text", "text": user_text})
        body = json.dumps(
            {"model": self.config.chat_model, "messages": [{"role": "user", "content": content}]}
        ).encode()
        request = urllib.request.Request(
            self.config.chat_endpoint,
            data=body,
            headers={
                "Content-Type": "application/json",
                "Authorization": f"Bearer {self.config.api_key()}",
                **self.config.extra_headers,
            },
        )
        try:
            with urllib.request.urlopen(request, timeout=self.config.timeout_s) as resp:
                reply = json.loads(resp.read())
        except TimeoutError as exc:
            raise ProviderTimeout(str(exc)) from exc
        except OSError as exc:
            raise ProviderTimeout(f"provider unreachable: {exc}") from exc
        try:
            message = reply["choices"][0]["message"]
        except (KeyError, IndexError, TypeError) as exc:
            raise ProviderTimeout(f"unexpected provider envelope: {exc}") from exc
        if message.get("refusal"):
            raise ProviderRefusal(str(message["refusal"]))
        content = message.get("content")
        if not content:
            raise ProviderRefusal("provider returned an empty reply")
        return content

    def plan_reply(self, prompt: str, query: str, frame: FrameRef) -> str:
        return self._chat(prompt, [frame], user_text=query)

    def bbox_reply(self, prompt: str, frame: FrameRef) -> str:
        return self._chat(prompt, [frame])

    def translation_reply(self, prompt: str, frame: FrameRef) -> str:
        return self._chat(prompt, [frame])

    def rotation_reply(self, prompt: str, initial_frame: FrameRef, current_frame: FrameRef) -> str:
        return self._chat(prompt, [initial_frame, current_frame])

    def segmentation_reply(self, frame: FrameRef, box: BoundingBox2D) -> bytes:
        if not self.config.segmentation_endpoint:
            raise CapabilityError("no segmentation endpoint configured")
        return segment_remote(self.config.segmentation_endpoint, frame, box, self.config.timeout_s)


def segment_remote(
    endpoint: str, frame: FrameRef, box: BoundingBox2D, timeout_s: float = 30.0
) -> bytes:
    """Call a remote segmentation service.

    Wire format: request {"image_png": b64, "box": [y_min, x_min, y_max, x_max]},
    response {"mask_png": b64, "latency_s": float}.
    """
    import io

    from PIL import Image

    buf = io.BytesIO()
    Image.fromarray(frame.image).save(buf, format="PNG")
    body = json.dumps(
        {
            "image_png": base64.b64encode(buf.getvalue()).decode(),
            "box": [box.y_min, box.x_min, box.y_max, box.x_max],
        }
    ).encode()
    request = urllib.request.Request(
        endpoint, data=body, headers={"Content-Type": "application/json"}
    )
    try:
        with urllib.request.urlopen(request, timeout=timeout_s) as resp:
            reply = json.loads(resp.read())
    except TimeoutError as exc:
        raise ProviderTimeout(str(exc)) from exc
    except OSError as exc:
        raise ProviderTimeout(f"segmentation service unreachable: {exc}") from exc
    if "mask_png" not in reply:
        raise ProviderTimeout("segmentation reply missing mask_png")
    return base64.b64decode(reply["mask_png"])
