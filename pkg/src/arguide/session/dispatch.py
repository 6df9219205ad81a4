"""Maps protocol messages onto session-service calls.

One dispatcher serves one client connection (or one relay topic): it stages
uploaded binary frames, builds snapshots, routes sessions to the right
service (fixture bundles each get their own provider), and converts errors
into error messages so a failed step never kills the connection.
"""

from __future__ import annotations

import io
from typing import Callable

import numpy as np
from PIL import Image

from ..errors import GuidanceError
from ..geometry import DepthMap, SceneSnapshot
from ..geometry.snapshot import intrinsics_from_meta, pose_from_meta
from .protocol import BinaryFrame, MessageKind, ProtocolError, ProtocolMessage
from .service import SessionService
from .state import StepRecord


class ServiceRouter:
    """Lazily builds one SessionService per fixture bundle and routes sessions."""

    def __init__(self, service_factory: Callable[[str | None], SessionService]):
        self._factory = service_factory
        self._services: dict[str | None, SessionService] = {}
        self._by_session: dict[str, SessionService] = {}

    def for_fixture(self, fixture_id: str | None) -> SessionService:
        if fixture_id not in self._services:
            self._services[fixture_id] = self._factory(fixture_id)
        return self._services[fixture_id]

    def bind(self, session_id: str, service: SessionService) -> None:
        self._by_session[session_id] = service

    def for_session(self, session_id: str) -> SessionService:
        try:
            return self._by_session[session_id]
        except KeyError:
            raise GuidanceError(f"no session {session_id!r}") from None


def build_snapshot(
    payload: dict,
    frames: dict[str, bytes],
    fixture_snapshot_loader: Callable[[str, str], SceneSnapshot] | None = None,
) -> SceneSnapshot:
    """Assemble a snapshot from a wire payload.

    Either a fixture reference {"fixture": {"bundle", "scene"}} resolved
    server-side, or uploaded frames referenced by id with inline metadata.
    """
    if "fixture" in payload:
        ref = payload["fixture"]
        if fixture_snapshot_loader is None:
            raise ProtocolError("fixture snapshots are not enabled on this server")
        return fixture_snapshot_loader(ref["bundle"], ref["scene"])
    try:
        meta = payload["meta"]
        image_bytes = frames[payload["image_frame"]]
        depth_bytes = frames[payload["depth_frame"]]
    except KeyError as exc:
        raise ProtocolError(f"snapshot payload incomplete: missing {exc}") from exc
    image = np.asarray(Image.open(io.BytesIO(image_bytes)).convert("RGB"))
    depth = DepthMap.from_bytes(
        depth_bytes, width=int(meta["depth"]["width"]), height=int(meta["depth"]["height"])
    )
    return SceneSnapshot(
        scene_id=str(payload.get("scene_id", "uploaded")),
        image=image,
        depth=depth,
        intrinsics=intrinsics_from_meta(meta["intrinsics"]),
        pose=pose_from_meta(meta["pose"]),
    )


def guidance_ready_message(session_id: str, record: StepRecord) -> ProtocolMessage:
    compiled = record.compiled
    return ProtocolMessage(
        kind=MessageKind.GUIDANCE_READY,
        session_id=session_id,
        payload={
            "step_index": record.step_index,
            "category": compiled.category,
            "export": record.export_doc,
            "timing": {
                "vision_s": compiled.timing.vision_s,
                "geometry_s": compiled.timing.geometry_s,
                "total_s": compiled.timing.total_s,
            },
            "notes": list(compiled.notes),
        },
    )


class Dispatcher:
    def __init__(
        self,
        router: ServiceRouter,
        fixture_snapshot_loader: Callable[[str, str], SceneSnapshot] | None = None,
    ) -> None:
        self.router = router
        self.fixture_snapshot_loader = fixture_snapshot_loader
        self.frames: dict[str, bytes] = {}
        self.staged_snapshots: dict[str, SceneSnapshot] = {}

    def handle(self, item: ProtocolMessage | BinaryFrame) -> list[ProtocolMessage]:
        if isinstance(item, BinaryFrame):
            self.frames[item.frame_id] = item.data
            return []
        try:
            return self._handle_message(item)
        except GuidanceError as exc:
            return [
                ProtocolMessage(
                    kind=MessageKind.ERROR,
                    session_id=item.session_id,
                    payload={
                        "code": type(exc).__name__,
                        "detail": str(exc),
                        "in_reply_to": item.kind.value,
                    },
                )
            ]

    def _snapshot_from(self, message: ProtocolMessage) -> SceneSnapshot | None:
        payload = message.payload.get("snapshot")
        if payload:
            return build_snapshot(payload, self.frames, self.fixture_snapshot_loader)
        if message.session_id and message.session_id in self.staged_snapshots:
            return self.staged_snapshots.pop(message.session_id)
        return None

    def _handle_message(self, message: ProtocolMessage) -> list[ProtocolMessage]:
        kind = message.kind
        if kind is MessageKind.QUERY:
            service = self.router.for_fixture(message.payload.get("fixture_id"))
            snapshot = self._snapshot_from(message)
            if snapshot is None:
                raise ProtocolError("query needs a snapshot")
            created = service.create_session(
                message.payload.get("query", ""),
                snapshot,
                session_id=message.session_id or message.payload.get("proposed_session_id"),
            )
            self.router.bind(created.session_id, service)
            plan_ready = ProtocolMessage(
                kind=MessageKind.PLAN_READY,
                session_id=created.session_id,
                payload={
                    "current_step": 0,
                    "step_count": len(created.plan.steps),
                    "instructions": [s.instruction for s in created.plan.steps],
                    "visual_types": [int(s.visual_type) for s in created.plan.steps],
                    "device_hint": created.plan.device_hint,
                    "plan_retries": created.plan_retries,
                },
            )
            return [plan_ready, guidance_ready_message(created.session_id, created.first_step)]

        session_id = message.session_id
        assert session_id is not None  # enforced by parse_message
        if kind is MessageKind.SNAPSHOT:
            snapshot = self._snapshot_from(message)
            if snapshot is None:
                raise ProtocolError("snapshot message carries no snapshot")
            self.staged_snapshots[session_id] = snapshot
            return []
        service = self.router.for_session(session_id)
        if kind is MessageKind.ADVANCE:
            record = service.advance(session_id, self._snapshot_from(message))
            return [guidance_ready_message(session_id, record)]
        if kind is MessageKind.BACK:
            record = service.back(session_id)
            return [guidance_ready_message(session_id, record)]
        if kind is MessageKind.GET_STATE:
            summary = service.summary(session_id)
            return [
                ProtocolMessage(
                    kind=MessageKind.PLAN_READY,
                    session_id=session_id,
                    payload={
                        "current_step": summary.current_step,
                        "step_count": summary.step_count,
                        "instructions": list(summary.instructions),
                        "compiled_steps": list(summary.compiled_steps),
                        "query": summary.query,
                    },
                )
            ]
        raise ProtocolError(f"server does not accept {kind.value} messages")
