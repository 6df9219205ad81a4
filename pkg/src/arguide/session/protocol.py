"""The gr/1 wire protocol.

A connection carries two record types, each length-prefixed with a 4-byte
big-endian length and a 1-byte record tag:

    tag 0x00  control message: UTF-8 JSON matching ProtocolMessage
    tag 0x01  binary frame:    u16 id length + id + u8 kind length + kind
                               (png | depth_f32) + payload bytes

Every control message carries the protocol version and, except the initial
query, a session id. WebSocket transports map one control message to a text
frame and one binary frame to a binary frame (inner encoding, no prefix).
"""

from __future__ import annotations

import json
import struct
from dataclasses import dataclass, field
from enum import Enum

from ..errors import GuidanceError

PROTOCOL_VERSION = "gr/1"

TAG_CONTROL = 0
TAG_BINARY = 1

FRAME_KINDS = ("png", "depth_f32")


class ProtocolError(GuidanceError):
    pass


class MessageKind(str, Enum):
    QUERY = "query"
    SNAPSHOT = "snapshot"
    ADVANCE = "advance"
    BACK = "back"
    GET_STATE = "get_state"
    PLAN_READY = "plan_ready"
    GUIDANCE_READY = "guidance_ready"
    TIMER_TICK = "timer_tick"
    ERROR = "error"


@dataclass(frozen=True)
class ProtocolMessage:
    kind: MessageKind
    session_id: str | None = None
    payload: dict = field(default_factory=dict)
    seq: int | None = None
    version: str = PROTOCOL_VERSION

    def to_json(self) -> str:
        doc = {"kind": self.kind.value, "version": self.version, "payload": self.payload}
        if self.session_id is not None:
            doc["session_id"] = self.session_id
        if self.seq is not None:
            doc["seq"] = self.seq
        return json.dumps(doc, sort_keys=True)


@dataclass(frozen=True)
class BinaryFrame:
    frame_id: str
    kind: str
    data: bytes = field(repr=False)

    def __post_init__(self) -> None:
        if self.kind not in FRAME_KINDS:
            raise ProtocolError(f"unknown frame kind {self.kind!r}")


def parse_message(text: str) -> ProtocolMessage:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ProtocolError(f"control message is not JSON: {exc}") from exc
    if not isinstance(doc, dict):
        raise ProtocolError("control message is not an object")
    version = doc.get("version")
    if version != PROTOCOL_VERSION:
        raise ProtocolError(f"unsupported protocol version {version!r}")
    try:
        kind = MessageKind(doc.get("kind"))
    except ValueError:
        raise ProtocolError(f"unknown message kind {doc.get('kind')!r}") from None
    session_id = doc.get("session_id")
    if kind is not MessageKind.QUERY and not session_id:
        raise ProtocolError(f"{kind.value} message requires a session_id")
    payload = doc.get("payload", {})
    if not isinstance(payload, dict):
        raise ProtocolError("payload must be an object")
    seq = doc.get("seq")
    if seq is not None and (not isinstance(seq, int) or seq < 0):
        raise ProtocolError(f"invalid seq {seq!r}")
    return ProtocolMessage(kind=kind, session_id=session_id, payload=payload, seq=seq)


def encode_frame_body(frame: BinaryFrame) -> bytes:
    fid = frame.frame_id.encode()
    kind = frame.kind.encode()
    if len(fid) > 0xFFFF or len(kind) > 0xFF:
        raise ProtocolError("frame header fields too long")
    return struct.pack(">H", len(fid)) + fid + struct.pack(">B", len(kind)) + kind + frame.data


def decode_frame_body(body: bytes) -> BinaryFrame:
    if len(body) < 3:
        raise ProtocolError("binary frame too short")
    (id_len,) = struct.unpack_from(">H", body, 0)
    offset = 2
    frame_id = body[offset : offset + id_len].decode()
    offset += id_len
    (kind_len,) = struct.unpack_from(">B", body, offset)
    offset += 1
    kind = body[offset : offset + kind_len].decode()
    offset += kind_len
    return BinaryFrame(frame_id=frame_id, kind=kind, data=body[offset:])


def encode_record(item: ProtocolMessage | BinaryFrame) -> bytes:
    if isinstance(item, ProtocolMessage):
        body = item.to_json().encode()
        tag = TAG_CONTROL
    else:
        body = encode_frame_body(item)
        tag = TAG_BINARY
    return struct.pack(">IB", len(body) + 1, tag) + body


class RecordDecoder:
    """Incremental decoder for the length-prefixed stream."""

    MAX_RECORD = 64 * 1024 * 1024

    def __init__(self) -> None:
        self._buffer = bytearray()

    def feed(self, data: bytes) -> list[ProtocolMessage | BinaryFrame]:
        self._buffer.extend(data)
        out: list[ProtocolMessage | BinaryFrame] = []
        while True:
            if len(self._buffer) < 5:
                return out
            (length,) = struct.unpack_from(">I", self._buffer, 0)
            if length < 1 or length > self.MAX_RECORD:
                raise ProtocolError(f"invalid record length {length}")
            if len(self._buffer) < 4 + length:
                return out
            tag = self._buffer[4]
            body = bytes(self._buffer[5 : 4 + length])
            del self._buffer[: 4 + length]
            if tag == TAG_CONTROL:
                out.append(parse_message(body.decode()))
            elif tag == TAG_BINARY:
                out.append(decode_frame_body(body))
            else:
                raise ProtocolError(f"unknown record tag {tag}")
