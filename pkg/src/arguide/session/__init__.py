"""Session orchestration, the gr/1 protocol, relay fallback, and servers."""

from .dispatch import Dispatcher, ServiceRouter, build_snapshot, guidance_ready_message
from .journal import Journal, RecoveredSession, recover
from .protocol import (
    PROTOCOL_VERSION,
    BinaryFrame,
    MessageKind,
    ProtocolError,
    ProtocolMessage,
    RecordDecoder,
    decode_frame_body,
    encode_frame_body,
    encode_record,
    parse_message,
)
from .relay import DEDUP_WINDOW, OrderedInbox, RelayEndpoint, RelayMailbox, RelayUnavailable
from .server import SessionServer, run_server
from .service import (
    AtFirstStep,
    CreatedSession,
    EmptyQuery,
    EndOfPlan,
    SessionService,
    SessionSummary,
    SnapshotRequired,
    UnknownSession,
)
from .state import SessionState, StepRecord, TimerState
from .timer import TimerTick, countdown, run_timer

__all__ = [
    "AtFirstStep",
    "BinaryFrame",
    "CreatedSession",
    "DEDUP_WINDOW",
    "Dispatcher",
    "EmptyQuery",
    "EndOfPlan",
    "Journal",
    "MessageKind",
    "OrderedInbox",
    "PROTOCOL_VERSION",
    "ProtocolError",
    "ProtocolMessage",
    "RecordDecoder",
    "RecoveredSession",
    "RelayEndpoint",
    "RelayMailbox",
    "RelayUnavailable",
    "ServiceRouter",
    "SessionServer",
    "SessionService",
    "SessionState",
    "SessionSummary",
    "SnapshotRequired",
    "StepRecord",
    "TimerState",
    "TimerTick",
    "UnknownSession",
    "build_snapshot",
    "countdown",
    "decode_frame_body",
    "encode_frame_body",
    "encode_record",
    "guidance_ready_message",
    "parse_message",
    "recover",
    "run_server",
    "run_timer",
]
