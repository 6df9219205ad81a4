"""Store-and-forward message relay with at-least-once delivery semantics.

When a direct socket is unavailable, clients post control messages to a
mailbox that the service polls. Delivery may duplicate and reorder, so each
client numbers its messages; the receiving side deduplicates within a
sequence window and releases messages strictly in order, holding early
arrivals until the gap fills or their hold TTL expires.
"""

from __future__ import annotations

import threading
from dataclasses import dataclass, field

from ..errors import GuidanceError
from .protocol import ProtocolMessage

DEDUP_WINDOW = 256


class RelayUnavailable(GuidanceError):
    pass


class RelayMailbox:
    """In-memory mailbox standing in for an external store-and-forward service."""

    def __init__(self, available: bool = True):
        self.available = available
        self._topics: dict[str, list[ProtocolMessage]] = {}
        self._lock = threading.Lock()

    def post(self, topic: str, message: ProtocolMessage) -> None:
        if not self.available:
            raise RelayUnavailable("relay mailbox is down")
        with self._lock:
            self._topics.setdefault(topic, []).append(message)

    def poll(self, topic: str, cursor: int) -> tuple[list[ProtocolMessage], int]:
        if not self.available:
            raise RelayUnavailable("relay mailbox is down")
        with self._lock:
            items = self._topics.get(topic, [])
            return list(items[cursor:]), len(items)


@dataclass
class _Held:
    message: ProtocolMessage
    age: int = 0


@dataclass
class OrderedInbox:
    """Dedup + in-order release for relayed messages.

    Messages must carry ``seq`` starting at 1. Duplicates (already delivered
    or currently held) are dropped; a message arriving before its
    predecessors is held for up to ``ttl`` subsequent offers, then dropped.
    """

    window: int = DEDUP_WINDOW
    ttl: int = 64
    next_seq: int = 1
    held: dict[int, _Held] = field(default_factory=dict)
    dropped: list[ProtocolMessage] = field(default_factory=list)

    def offer(self, message: ProtocolMessage) -> list[ProtocolMessage]:
        """Feed one delivery; returns the messages now releasable in order."""
        seq = message.seq
        if seq is None:
            raise ValueError("relayed messages need a sequence number")
        for held in self.held.values():
            held.age += 1
        self._expire()
        if seq < self.next_seq or seq in self.held:
            return []  # duplicate delivery
        if seq >= self.next_seq + self.window:
            self.dropped.append(message)
            return []
        self.held[seq] = _Held(message)
        released = []
        while self.next_seq in self.held:
            released.append(self.held.pop(self.next_seq).message)
            self.next_seq += 1
        return released

    def _expire(self) -> None:
        for seq in [s for s, h in self.held.items() if h.age > self.ttl]:
            self.dropped.append(self.held.pop(seq).message)


class RelayEndpoint:
    """Service-side relay consumer: polls a mailbox topic, applies messages in order."""

    def __init__(self, mailbox: RelayMailbox, topic: str, handler, window: int = DEDUP_WINDOW):
        self.mailbox = mailbox
        self.topic = topic
        self.handler = handler
        self.inbox = OrderedInbox(window=window)
        self._cursor = 0

    def pump(self) -> list:
        """Poll once; apply releasable messages; return handler replies."""
        deliveries, self._cursor = self.mailbox.poll(self.topic, self._cursor)
        replies = []
        for delivery in deliveries:
            for message in self.inbox.offer(delivery):
                replies.extend(self.handler(message))
        return replies
