"""Socket servers speaking the gr/1 protocol.

The TCP listener carries the canonical length-prefixed stream; the optional
WebSocket listener maps control messages to text frames and binary frames to
binary frames so browsers can connect. Both share one dispatcher per
connection and push timer ticks while a widget step is active.
"""

from __future__ import annotations

import asyncio
import logging
from typing import Callable

from .dispatch import Dispatcher, ServiceRouter
from .protocol import (
    BinaryFrame,
    MessageKind,
    ProtocolError,
    ProtocolMessage,
    RecordDecoder,
    decode_frame_body,
    encode_record,
    parse_message,
)
from .timer import countdown

log = logging.getLogger(__name__)


class SessionServer:
    def __init__(
        self,
        router: ServiceRouter,
        fixture_snapshot_loader=None,
        tick_interval_s: float = 1.0,
    ) -> None:
        self.router = router
        self.fixture_snapshot_loader = fixture_snapshot_loader
        self.tick_interval_s = tick_interval_s
        self._timer_tasks: dict[str, asyncio.Task] = {}

    def _dispatcher(self) -> Dispatcher:
        return Dispatcher(self.router, self.fixture_snapshot_loader)

    async def _maybe_start_timer(self, session_id: str | None, send) -> None:
        if session_id is None:
            return
        try:
            service = self.router.for_session(session_id)
            state = service.timer_state(session_id)
        except Exception:
            return
        previous = self._timer_tasks.pop(session_id, None)
        if previous is not None:
            previous.cancel()
        if state is None:
            return

        async def tick_loop() -> None:
            generation = state.generation
            for i, (remaining, expired) in enumerate(countdown(state.total_seconds)):
                if i:
                    await asyncio.sleep(self.tick_interval_s)
                if not service.timer_still_active(session_id, generation):
                    return
                await send(
                    ProtocolMessage(
                        kind=MessageKind.TIMER_TICK,
                        session_id=session_id,
                        payload={
                            "step_index": state.step_index,
                            "remaining_seconds": remaining,
                            "expired": expired,
                        },
                    )
                )

        self._timer_tasks[session_id] = asyncio.create_task(tick_loop())

    async def _process(self, dispatcher: Dispatcher, item, send) -> None:
        loop = asyncio.get_running_loop()
        replies = await loop.run_in_executor(None, dispatcher.handle, item)
        for reply in replies:
            await send(reply)
        touched = {r.session_id for r in replies if r.kind is MessageKind.GUIDANCE_READY}
        for session_id in touched:
            await self._maybe_start_timer(session_id, send)

    # -- TCP ---------------------------------------------------------------

    async def handle_tcp(self, reader: asyncio.StreamReader, writer: asyncio.StreamWriter) -> None:
        dispatcher = self._dispatcher()
        decoder = RecordDecoder()
        send_lock = asyncio.Lock()

        async def send(message: ProtocolMessage) -> None:
            async with send_lock:
                writer.write(encode_record(message))
                await writer.drain()

        try:
            while True:
                data = await reader.read(65536)
                if not data:
                    break
                try:
                    items = decoder.feed(data)
                except ProtocolError as exc:
                    await send(
                        ProtocolMessage(
                            kind=MessageKind.ERROR,
                            session_id="-",
                            payload={"code": "ProtocolError", "detail": str(exc)},
                        )
                    )
                    break
                for item in items:
                    await self._process(dispatcher, item, send)
        finally:
            writer.close()
            try:
                await writer.wait_closed()
            except (ConnectionError, OSError):  # pragma: no cover
                pass

    async def serve_tcp(self, host: str = "127.0.0.1", port: int = 0) -> asyncio.AbstractServer:
        server = await asyncio.start_server(self.handle_tcp, host, port)
        address = server.sockets[0].getsockname()
        log.info("gr/1 TCP listening on %s:%s", address[0], address[1])
        return server

    # -- WebSocket -----------------------------------------------------------

    async def handle_websocket(self, websocket) -> None:
        dispatcher = self._dispatcher()
        send_lock = asyncio.Lock()

        async def send(message: ProtocolMessage) -> None:
            async with send_lock:
                await websocket.send(message.to_json())

        try:
            async for raw in websocket:
                try:
                    if isinstance(raw, bytes):
                        item: ProtocolMessage | BinaryFrame = decode_frame_body(raw)
                    else:
                        item = parse_message(raw)
                except ProtocolError as exc:
                    await send(
                        ProtocolMessage(
                            kind=MessageKind.ERROR,
                            session_id="-",
                            payload={"code": "ProtocolError", "detail": str(exc)},
                        )
                    )
                    continue
                await self._process(dispatcher, item, send)
        except Exception:  # connection closed
            pass

    async def serve_websocket(self, host: str = "127.0.0.1", port: int = 0):
        import websockets

        server = await websockets.serve(self.handle_websocket, host, port)
        log.info("gr/1 WebSocket listening on %s:%s", host, port)
        return server


def run_server(
    router_factory: Callable[[], ServiceRouter],
    *,
    host: str,
    tcp_port: int,
    ws_port: int | None,
    fixture_snapshot_loader=None,
    tick_interval_s: float = 1.0,
) -> None:
    """Blocking entry point used by the CLI."""

    async def main() -> None:
        server = SessionServer(
            router_factory(),
            fixture_snapshot_loader=fixture_snapshot_loader,
            tick_interval_s=tick_interval_s,
        )
        tcp = await server.serve_tcp(host, tcp_port)
        if ws_port is not None:
            await server.serve_websocket(host, ws_port)
        async with tcp:
            await asyncio.Event().wait()

    asyncio.run(main())
