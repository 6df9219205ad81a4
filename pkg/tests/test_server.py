import asyncio
import json

from arguide.fixtureset import fixture_dir
from arguide.session import (
    MessageKind,
    ProtocolMessage,
    RecordDecoder,
    ServiceRouter,
    SessionServer,
    SessionService,
    encode_record,
    parse_message,
)
from arguide.vision import Gateway, MockProvider


def build_server(tick_interval_s=0.01):
    def factory(fixture_id):
        provider = MockProvider(fixture_dir(fixture_id or "printer-reset"))
        return SessionService(Gateway(provider, sleep=lambda _: None))

    def loader(bundle, scene):
        return MockProvider(fixture_dir(bundle)).load_scene(scene)

    return SessionServer(
        ServiceRouter(factory), fixture_snapshot_loader=loader, tick_interval_s=tick_interval_s
    )


def fixture_snapshot(scene):
    return {"snapshot": {"fixture": {"bundle": "printer-reset", "scene": scene}}}


async def read_messages(reader, decoder, count, timeout=10.0):
    got = []
    while len(got) < count:
        data = await asyncio.wait_for(reader.read(65536), timeout)
        assert data, "server closed early"
        got.extend(decoder.feed(data))
    return got


def test_tcp_session_round_trip():
    async def scenario():
        server = build_server()
        tcp = await server.serve_tcp("127.0.0.1", 0)
        port = tcp.sockets[0].getsockname()[1]
        reader, writer = await asyncio.open_connection("127.0.0.1", port)
        decoder = RecordDecoder()

        query = ProtocolMessage(
            kind=MessageKind.QUERY,
            payload={
                "query": "how to clean the 3D printer from this stage",
                "fixture_id": "printer-reset",
                **fixture_snapshot("scene01"),
            },
        )
        writer.write(encode_record(query))
        await writer.drain()
        plan_ready, guidance = await read_messages(reader, decoder, 2)
        assert plan_ready.kind is MessageKind.PLAN_READY
        assert plan_ready.payload["step_count"] == 8
        session_id = plan_ready.session_id
        assert guidance.kind is MessageKind.GUIDANCE_READY
        assert guidance.payload["step_index"] == 0
        assert guidance.payload["timing"]["vision_s"] > 0

        advance = ProtocolMessage(
            kind=MessageKind.ADVANCE, session_id=session_id, payload=fixture_snapshot("scene02")
        )
        writer.write(encode_record(advance))
        await writer.drain()
        (step1,) = await read_messages(reader, decoder, 1)
        assert step1.payload["step_index"] == 1
        assert step1.payload["category"] == "highlight"

        # navigating past the compiled frontier without a snapshot errors,
        # but the session survives
        bad = ProtocolMessage(kind=MessageKind.ADVANCE, session_id=session_id, payload={})
        writer.write(encode_record(bad))
        await writer.drain()
        (err,) = await read_messages(reader, decoder, 1)
        assert err.kind is MessageKind.ERROR
        assert err.payload["code"] == "SnapshotRequired"

        state = ProtocolMessage(kind=MessageKind.GET_STATE, session_id=session_id)
        writer.write(encode_record(state))
        await writer.drain()
        (summary,) = await read_messages(reader, decoder, 1)
        assert summary.payload["current_step"] == 1

        writer.close()
        await writer.wait_closed()
        tcp.close()
        await tcp.wait_closed()

    asyncio.run(scenario())


def test_tcp_timer_ticks_stream():
    async def scenario():
        server = build_server(tick_interval_s=0.005)
        tcp = await server.serve_tcp("127.0.0.1", 0)
        port = tcp.sockets[0].getsockname()[1]
        reader, writer = await asyncio.open_connection("127.0.0.1", port)
        decoder = RecordDecoder()

        query = ProtocolMessage(
            kind=MessageKind.QUERY,
            payload={
                "query": "how to clean the 3D printer from this stage",
                "fixture_id": "printer-reset",
                **fixture_snapshot("scene01"),
            },
        )
        writer.write(encode_record(query))
        await writer.drain()
        plan_ready, _ = await read_messages(reader, decoder, 2)
        session_id = plan_ready.session_id

        spill = []
        for i in range(2, 7):  # advance to the widget step (index 5)
            writer.write(
                encode_record(
                    ProtocolMessage(
                        kind=MessageKind.ADVANCE,
                        session_id=session_id,
                        payload=fixture_snapshot(f"scene{i:02d}"),
                    )
                )
            )
            await writer.drain()
            batch = await read_messages(reader, decoder, 1)
            spill.extend(m for m in batch if m.kind is MessageKind.TIMER_TICK)

        # 90-second widget: ticks start at 90 and count down
        ticks = list(spill)
        while len(ticks) < 3:
            batch = await read_messages(reader, decoder, 1)
            ticks.extend(m for m in batch if m.kind is MessageKind.TIMER_TICK)
        assert [t.payload["remaining_seconds"] for t in ticks[:3]] == [90, 89, 88]
        assert not any(t.payload["expired"] for t in ticks)

        # advancing mid-count stops the stream: drain then expect only the
        # guidance reply and no further ticks
        writer.write(
            encode_record(
                ProtocolMessage(
                    kind=MessageKind.ADVANCE,
                    session_id=session_id,
                    payload=fixture_snapshot("scene07"),
                )
            )
        )
        await writer.drain()
        got = await read_messages(reader, decoder, 1)
        while got and got[-1].kind is MessageKind.TIMER_TICK:
            got = await read_messages(reader, decoder, 1)
        assert got[-1].kind is MessageKind.GUIDANCE_READY
        await asyncio.sleep(0.05)

        writer.close()
        await writer.wait_closed()
        tcp.close()
        await tcp.wait_closed()

    asyncio.run(scenario())


def test_websocket_round_trip():
    import websockets

    async def scenario():
        server = build_server()
        ws_server = await server.serve_websocket("127.0.0.1", 0)
        port = next(iter(ws_server.sockets)).getsockname()[1]

        async with websockets.connect(f"ws://127.0.0.1:{port}") as ws:
            query = ProtocolMessage(
                kind=MessageKind.QUERY,
                payload={
                    "query": "how to clean the 3D printer from this stage",
                    "fixture_id": "printer-reset",
                    **fixture_snapshot("scene01"),
                },
            )
            await ws.send(query.to_json())
            plan_ready = parse_message(await asyncio.wait_for(ws.recv(), 10))
            guidance = parse_message(await asyncio.wait_for(ws.recv(), 10))
            assert plan_ready.kind is MessageKind.PLAN_READY
            assert guidance.kind is MessageKind.GUIDANCE_READY
            assert guidance.payload["export"]["primitives"]
            assert guidance.payload["export"]["frame_png_b64"]

            bad = json.dumps({"kind": "advance", "version": "gr/1", "payload": {}})
            await ws.send(bad)
            err = parse_message(await asyncio.wait_for(ws.recv(), 10))
            assert err.kind is MessageKind.ERROR

        ws_server.close()
        await ws_server.wait_closed()

    asyncio.run(scenario())


def test_websocket_binary_frame_upload():
    import io

    import numpy as np
    import websockets
    from PIL import Image

    from arguide.session import BinaryFrame, encode_frame_body

    async def scenario():
        server = build_server()
        ws_server = await server.serve_websocket("127.0.0.1", 0)
        port = next(iter(ws_server.sockets)).getsockname()[1]

        image = np.full((480, 640, 3), 180, np.uint8)
        buf = io.BytesIO()
        Image.fromarray(image).save(buf, format="PNG")
        depth = np.full((120, 160), 1.5, "<f4").tobytes()

        async with websockets.connect(f"ws://127.0.0.1:{port}", max_size=16 * 1024 * 1024) as ws:
            await ws.send(encode_frame_body(BinaryFrame("img-1", "png", buf.getvalue())))
            await ws.send(encode_frame_body(BinaryFrame("dep-1", "depth_f32", depth)))
            query = ProtocolMessage(
                kind=MessageKind.QUERY,
                payload={
                    "query": "how to clean the 3D printer from this stage",
                    "fixture_id": "printer-reset",
                    "snapshot": {
                        "scene_id": "scene01",
                        "image_frame": "img-1",
                        "depth_frame": "dep-1",
                        "meta": {
                            "depth": {"width": 160, "height": 120},
                            "intrinsics": {
                                "fx": 500.0,
                                "fy": 500.0,
                                "cx": 320.0,
                                "cy": 240.0,
                                "width": 640,
                                "height": 480,
                            },
                            "pose": {
                                "rotation": [1, 0, 0, 0, 1, 0, 0, 0, 1],
                                "translation": [0, 0, 0],
                            },
                        },
                    },
                },
            )
            await ws.send(query.to_json())
            plan_ready = parse_message(await asyncio.wait_for(ws.recv(), 10))
            guidance = parse_message(await asyncio.wait_for(ws.recv(), 10))
            assert plan_ready.payload["step_count"] == 8
            assert guidance.payload["export"]["scene_id"] == "scene01"

        ws_server.close()
        await ws_server.wait_closed()

    asyncio.run(scenario())
