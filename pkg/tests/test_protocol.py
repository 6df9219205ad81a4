import pytest

from arguide.session import (
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


def test_control_message_round_trip():
    msg = ProtocolMessage(
        kind=MessageKind.ADVANCE, session_id="abc123", payload={"x": 1}, seq=7
    )
    decoded = parse_message(msg.to_json())
    assert decoded == msg


def test_version_is_mandatory():
    with pytest.raises(ProtocolError):
        parse_message('{"kind": "advance", "session_id": "s", "payload": {}}')
    with pytest.raises(ProtocolError):
        parse_message('{"kind": "advance", "session_id": "s", "version": "gr/2", "payload": {}}')


def test_session_id_required_except_query():
    parse_message('{"kind": "query", "version": "gr/1", "payload": {}}')
    with pytest.raises(ProtocolError):
        parse_message('{"kind": "advance", "version": "gr/1", "payload": {}}')


def test_unknown_kind():
    with pytest.raises(ProtocolError):
        parse_message('{"kind": "hello", "version": "gr/1", "session_id": "s"}')


def test_binary_frame_round_trip():
    frame = BinaryFrame(frame_id="frame-1", kind="depth_f32", data=b"\x00\x01\x02\x03")
    assert decode_frame_body(encode_frame_body(frame)) == frame


def test_binary_frame_kind_checked():
    with pytest.raises(ProtocolError):
        BinaryFrame(frame_id="x", kind="jpeg", data=b"")


def test_stream_decoder_handles_partial_feeds():
    msg = ProtocolMessage(kind=MessageKind.BACK, session_id="s", payload={})
    frame = BinaryFrame(frame_id="f", kind="png", data=b"can be anything here")
    stream = encode_record(msg) + encode_record(frame) + encode_record(msg)
    decoder = RecordDecoder()
    seen = []
    for i in range(0, len(stream), 7):  # drip-feed in 7-byte chunks
        seen.extend(decoder.feed(stream[i : i + 7]))
    assert [type(s).__name__ for s in seen] == ["ProtocolMessage", "BinaryFrame", "ProtocolMessage"]
    assert seen[1] == frame


def test_decoder_rejects_bad_tag():
    decoder = RecordDecoder()
    with pytest.raises(ProtocolError):
        decoder.feed(b"\x00\x00\x00\x01\x07")


def test_decoder_rejects_crazy_length():
    decoder = RecordDecoder()
    with pytest.raises(ProtocolError):
        decoder.feed(b"\xff\xff\xff\xff\x00")
