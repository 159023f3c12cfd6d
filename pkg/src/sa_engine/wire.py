"""Canonical wire format shared by the stream and websocket channels.

Every message is canonical JSON (UTF-8, keys sorted, no whitespace) so that
structurally equal messages are byte-identical; stream transports prefix a
4-byte big-endian payload length.
"""

from __future__ import annotations

import json
import struct
from dataclasses import dataclass, field
from typing import Optional, Set

MESSAGE_TYPES = frozenset({
    "JOIN", "WELCOME", "ENTITY_UPDATE", "ENTITY_REMOVE", "ZONE_UPDATE",
    "ROUTE_UPDATE", "FOCUS_UPDATE", "CAMERA_META", "DECISIONS",
    "SNAPSHOT_REQ", "SNAPSHOT", "HEARTBEAT",
})

MAX_PAYLOAD = 16 * 1024 * 1024

FEDERATE_KINDS = ("mobile", "c2", "ui")


class ProtocolError(ValueError):
    pass


@dataclass(frozen=True)
class Message:
    type: str
    sender: str
    seq: int
    payload: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.type not in MESSAGE_TYPES:
            raise ProtocolError(f"unknown message type {self.type!r}")


def canonical_json(obj) -> bytes:
    return json.dumps(obj, sort_keys=True, separators=(",", ":"),
                      ensure_ascii=False).encode("utf-8")


def message_to_bytes(msg: Message) -> bytes:
    return canonical_json({
        "type": msg.type, "sender": msg.sender, "seq": msg.seq, "payload": msg.payload,
    })


def message_from_bytes(data: bytes) -> Message:
    try:
        obj = json.loads(data.decode("utf-8"))
        return Message(type=obj["type"], sender=obj["sender"],
                       seq=int(obj["seq"]), payload=obj.get("payload", {}))
    except (ValueError, KeyError, TypeError) as exc:
        raise ProtocolError(f"malformed message: {exc}") from exc


def frame_encode(msg: Message) -> bytes:
    """Length-prefixed canonical encoding for stream transports."""
    payload = message_to_bytes(msg)
    if len(payload) > MAX_PAYLOAD:
        raise ProtocolError(f"payload of {len(payload)} bytes exceeds 16 MiB")
    return struct.pack(">I", len(payload)) + payload


class FrameDecoder:
    """Incremental decoder for a length-prefixed byte stream."""

    def __init__(self):
        self._buf = bytearray()

    def feed(self, data: bytes):
        """Append stream bytes and yield every complete message."""
        self._buf.extend(data)
        while True:
            if len(self._buf) < 4:
                return
            (length,) = struct.unpack(">I", self._buf[:4])
            if length > MAX_PAYLOAD:
                raise ProtocolError(f"frame of {length} bytes exceeds 16 MiB")
            if len(self._buf) < 4 + length:
                return
            payload = bytes(self._buf[4:4 + length])
            del self._buf[:4 + length]
            yield message_from_bytes(payload)


def frame_decode(data: bytes) -> Message:
    """Decode exactly one frame; rejects trailing bytes."""
    if len(data) < 4:
        raise ProtocolError("truncated frame header")
    (length,) = struct.unpack(">I", data[:4])
    if len(data) != 4 + length:
        raise ProtocolError("frame length mismatch")
    return message_from_bytes(data[4:])
