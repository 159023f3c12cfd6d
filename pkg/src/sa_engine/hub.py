"""Hub-based replication core: star routing, remote-update application, and a
deterministic chaos transport for convergence tests.

The hub forwards each message to every other subscribed federate, preserving
per-sender FIFO order, and keeps its own replica so it can answer SNAPSHOT
requests from (re)joining federates.  Database convergence comes from the
entity model's last-writer-wins rules, not from delivery order.
"""

from __future__ import annotations

import hashlib
import random
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Set, Tuple

from .entities import EntityDatabase, entity_from_record, entity_to_record
from .wire import MESSAGE_TYPES, Message, ProtocolError, canonical_json


@dataclass
class Federate:
    id: str
    kind: str  # mobile | c2 | ui
    subscriptions: Set[str] = field(default_factory=lambda: set(MESSAGE_TYPES))


@dataclass
class RouteResult:
    deliveries: List[Tuple[str, Message]] = field(default_factory=list)
    replies: List[Message] = field(default_factory=list)  # hub -> sender only
    error: Optional[str] = None
    dropped: bool = False


class Hub:
    """Transport-agnostic routing core for one session."""

    def __init__(self, db: Optional[EntityDatabase] = None):
        self.db = db  # hub replica; serves SNAPSHOT replies when present
        self.federates: Dict[str, Federate] = {}
        self._last_seq: Dict[str, int] = {}
        self._seq_out = 0
        self.shared_state: Dict[str, dict] = {}  # latest zone/route/focus payloads

    def _next_seq(self) -> int:
        self._seq_out += 1
        return self._seq_out

    def join(self, federate_id: str, kind: str, subscriptions: Optional[Set[str]] = None) -> List[Message]:
        """Register a federate; returns the WELCOME (+ SNAPSHOT) replies."""
        if federate_id in self.federates:
            # Rejoin: drop stale state, keep the seq watermark rule fresh.
            self._last_seq.pop(federate_id, None)
        self.federates[federate_id] = Federate(
            id=federate_id, kind=kind,
            subscriptions=set(subscriptions) if subscriptions is not None else set(MESSAGE_TYPES),
        )
        replies = [Message("WELCOME", "hub", self._next_seq(),
                           {"federate": federate_id, "peers": sorted(self.federates)})]
        replies.append(self._snapshot_message())
        return replies

    def leave(self, federate_id: str):
        self.federates.pop(federate_id, None)
        self._last_seq.pop(federate_id, None)

    def _snapshot_message(self) -> Message:
        payload: dict = {"entities": [], "shared": self.shared_state}
        if self.db is not None:
            payload["entities"] = [entity_to_record(e) for e in self.db.snapshot()]
        return Message("SNAPSHOT", "hub", self._next_seq(), payload)

    def route(self, msg: Message) -> RouteResult:
        """Forward msg to every other subscribed federate (per-link FIFO)."""
        result = RouteResult()
        if msg.sender not in self.federates:
            result.error = f"unknown sender {msg.sender!r}"
            result.dropped = True
            return result
        last = self._last_seq.get(msg.sender)
        if last is not None and msg.seq <= last:
            result.error = f"seq regression from {msg.sender}: {msg.seq} <= {last}"
            result.dropped = True
            return result
        self._last_seq[msg.sender] = msg.seq

        if msg.type == "SNAPSHOT_REQ":
            result.replies.append(self._snapshot_message())
            return result

        # Keep the hub replica current so SNAPSHOT replies are complete.
        if self.db is not None and msg.type in ("ENTITY_UPDATE", "ENTITY_REMOVE"):
            try:
                apply_remote(self.db, msg)
            except ProtocolError as exc:
                result.error = str(exc)
                result.dropped = True
                return result
        if msg.type in ("ZONE_UPDATE", "ROUTE_UPDATE", "FOCUS_UPDATE"):
            self.shared_state[msg.type] = msg.payload

        for fed in self.federates.values():
            if fed.id != msg.sender and msg.type in fed.subscriptions:
                result.deliveries.append((fed.id, msg))
        return result


def apply_remote(db: EntityDatabase, msg: Message) -> bool:
    """Apply a state-mutating message to a local replica; idempotent under
    duplicate delivery.  Returns True when the database changed."""
    try:
        if msg.type == "ENTITY_UPDATE":
            return db.upsert_entity(entity_from_record(msg.payload))
        if msg.type == "ENTITY_REMOVE":
            return db.remove_entity(msg.payload["id"], int(msg.payload["version"]),
                                    msg.payload["owner"])
        if msg.type == "SNAPSHOT":
            changed = False
            for rec in msg.payload.get("entities", []):
                changed |= db.upsert_entity(entity_from_record(rec))
            return changed
    except ProtocolError:
        raise
    except (KeyError, TypeError, ValueError) as exc:
        raise ProtocolError(f"malformed {msg.type} payload: {exc}") from exc
    raise ProtocolError(f"{msg.type} does not mutate entity state")


def snapshot_hash(db: EntityDatabase) -> str:
    """Stable digest of the database contents; equal iff snapshots are equal."""
    blob = canonical_json([entity_to_record(e) for e in db.snapshot()])
    return hashlib.sha256(blob).hexdigest()


@dataclass(frozen=True)
class ChaosConfig:
    """Reliable-with-chaos transport knobs: no loss, only delay, duplication,
    and bounded reordering."""

    delay_ms: Tuple[float, float] = (0.0, 0.0)
    duplicate_prob: float = 0.0
    reorder_window: int = 0

    def __post_init__(self):
        if not (0.0 <= self.duplicate_prob <= 1.0):
            raise ValueError("duplicate_prob must be in [0, 1]")
        if self.reorder_window < 0:
            raise ValueError("reorder_window must be >= 0")


class SimNetwork:
    """Deterministic simulated transport: every accepted message is delivered
    at least once; order is perturbed within the reorder window."""

    def __init__(self, config: ChaosConfig = ChaosConfig(), seed: int = 0):
        self.config = config
        self._rng = random.Random(seed)
        self._queue: List[Tuple[float, int, str, Message]] = []
        self._counter = 0

    def send(self, dst: str, msg: Message):
        copies = 1
        if self._rng.random() < self.config.duplicate_prob:
            copies += 1
        for _ in range(copies):
            jitter = self._rng.randint(0, self.config.reorder_window)
            delay = self._rng.uniform(*self.config.delay_ms)
            key = self._counter + jitter + delay * 1e-6
            self._queue.append((key, self._counter, dst, msg))
            self._counter += 1

    def deliver_all(self) -> List[Tuple[str, Message]]:
        """Drain the queue in arrival order; deterministic for a fixed seed."""
        self._queue.sort(key=lambda item: (item[0], item[1]))
        out = [(dst, msg) for _, _, dst, msg in self._queue]
        self._queue.clear()
        return out
