import itertools
import random
import time

import pytest

from sa_engine.entities import DEFAULT_CLASS_TABLE, Entity, EntityDatabase
from sa_engine.geo import Point3
from sa_engine.hub import (
    ChaosConfig,
    Hub,
    SimNetwork,
    apply_remote,
    snapshot_hash,
)
from sa_engine.wire import Message, ProtocolError


def upd(sender, seq, eid, version, owner=None, x=0.0):
    return Message("ENTITY_UPDATE", sender, seq, {
        "id": eid, "class": "vehicle", "position": [x, 0.0, 0.0],
        "heading": 0.0, "last_update": 0.0,
        "version": version, "owner": owner or sender,
    })


def rem(sender, seq, eid, version, owner=None):
    return Message("ENTITY_REMOVE", sender, seq,
                   {"id": eid, "version": version, "owner": owner or sender})


def fresh_hub():
    hub = Hub(db=EntityDatabase(DEFAULT_CLASS_TABLE))
    hub.join("fed-a", "mobile")
    hub.join("fed-b", "mobile")
    hub.join("fed-c", "c2")
    return hub


class TestJoin:
    def test_welcome_then_snapshot(self):
        hub = Hub(db=EntityDatabase(DEFAULT_CLASS_TABLE))
        replies = hub.join("fed-a", "mobile")
        assert [m.type for m in replies] == ["WELCOME", "SNAPSHOT"]
        assert replies[0].payload["federate"] == "fed-a"

    def test_snapshot_carries_current_entities(self):
        hub = fresh_hub()
        hub.route(upd("fed-a", 1, "e1", 1))
        replies = hub.join("fed-d", "ui")
        snap = replies[1]
        assert [r["id"] for r in snap.payload["entities"]] == ["e1"]

    def test_rejoin_resets_seq_watermark(self):
        hub = fresh_hub()
        hub.route(upd("fed-a", 10, "e1", 1))
        hub.join("fed-a", "mobile")  # reconnect restarts its sequence
        assert not hub.route(upd("fed-a", 1, "e1", 2)).dropped


class TestRouting:
    def test_fan_out_excludes_sender(self):
        hub = fresh_hub()
        res = hub.route(upd("fed-a", 1, "e1", 1))
        assert sorted(dst for dst, _ in res.deliveries) == ["fed-b", "fed-c"]

    def test_unknown_sender_dropped(self):
        hub = fresh_hub()
        res = hub.route(upd("ghost", 1, "e1", 1))
        assert res.dropped and res.error and not res.deliveries

    def test_subscription_filter(self):
        hub = fresh_hub()
        hub.join("ui-1", "ui", subscriptions={"DECISIONS", "SNAPSHOT"})
        res = hub.route(upd("fed-a", 1, "e1", 1))
        assert "ui-1" not in [dst for dst, _ in res.deliveries]

    def test_seq_regression_dropped_with_error(self):
        hub = fresh_hub()
        assert not hub.route(upd("fed-a", 5, "e1", 1)).dropped
        res = hub.route(upd("fed-a", 5, "e1", 2))
        assert res.dropped and "regression" in res.error
        res = hub.route(upd("fed-a", 3, "e1", 2))
        assert res.dropped

    def test_per_sender_fifo_preserved(self):
        hub = fresh_hub()
        order = []
        for i in range(10):
            res = hub.route(upd("fed-a", i + 1, "e1", i + 1))
            order.extend(m.seq for dst, m in res.deliveries if dst == "fed-b")
        assert order == sorted(order)

    def test_snapshot_req_answered_not_forwarded(self):
        hub = fresh_hub()
        hub.route(upd("fed-a", 1, "e1", 1))
        res = hub.route(Message("SNAPSHOT_REQ", "fed-b", 1))
        assert not res.deliveries
        assert res.replies[0].type == "SNAPSHOT"
        assert [r["id"] for r in res.replies[0].payload["entities"]] == ["e1"]

    def test_shared_state_tracks_latest_focus(self):
        hub = fresh_hub()
        hub.route(Message("FOCUS_UPDATE", "fed-c", 1, {"awareness_range": 50.0}))
        hub.route(Message("FOCUS_UPDATE", "fed-c", 2, {"awareness_range": 80.0}))
        assert hub.shared_state["FOCUS_UPDATE"]["awareness_range"] == 80.0

    def test_malformed_update_dropped_not_forwarded(self):
        hub = fresh_hub()
        bad = Message("ENTITY_UPDATE", "fed-a", 1, {"id": "e1"})
        res = hub.route(bad)
        assert res.dropped and not res.deliveries


class TestApplyRemote:
    def make_db(self):
        return EntityDatabase(DEFAULT_CLASS_TABLE)

    def test_update_applies(self):
        db = self.make_db()
        assert apply_remote(db, upd("fed-a", 1, "e1", 1))
        assert db.get("e1").owner == "fed-a"

    def test_duplicate_delivery_idempotent(self):
        db = self.make_db()
        m = upd("fed-a", 1, "e1", 3, x=7.0)
        apply_remote(db, m)
        before = snapshot_hash(db)
        assert not apply_remote(db, m)
        assert snapshot_hash(db) == before

    def test_remove_then_stale_update_ignored(self):
        db = self.make_db()
        apply_remote(db, upd("fed-a", 1, "e1", 2))
        apply_remote(db, rem("fed-a", 2, "e1", 3))
        assert not apply_remote(db, upd("fed-a", 3, "e1", 2))
        assert db.get("e1") is None

    def test_non_mutating_type_rejected(self):
        with pytest.raises(ProtocolError):
            apply_remote(self.make_db(), Message("HEARTBEAT", "f", 1))

    def test_order_independence_over_permutations(self):
        # Any delivery order of the same update set converges to one state.
        msgs = [upd("fed-a", 1, "e1", 1, x=1.0),
                upd("fed-b", 1, "e1", 2, x=2.0),
                rem("fed-a", 2, "e1", 3),
                upd("fed-b", 2, "e2", 1, x=4.0),
                upd("fed-c", 1, "e2", 2, x=5.0)]
        hashes = set()
        for perm in itertools.permutations(msgs):
            db = self.make_db()
            for m in perm:
                apply_remote(db, m)
            hashes.add(snapshot_hash(db))
        assert len(hashes) == 1

    def test_shuffle_oracle_large(self):
        rng = random.Random(101)
        msgs = []
        for i in range(100):
            owner = rng.choice(["fed-a", "fed-b", "fed-c"])
            eid = f"e{rng.randint(0, 20):02d}"
            # Updates use even versions and removes odd ones so an update and
            # a remove never tie on (version, owner), which would make the
            # survivor depend on arrival order.
            if rng.random() < 0.15:
                msgs.append(rem(owner, i + 1, eid, rng.randint(1, 9) * 2 + 1))
            else:
                ver = rng.randint(1, 9) * 2
                msgs.append(upd(owner, i + 1, eid, ver,
                                x=float(ver * 10 + ord(owner[-1]))))
        reference = None
        for _ in range(200):
            shuffled = msgs[:]
            rng.shuffle(shuffled)
            db = self.make_db()
            for m in shuffled:
                apply_remote(db, m)
            h = snapshot_hash(db)
            reference = reference or h
            assert h == reference


class TestSimNetwork:
    CHAOS = ChaosConfig(delay_ms=(0.0, 20.0), duplicate_prob=0.3, reorder_window=5)

    def test_config_validation(self):
        with pytest.raises(ValueError):
            ChaosConfig(duplicate_prob=1.5)
        with pytest.raises(ValueError):
            ChaosConfig(reorder_window=-1)

    def test_no_loss(self):
        net = SimNetwork(self.CHAOS, seed=4)
        sent = [upd("fed-a", i + 1, f"e{i}", 1) for i in range(100)]
        for m in sent:
            net.send("fed-b", m)
        got = [m for _, m in net.deliver_all()]
        for m in sent:
            assert m in got  # at least once

    def test_duplicates_occur(self):
        net = SimNetwork(self.CHAOS, seed=4)
        for i in range(200):
            net.send("fed-b", upd("fed-a", i + 1, f"e{i}", 1))
        assert len(net.deliver_all()) > 200

    def test_deterministic_per_seed(self):
        def run(seed):
            net = SimNetwork(self.CHAOS, seed=seed)
            for i in range(50):
                net.send("fed-b", upd("fed-a", i + 1, f"e{i}", 1))
            return net.deliver_all()
        assert run(7) == run(7)
        assert run(7) != run(8)

    def test_default_transport_is_fifo(self):
        net = SimNetwork(ChaosConfig(), seed=0)
        msgs = [upd("fed-a", i + 1, "e1", i + 1) for i in range(30)]
        for m in msgs:
            net.send("fed-b", m)
        assert [m for _, m in net.deliver_all()] == msgs


class TestConvergence:
    def run_session(self, seed):
        """Three federates exchange 500 mixed updates over the chaos net."""
        rng = random.Random(seed)
        feds = {f: EntityDatabase(DEFAULT_CLASS_TABLE)
                for f in ("fed-a", "fed-b", "fed-c")}
        hub = Hub(db=EntityDatabase(DEFAULT_CLASS_TABLE))
        for f in feds:
            hub.join(f, "mobile")
        net = SimNetwork(ChaosConfig(delay_ms=(0.0, 30.0), duplicate_prob=0.3,
                                     reorder_window=5), seed=seed)
        seqs = dict.fromkeys(feds, 0)
        for _ in range(500):
            f = rng.choice(sorted(feds))
            seqs[f] += 1
            eid = f"e{rng.randint(0, 40):02d}"
            # Disjoint version parity keeps update/remove pairs from tying.
            if rng.random() < 0.2:
                m = rem(f, seqs[f], eid, rng.randint(1, 30) * 2 + 1)
            else:
                ver = rng.randint(1, 30) * 2
                m = upd(f, seqs[f], eid, ver, x=float(ver))
            apply_remote(feds[f], m)  # local apply first
            for dst, fwd in hub.route(m).deliveries:
                net.send(dst, fwd)
        for dst, m in net.deliver_all():
            apply_remote(feds[dst], m)
        return {f: snapshot_hash(db) for f, db in feds.items()} | \
            {"hub": snapshot_hash(hub.db)}

    def test_replicas_converge_under_chaos(self):
        start = time.monotonic()
        for seed in range(20):
            hashes = self.run_session(seed)
            assert len(set(hashes.values())) == 1, f"seed {seed}: {hashes}"
        assert time.monotonic() - start < 10.0
