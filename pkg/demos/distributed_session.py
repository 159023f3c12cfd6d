"""Three federates converge over a deliberately hostile transport.

Each federate keeps its own replica of the shared entity database.  Messages
flow through the hub and a simulated network that delays, duplicates, and
reorders (never drops).  Because updates are versioned last-writer-wins,
every replica lands on the same state no matter what the transport did.

Run:  python3 demos/distributed_session.py
"""

import random

from sa_engine.entities import DEFAULT_CLASS_TABLE, EntityDatabase
from sa_engine.hub import ChaosConfig, Hub, SimNetwork, apply_remote, snapshot_hash
from sa_engine.wire import Message


def entity_update(sender, seq, eid, version, x):
    return Message("ENTITY_UPDATE", sender, seq, {
        "id": eid, "class": "vehicle", "position": [x, 0.0, 0.0],
        "version": version, "owner": sender,
    })


def main():
    rng = random.Random(42)
    federates = {f: EntityDatabase(DEFAULT_CLASS_TABLE)
                 for f in ("recon-1", "recon-2", "command")}
    hub = Hub(db=EntityDatabase(DEFAULT_CLASS_TABLE))
    for f in federates:
        hub.join(f, "mobile")

    net = SimNetwork(ChaosConfig(delay_ms=(0.0, 40.0), duplicate_prob=0.3,
                                 reorder_window=5), seed=42)

    seqs = dict.fromkeys(federates, 0)
    sent = 0
    for _ in range(300):
        f = rng.choice(sorted(federates))
        seqs[f] += 1
        eid = f"track-{rng.randint(0, 15):02d}"
        version = rng.randint(1, 20)
        msg = entity_update(f, seqs[f], eid, version, x=float(version))
        apply_remote(federates[f], msg)           # local replica first
        for dst, fwd in hub.route(msg).deliveries:
            net.send(dst, fwd)
            sent += 1

    deliveries = net.deliver_all()
    print(f"{sent} forwards sent, {len(deliveries)} arrivals "
          f"({len(deliveries) - sent} duplicates injected)")
    for dst, msg in deliveries:
        apply_remote(federates[dst], msg)

    print("\nreplica digests at quiescence:")
    for name, db in sorted(federates.items()):
        print(f"  {name:8s} {snapshot_hash(db)[:16]}  ({len(db.snapshot())} tracks)")
    print(f"  {'hub':8s} {snapshot_hash(hub.db)[:16]}")

    digests = {snapshot_hash(db) for db in federates.values()} | {snapshot_hash(hub.db)}
    print("\nconverged:", "yes" if len(digests) == 1 else "NO")

    late = hub.join("late-ui", "ui")
    print(f"\na late joiner receives {late[0].type} then {late[1].type} with "
          f"{len(late[1].payload['entities'])} tracks - no catch-up protocol needed")


if __name__ == "__main__":
    main()
