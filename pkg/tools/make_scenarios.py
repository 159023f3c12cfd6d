"""Regenerate the shipped scenario files in scenarios/.

Run from the repository root:  python3 tools/make_scenarios.py
"""

import json
import math
from pathlib import Path

OUT = Path(__file__).resolve().parents[1] / "scenarios"


def ent(eid, cls, x, y, z=0.0, heading=0.0, last_update=0.0, version=1, owner="script"):
    return {"id": eid, "class": cls, "position": [x, y, z], "heading": heading,
            "last_update": last_update, "version": version, "owner": owner}


def convoy_corridor():
    """Dense-waypoint convoy route through open terrain (map-filter showcase)."""
    route = [[0.0, 0.0], [200.0, 0.0], [400.0, 150.0], [600.0, 150.0]]
    entities = []
    # Waypoints every ~55 m along the route legs, all exactly on the route.
    k = 0
    for (x0, y0), (x1, y1) in zip(route, route[1:]):
        steps = 4
        for s in range(steps):
            t = s / steps
            entities.append(ent(f"wp{k:02d}", "waypoint",
                                round(x0 + t * (x1 - x0), 6),
                                round(y0 + t * (y1 - y0), 6)))
            k += 1
    entities.append(ent(f"wp{k:02d}", "waypoint", 600.0, 150.0))
    # Friendly convoy vehicles near the route.
    for i in range(6):
        entities.append(ent(f"veh{i}", "vehicle", 40.0 + 90.0 * i, 12.0 - 4.0 * i,
                            heading=90.0))
    for i in range(4):
        entities.append(ent(f"inf{i}", "friendly", 120.0 + 100.0 * i, -20.0))
    # Hostiles: a few near the corridor, many far outside it (to be culled).
    entities.append(ent("hos-near-0", "hostile", 300.0, 120.0))
    entities.append(ent("hos-near-1", "hostile", 500.0, 100.0))
    for i in range(8):
        a = i * math.pi / 4
        entities.append(ent(f"hos-far-{i}", "hostile",
                            round(300.0 + 2500.0 * math.cos(a), 6),
                            round(75.0 + 2500.0 * math.sin(a), 6)))
    # Vital threats are shown wherever they are.
    entities.append(ent("ied-0", "IED", 420.0, 160.0))
    entities.append(ent("ep-0", "enemy-position", 3000.0, -3000.0))
    return {
        "name": "convoy-corridor",
        "seed": 1,
        "entities": entities,
        "zone": {"kind": "corridor", "route": route, "half_width": 60.0},
        "user": {"position": [300.0, 75.0, 1.8], "heading": 45.0, "pitch": -70.0},
        "foci": {"weapon_range": 50.0, "awareness_range": 400.0},
        "metaphor": "ground-grid",
        "events": [
            {"t": 10.0, "kind": "entity",
             "entity": ent("hos-near-2", "hostile", 350.0, 60.0, version=1, owner="sim")},
            {"t": 20.0, "kind": "focus", "foci": {"awareness_range": 250.0}},
            {"t": 30.0, "kind": "remove", "id": "hos-near-0", "version": 2,
             "owner": "sim"},
        ],
    }


def urban_occlusion():
    """Street block with building boxes between the user and hostiles."""
    entities = [
        ent("u-friend", "friendly", 5.0, 5.0),
        ent("h-behind-1", "hostile", 120.0, 0.0),
        ent("h-behind-2", "hostile", 0.0, 140.0),
        ent("h-open", "hostile", -60.0, -60.0),
        ent("ied-alley", "IED", 80.0, 40.0),
        ent("veh-street", "vehicle", 40.0, -30.0, heading=180.0),
    ]
    occluders = [
        {"id": "bldg-a", "kind": "box", "min": [30.0, -20.0, 0.0], "max": [60.0, 20.0, 12.0]},
        {"id": "bldg-b", "kind": "box", "min": [70.0, -15.0, 0.0], "max": [100.0, 25.0, 9.0]},
        {"id": "wall-n", "kind": "wall", "p0": [-40.0, 60.0], "p1": [60.0, 60.0], "height": 6.0},
    ]
    return {
        "name": "urban-occlusion",
        "seed": 2,
        "entities": entities,
        "occluders": occluders,
        "zone": {"kind": "polygon",
                 "vertices": [[-200.0, -200.0], [250.0, -200.0], [250.0, 250.0],
                              [-200.0, 250.0]]},
        "user": {"position": [0.0, 0.0, 1.8], "heading": 90.0, "pitch": 0.0},
        "foci": {"weapon_range": 80.0, "awareness_range": 300.0},
        "metaphor": "tunnel",
        "events": [
            {"t": 5.0, "kind": "entity",
             "entity": ent("h-behind-1", "hostile", 110.0, 5.0, version=2, owner="sim")},
            {"t": 12.0, "kind": "pose", "position": [20.0, 0.0, 1.8]},
        ],
    }


def camera_overwatch():
    """Fixed surveillance camera projecting onto a wall and a ground patch."""
    wall = {"id": "facade", "corners": [[-10.0, 0.0, 0.0], [10.0, 0.0, 0.0],
                                        [10.0, 0.0, 8.0], [-10.0, 0.0, 8.0]]}
    return {
        "name": "camera-overwatch",
        "seed": 3,
        "entities": [
            ent("watch-1", "hostile", 0.0, 20.0),
            ent("watch-2", "vehicle", -15.0, 35.0, heading=270.0),
            ent("ied-gate", "IED", 8.0, 10.0),
        ],
        "zone": {"kind": "polygon",
                 "vertices": [[-100.0, -100.0], [100.0, -100.0], [100.0, 100.0],
                              [-100.0, 100.0]]},
        "user": {"position": [0.0, -20.0, 1.8], "heading": 0.0, "pitch": 0.0},
        "foci": {"weapon_range": 40.0, "awareness_range": 150.0},
        "metaphor": "edge-map",
        "occluders": [
            {"id": "gatehouse", "kind": "box", "min": [4.0, 4.0, 0.0],
             "max": [12.0, 14.0, 5.0]},
        ],
        "cameras": [
            {"id": "cam-north", "position": [0.0, -50.0, 10.0], "look_at": [0.0, 0.0, 4.0],
             "image_size": [640, 480], "base_fov_h": 60.0, "zoom": 1.0,
             "walls": [wall], "ground_aoi": [-40.0, -40.0, 40.0, 40.0], "cell": 20.0},
            {"id": "cam-zoom", "position": [30.0, -60.0, 12.0], "look_at": [0.0, 0.0, 4.0],
             "image_size": [640, 480], "base_fov_h": 60.0, "zoom": 2.0,
             "walls": [wall]},
        ],
        "events": [
            {"t": 4.0, "kind": "entity",
             "entity": ent("watch-1", "hostile", 5.0, 18.0, version=2, owner="sim")},
        ],
    }


def amplified_hazards():
    """IED impact zones doubled by nearby fuel infrastructure."""
    return {
        "name": "amplified-hazards",
        "seed": 4,
        "entities": [
            ent("fuel-1", "gas-station", 100.0, 0.0),
            ent("ied-near-fuel", "IED", 130.0, 0.0),
            ent("h-near-fuel", "hostile", 140.0, 10.0),
            ent("h-lone", "hostile", -300.0, 0.0),
            ent("veh-old", "vehicle", 50.0, 50.0, last_update=0.0),
            ent("veh-fresh", "vehicle", 60.0, -40.0, last_update=500.0),
        ],
        "zone": {"kind": "polygon",
                 "vertices": [[-50.0, -120.0], [250.0, -120.0], [250.0, 120.0],
                              [-50.0, 120.0]]},
        "user": {"position": [0.0, 0.0, 1.8], "heading": 0.0, "pitch": 0.0},
        "foci": {"weapon_range": 30.0, "awareness_range": 120.0,
                 "time_window": 300.0},
        "amplification": {"factor": 2.0, "distance": 50.0},
        "metaphor": "opacity",
        "events": [
            {"t": 600.0, "kind": "entity",
             "entity": ent("veh-old", "vehicle", 52.0, 50.0, last_update=600.0,
                           version=2, owner="sim")},
        ],
    }


def patrol_timeline():
    """Foot patrol whose zone, pose, and foci all change mid-run."""
    return {
        "name": "patrol-timeline",
        "seed": 5,
        "entities": [
            ent("p-lead", "friendly", 0.0, 0.0, heading=0.0),
            ent("p-rear", "friendly", 0.0, -15.0, heading=0.0),
            ent("h-north", "hostile", 0.0, 200.0),
            ent("h-east", "hostile", 220.0, 0.0),
            ent("ied-ditch", "IED", -50.0, 90.0),
            ent("veh-parked", "vehicle", 30.0, 60.0),
        ],
        "zone": {"kind": "corridor", "route": [[0.0, -50.0], [0.0, 250.0]],
                 "half_width": 80.0},
        "user": {"position": [0.0, -10.0, 1.8], "heading": 0.0, "pitch": -75.0},
        "foci": {"weapon_range": 60.0, "awareness_range": 180.0},
        "metaphor": "stipple",
        "occluders": [
            {"id": "berm", "kind": "wall", "p0": [-30.0, 120.0], "p1": [40.0, 120.0],
             "height": 3.0},
        ],
        "events": [
            {"t": 15.0, "kind": "pose", "position": [0.0, 60.0, 1.8]},
            {"t": 30.0, "kind": "zone",
             "zone": {"kind": "corridor", "route": [[0.0, 0.0], [150.0, 100.0]],
                      "half_width": 70.0}},
            {"t": 30.0, "kind": "focus", "foci": {"weapon_range": 40.0,
                                                  "awareness_range": 220.0}},
            {"t": 45.0, "kind": "remove", "id": "veh-parked", "version": 2,
             "owner": "sim"},
        ],
    }


def main():
    OUT.mkdir(exist_ok=True)
    for build in (convoy_corridor, urban_occlusion, camera_overwatch,
                  amplified_hazards, patrol_timeline):
        doc = build()
        path = OUT / f"{doc['name']}.json"
        path.write_text(json.dumps(doc, indent=2) + "\n", encoding="utf-8")
        print("wrote", path)


if __name__ == "__main__":
    main()
