"""Look down, draw a route, preview the filter it implies.

The top-down map activates when the user's pitch passes -60 degrees (with a
5 degree hysteresis band so a wobbling head does not flicker it).  Screen
clicks become waypoints; the waypoint chain becomes a corridor operation
zone; the preview shows what the filter would do before committing.

Run:  python3 demos/map_route_editing.py
"""

from sa_engine.entities import DEFAULT_CLASS_TABLE, Entity, EntityDatabase
from sa_engine.filtering import FocusSet
from sa_engine.geo import Point3
from sa_engine.mapview import (
    MapActivation,
    MapViewState,
    Route,
    add_waypoint,
    preview_filter,
    route_to_zone,
    screen_to_world,
)


def main():
    act = MapActivation()
    print("pitch sweep:", end=" ")
    for pitch in (-30, -55, -61, -58, -62, -50):
        print(f"{pitch}:{'map' if act.update(pitch) else '3d'}", end="  ")
    print("\n(the -58 wobble inside the band did not deactivate the map)\n")

    view = MapViewState(center=(0.0, 0.0), heading=30.0, scale=2.0,
                        viewport=(800, 600))
    clicks = [(400, 300), (500, 250), (560, 140), (620, 60)]
    route = Route(id="patrol", half_width=60.0)
    history = [route]
    for px in clicks:
        w = screen_to_world(px, view)
        route = add_waypoint(route, px, view)
        history.append(route)
        print(f"click {px} -> waypoint ({w.x:7.1f}, {w.y:7.1f})  heading-up view")

    print("\nundo twice (routes are values; undo is just the previous value):")
    route = history[-3]
    print("  waypoints now:", len(route.waypoints))
    route = history[-1]

    zone = route_to_zone(route)
    db = EntityDatabase(DEFAULT_CLASS_TABLE)
    db.upsert_entity(Entity(id="h-near-route", class_name="hostile",
                            position=Point3(60.0, 40.0, 0.0)))
    db.upsert_entity(Entity(id="h-off-route", class_name="hostile",
                            position=Point3(-500.0, -500.0, 0.0)))
    foci = FocusSet(user_position=Point3(0, 0, 1.8), weapon_range=50.0,
                    awareness_range=300.0)
    ds = preview_filter(zone, foci, db)
    print("\npreview against the drawn corridor:")
    for eid in sorted(ds.decisions):
        d = ds.decisions[eid]
        print(f"  {eid:14s} {d.state.value:5s} ({d.reason})")


if __name__ == "__main__":
    main()
