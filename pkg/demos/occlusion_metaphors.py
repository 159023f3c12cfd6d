"""Render directives for a hostile hidden behind two buildings.

One eye/target ray, seven drawing metaphors.  The analysis step counts the
occluding layers and assigns a depth zone; each metaphor then turns that into
its own line-drawing parameters.

Run:  python3 demos/occlusion_metaphors.py
"""

import json

from sa_engine.geo import AABB3, Point3
from sa_engine.occlusion import (
    METAPHORS,
    OcclusionConfig,
    Occluder,
    analyze_occlusion,
    make_directive,
)

EYE = Point3(0.0, 0.0, 1.8)
TARGET = Point3(95.0, 0.0, 1.8)

OCCLUDERS = [
    Occluder(id="front-building", kind="box",
             box=AABB3((20.0, -15.0, 0.0), (35.0, 15.0, 10.0))),
    Occluder(id="back-building", kind="box",
             box=AABB3((55.0, -20.0, 0.0), (75.0, 10.0, 8.0))),
    Occluder(id="side-wall", kind="wall", wall_p0=(40.0, 30.0), wall_p1=(40.0, 80.0),
             wall_height=4.0),  # off to the side; never crossed
]


def main():
    cfg = OcclusionConfig()
    info = analyze_occlusion(EYE, TARGET, OCCLUDERS, cfg, "hostile-1")
    print(f"target at {info.distance:.1f} m, {info.layers} occluding layers, "
          f"depth zone {info.zone} of {cfg.zone_count}")
    print("(the side wall is not between eye and target, so it adds no layer)\n")

    for metaphor in METAPHORS:
        d = make_directive(metaphor, info, cfg, eye=EYE, target=TARGET,
                           occluders=OCCLUDERS)
        print(f"{metaphor:12s} -> {json.dumps(d.parameters, sort_keys=True)[:110]}")

    print("\nReading the output:")
    print(" - opacity picks the alpha for zone", info.zone,
          "from the five-step table", cfg.opacity_table)
    print(" - ground-grid rings start at exactly", cfg.grid_first_ring,
          "m and step every", cfg.grid_spacing, "m")
    print(" - tunnel draws one square per layer, shrinking with distance")
    print(" - every directive keeps line_drawing=True: overlays are outlines,")
    print("   never filled surfaces")


if __name__ == "__main__":
    main()
