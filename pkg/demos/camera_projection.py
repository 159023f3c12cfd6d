"""Project a surveillance camera's image onto a wall and the ground.

A fixed camera looks at a building facade.  We compute the homography that
maps the camera image onto the wall rectangle, check it reproduces the
corner projections, then tile a ground patch into cells and keep the ones
the camera actually sees.

Run:  python3 demos/camera_projection.py
"""

import numpy as np

from sa_engine.geo import Point3
from sa_engine.projection import (
    CameraPose,
    WallRect,
    grid_ground,
    look_at_rotation,
    place_on_ground,
    project_point,
    wall_frustum_homography,
    zoom_to_fov,
)


def main():
    print("zoom narrows the frustum: 60 deg base ->",
          " ".join(f"x{z}:{zoom_to_fov(z, 60.0):.2f}deg" for z in (1, 2, 4, 8)), "\n")

    pos = Point3(0.0, -50.0, 10.0)
    cam = CameraPose(position=pos,
                     rotation=look_at_rotation(pos, Point3(0.0, 0.0, 4.0)),
                     image_size=(640, 480), base_fov_h=60.0, zoom=2.0)

    wall = WallRect(id="facade", corners=(
        Point3(-10, 0, 0), Point3(10, 0, 0), Point3(10, 0, 8), Point3(-10, 0, 8)))

    placement = wall_frustum_homography(cam, wall, source="cam-north")
    H = np.array(placement.homography)
    print("wall homography (wall (s,t) in [0,1]^2 -> image pixels):")
    print(np.array_str(H, precision=4, suppress_small=True))

    print("\ncorner check (homography vs direct pinhole projection):")
    for (s, t), corner in zip(((0, 0), (1, 0), (1, 1), (0, 1)), wall.corners):
        v = H @ np.array([s, t, 1.0])
        via_h = (v[0] / v[2], v[1] / v[2])
        direct, _ = project_point(cam, corner)
        err = np.hypot(via_h[0] - direct[0], via_h[1] - direct[1])
        print(f"  (s,t)=({s},{t}) -> ({via_h[0]:7.2f},{via_h[1]:7.2f}) px, "
              f"error {err:.2e}")

    cells = grid_ground((-40.0, -40.0, 40.0, 40.0), 20.0)
    visible = place_on_ground(cam, cells, source="cam-north")
    print(f"\nground patch: {len(cells)} cells tiled, {len(visible)} visible "
          f"from the camera")
    for p in visible[:4]:
        quad = ", ".join(f"({q.x:.0f},{q.y:.0f})" for q in p.quad)
        print(f"  {p.target}: corners {quad}")
    print("  ... cells behind the camera or outside the frustum are skipped")


if __name__ == "__main__":
    main()
