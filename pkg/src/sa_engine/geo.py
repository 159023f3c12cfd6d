"""Planar and 3D geometric primitives with closed-set intersection predicates.

Coordinates are meters in a local East-North-Up frame; the ground plane is
z = 0.  All containment and intersection tests are closed: boundary points
count as inside.  Predicates use plain double arithmetic with no epsilon so
that results are deterministic and replayable.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence, Tuple

Vec2 = Tuple[float, float]


class GeometryError(ValueError):
    """Raised when a geometric type's invariants are violated at construction."""


@dataclass(frozen=True)
class Point3:
    """A point in the local ENU frame (meters)."""

    x: float
    y: float
    z: float

    def __post_init__(self):
        if not all(math.isfinite(v) for v in (self.x, self.y, self.z)):
            raise GeometryError(f"non-finite coordinate in {self!r}")

    @property
    def xy(self) -> Vec2:
        return (self.x, self.y)


@dataclass(frozen=True)
class Disc2:
    """A closed disc on the ground plane."""

    center: Vec2
    radius: float

    def __post_init__(self):
        if self.radius < 0:
            raise GeometryError(f"negative disc radius {self.radius}")


def _cross(o: Vec2, a: Vec2, b: Vec2) -> float:
    return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])


def _on_segment(p: Vec2, a: Vec2, b: Vec2) -> bool:
    """Exact test: p lies on the closed segment ab."""
    if _cross(a, b, p) != 0.0:
        return False
    return (min(a[0], b[0]) <= p[0] <= max(a[0], b[0])
            and min(a[1], b[1]) <= p[1] <= max(a[1], b[1]))


def _segments_cross(a: Vec2, b: Vec2, c: Vec2, d: Vec2) -> bool:
    """Closed-segment intersection test, collinear overlaps included."""
    d1 = _cross(c, d, a)
    d2 = _cross(c, d, b)
    d3 = _cross(a, b, c)
    d4 = _cross(a, b, d)
    if ((d1 > 0) != (d2 > 0)) and ((d3 > 0) != (d4 > 0)) and d1 != 0 and d2 != 0 and d3 != 0 and d4 != 0:
        return True
    return (_on_segment(a, c, d) or _on_segment(b, c, d)
            or _on_segment(c, a, b) or _on_segment(d, a, b))


@dataclass(frozen=True)
class Polygon2:
    """A simple polygon with counter-clockwise vertex order.

    The constructor rejects polygons with fewer than 3 vertices, zero area
    (all vertices collinear), clockwise winding, repeated consecutive
    vertices, or self-intersecting boundaries.
    """

    vertices: Tuple[Vec2, ...]

    def __init__(self, vertices: Sequence[Vec2]):
        verts = tuple((float(x), float(y)) for x, y in vertices)
        if len(verts) < 3:
            raise GeometryError("polygon needs at least 3 vertices")
        n = len(verts)
        for i in range(n):
            if verts[i] == verts[(i + 1) % n]:
                raise GeometryError("repeated consecutive polygon vertices")
        area2 = sum(verts[i][0] * verts[(i + 1) % n][1]
                    - verts[(i + 1) % n][0] * verts[i][1] for i in range(n))
        if area2 == 0.0:
            raise GeometryError("degenerate polygon (zero area)")
        if area2 < 0.0:
            raise GeometryError("polygon vertices must be counter-clockwise")
        # Simplicity: no two non-adjacent edges may intersect.
        edges = [(verts[i], verts[(i + 1) % n]) for i in range(n)]
        for i in range(n):
            for j in range(i + 1, n):
                if j == i or (j + 1) % n == i or (i + 1) % n == j:
                    continue
                if _segments_cross(*edges[i], *edges[j]):
                    raise GeometryError("self-intersecting polygon")
        object.__setattr__(self, "vertices", verts)


@dataclass(frozen=True)
class Polyline2:
    """An open polyline of at least two distinct consecutive vertices."""

    vertices: Tuple[Vec2, ...]

    def __init__(self, vertices: Sequence[Vec2]):
        verts = tuple((float(x), float(y)) for x, y in vertices)
        if len(verts) < 2:
            raise GeometryError("polyline needs at least 2 vertices")
        for a, b in zip(verts, verts[1:]):
            if a == b:
                raise GeometryError("repeated consecutive polyline vertices")
        object.__setattr__(self, "vertices", verts)


@dataclass(frozen=True)
class AABB3:
    """Axis-aligned box in 3D, closed on all faces."""

    min_corner: Tuple[float, float, float]
    max_corner: Tuple[float, float, float]

    def __post_init__(self):
        if any(lo > hi for lo, hi in zip(self.min_corner, self.max_corner)):
            raise GeometryError("box min exceeds max")


def point_in_polygon(p: Vec2, poly: Polygon2) -> bool:
    """Closed containment: true for interior points and boundary points."""
    verts = poly.vertices
    n = len(verts)
    for i in range(n):
        if _on_segment(p, verts[i], verts[(i + 1) % n]):
            return True
    # Crossing test; boundary already handled so half-open edge rule is safe.
    inside = False
    px, py = p
    x0, y0 = verts[-1]
    for x1, y1 in verts:
        if (y0 > py) != (y1 > py):
            xi = x0 + (py - y0) * (x1 - x0) / (y1 - y0)
            if px < xi:
                inside = not inside
        x0, y0 = x1, y1
    return inside


def distance_point_segment(p: Vec2, a: Vec2, b: Vec2) -> float:
    # Canonical endpoint order makes the result exactly symmetric in (a, b).
    if b < a:
        a, b = b, a
    ax, ay = a
    dx, dy = b[0] - ax, b[1] - ay
    L2 = dx * dx + dy * dy
    if L2 == 0.0:
        return math.hypot(p[0] - ax, p[1] - ay)
    t = ((p[0] - ax) * dx + (p[1] - ay) * dy) / L2
    t = max(0.0, min(1.0, t))
    return math.hypot(p[0] - (ax + t * dx), p[1] - (ay + t * dy))


def distance_point_polyline(p: Vec2, line: Polyline2) -> float:
    """Minimum Euclidean distance from p to any segment of the polyline."""
    verts = line.vertices
    return min(distance_point_segment(p, verts[i], verts[i + 1])
               for i in range(len(verts) - 1))


def disc_intersects_polygon(d: Disc2, poly: Polygon2) -> bool:
    """True iff the closed disc and the closed polygon region share a point.

    Holds exactly when the disc center is inside the polygon or its distance
    to the nearest edge is at most the radius.
    """
    if point_in_polygon(d.center, poly):
        return True
    verts = poly.vertices
    n = len(verts)
    edge_dist = min(distance_point_segment(d.center, verts[i], verts[(i + 1) % n])
                    for i in range(n))
    return edge_dist <= d.radius


def _segment_aabb_interval(a: Point3, b: Point3, box: AABB3):
    """Parameter interval [t0, t1] within [0, 1] where a+t(b-a) is in the box.

    Returns None when the segment misses the box (slab test).
    """
    p = (a.x, a.y, a.z)
    d = (b.x - a.x, b.y - a.y, b.z - a.z)
    t0, t1 = 0.0, 1.0
    for i in range(3):
        lo, hi = box.min_corner[i], box.max_corner[i]
        if d[i] == 0.0:
            if p[i] < lo or p[i] > hi:
                return None
        else:
            ta = (lo - p[i]) / d[i]
            tb = (hi - p[i]) / d[i]
            if ta > tb:
                ta, tb = tb, ta
            t0 = max(t0, ta)
            t1 = min(t1, tb)
            if t0 > t1:
                return None
    return t0, t1


def segment_intersects_aabb3(a: Point3, b: Point3, box: AABB3) -> bool:
    """Closed segment vs closed box intersection (slab test)."""
    return _segment_aabb_interval(a, b, box) is not None
