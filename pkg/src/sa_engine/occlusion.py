"""Occlusion-metaphor render directives for entities hidden behind structures.

Works against a sparse occluder model (axis-aligned boxes and vertical wall
rectangles).  For each shown entity we count the occluding layers crossed by
the eye-to-entity ray, bin its distance into depth zones, and emit a
renderer-agnostic directive for the selected metaphor.  All directives are
line drawings; filled shapes are never requested.
"""

from __future__ import annotations

import math
from bisect import bisect_right
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple

from .geo import AABB3, GeometryError, Point3, Vec2, _segment_aabb_interval

METAPHORS = ("empty", "opacity", "stipple", "ground-grid", "edge-map", "virtual-wall", "tunnel")


class ConfigError(ValueError):
    """Bad metaphor selection or inconsistent occlusion configuration."""


@dataclass(frozen=True)
class Occluder:
    """A sparse-model occluder: a box, or a vertical wall given by two ground
    points and a height."""

    id: str
    kind: str  # "box" | "wall"
    box: Optional[AABB3] = None
    wall_p0: Optional[Vec2] = None
    wall_p1: Optional[Vec2] = None
    wall_height: float = 0.0

    def __post_init__(self):
        if self.kind == "box":
            if self.box is None:
                raise GeometryError("box occluder needs a box")
            if any(hi <= lo for lo, hi in zip(self.box.min_corner, self.box.max_corner)):
                raise GeometryError(f"occluder {self.id}: box must have positive extent")
        elif self.kind == "wall":
            if self.wall_p0 is None or self.wall_p1 is None:
                raise GeometryError("wall occluder needs two ground points")
            if self.wall_p0 == self.wall_p1:
                raise GeometryError(f"occluder {self.id}: zero-length wall")
            if self.wall_height <= 0:
                raise GeometryError(f"occluder {self.id}: wall height must be > 0")
        else:
            raise GeometryError(f"unknown occluder kind {self.kind!r}")


@dataclass(frozen=True)
class OcclusionInfo:
    entity_id: str
    distance: float
    layers: int
    zone: int


@dataclass(frozen=True)
class RenderDirective:
    entity_id: str
    metaphor: str
    parameters: dict
    line_drawing: bool = True


@dataclass(frozen=True)
class OcclusionConfig:
    """Defaults: five depth zones on 20 m boundaries matching the ground-grid
    ring spacing, with a monotone five-step opacity table."""

    zone_boundaries: Tuple[float, ...] = (20.0, 40.0, 60.0, 80.0)
    opacity_table: Tuple[float, ...] = (1.0, 0.8, 0.6, 0.4, 0.2)
    stipple_patterns: Tuple[str, ...] = ("solid", "dashed", "dotted")
    stipple_period_m: float = 1.0
    grid_first_ring: float = 20.0
    grid_spacing: float = 20.0
    grid_max_distance: float = 100.0
    wall_base_lines: int = 4
    wall_line_increment: int = 2
    tunnel_base_side: float = 2.0
    tunnel_base_distance: float = 20.0

    def __post_init__(self):
        if list(self.zone_boundaries) != sorted(set(self.zone_boundaries)):
            raise ConfigError("zone boundaries must be strictly ascending")
        if len(self.opacity_table) != len(self.zone_boundaries) + 1:
            raise ConfigError("opacity table must have one entry per zone")
        if any(a < b for a, b in zip(self.opacity_table, self.opacity_table[1:])):
            raise ConfigError("opacity table must be non-increasing with zone")

    @property
    def zone_count(self) -> int:
        return len(self.zone_boundaries) + 1


def _wall_crossing(eye: Point3, target: Point3, occ: Occluder) -> Optional[float]:
    """Parameter t in (0, 1) where the open segment crosses the wall rectangle."""
    (x0, y0), (x1, y1) = occ.wall_p0, occ.wall_p1
    # Wall plane normal (in-plane direction rotated 90 degrees).
    nx, ny = y1 - y0, x0 - x1
    d = (target.x - eye.x) * nx + (target.y - eye.y) * ny
    s_eye = (eye.x - x0) * nx + (eye.y - y0) * ny
    if d == 0.0:
        return None  # parallel to the wall plane; grazing contact does not occlude
    t = -s_eye / d
    if not (0.0 < t < 1.0):
        return None
    px = eye.x + t * (target.x - eye.x)
    py = eye.y + t * (target.y - eye.y)
    pz = eye.z + t * (target.z - eye.z)
    if not (0.0 <= pz <= occ.wall_height):
        return None
    # In-plane coordinate along the wall base.
    ux, uy = x1 - x0, y1 - y0
    L2 = ux * ux + uy * uy
    s = ((px - x0) * ux + (py - y0) * uy) / L2
    return t if 0.0 <= s <= 1.0 else None


def _box_crossing(eye: Point3, target: Point3, occ: Occluder) -> Optional[float]:
    """Entry parameter where the open segment crosses the box, else None."""
    interval = _segment_aabb_interval(eye, target, occ.box)
    if interval is None:
        return None
    t0, t1 = interval
    lo, hi = max(t0, 0.0), min(t1, 1.0)
    # Open-segment semantics: touching only at an endpoint does not occlude.
    if lo >= 1.0 or hi <= 0.0 or lo > hi:
        return None
    if lo == hi and (lo <= 0.0 or lo >= 1.0):
        return None
    return lo


def crossing_parameter(eye: Point3, target: Point3, occ: Occluder) -> Optional[float]:
    if occ.kind == "box":
        return _box_crossing(eye, target, occ)
    return _wall_crossing(eye, target, occ)


def count_layers(eye: Point3, target: Point3, occluders: Sequence[Occluder]) -> int:
    """Number of distinct occluders crossed by the open segment eye->target."""
    if (eye.x, eye.y, eye.z) == (target.x, target.y, target.z):
        raise ValueError("eye and target coincide")
    return sum(1 for occ in occluders if crossing_parameter(eye, target, occ) is not None)


def classify_zone(distance: float, boundaries: Sequence[float]) -> int:
    """1-based depth zone; a distance on a boundary belongs to the farther zone."""
    if distance < 0:
        raise ValueError("distance must be >= 0")
    bounds = list(boundaries)
    if bounds != sorted(set(bounds)):
        raise ValueError("boundaries must be strictly ascending")
    return 1 + bisect_right(bounds, distance)


def ground_grid_rings(max_distance: float, first_ring: float, spacing: float) -> List[float]:
    """Concentric ring radii first_ring, first_ring+spacing, ... <= max_distance."""
    if first_ring <= 0 or spacing <= 0:
        raise ValueError("first_ring and spacing must be > 0")
    rings = []
    r = first_ring
    k = 0
    while r <= max_distance:
        rings.append(r)
        k += 1
        r = first_ring + k * spacing
    return rings


def analyze_occlusion(eye: Point3, target: Point3, occluders: Sequence[Occluder],
                      cfg: OcclusionConfig, entity_id: str) -> OcclusionInfo:
    distance = math.dist((eye.x, eye.y, eye.z), (target.x, target.y, target.z))
    return OcclusionInfo(
        entity_id=entity_id,
        distance=distance,
        layers=count_layers(eye, target, occluders),
        zone=classify_zone(distance, cfg.zone_boundaries),
    )


def _crossed(eye: Point3, target: Point3, occluders: Sequence[Occluder]):
    """Occluders crossed by the ray, with entry parameter, nearest first."""
    hits = []
    for occ in occluders:
        t = crossing_parameter(eye, target, occ)
        if t is not None:
            hits.append((t, occ))
    hits.sort(key=lambda h: (h[0], h[1].id))
    return hits


def _occluder_outline(occ: Occluder, toward: Point3) -> List[List[Tuple[float, float, float]]]:
    """Synthetic outline polylines for an occluder, from the sparse model.

    For a wall: its rectangle.  For a box: the rectangle of the vertical face
    nearest the viewer along the x or y axis.
    """
    if occ.kind == "wall":
        (x0, y0), (x1, y1) = occ.wall_p0, occ.wall_p1
        h = occ.wall_height
        return [[(x0, y0, 0.0), (x1, y1, 0.0), (x1, y1, h), (x0, y0, h), (x0, y0, 0.0)]]
    lo, hi = occ.box.min_corner, occ.box.max_corner
    cx, cy = (lo[0] + hi[0]) / 2, (lo[1] + hi[1]) / 2
    dx, dy = toward.x - cx, toward.y - cy
    if abs(dx) >= abs(dy):
        x = hi[0] if dx >= 0 else lo[0]
        face = [(x, lo[1], lo[2]), (x, hi[1], lo[2]), (x, hi[1], hi[2]), (x, lo[1], hi[2]), (x, lo[1], lo[2])]
    else:
        y = hi[1] if dy >= 0 else lo[1]
        face = [(lo[0], y, lo[2]), (hi[0], y, lo[2]), (hi[0], y, hi[2]), (lo[0], y, hi[2]), (lo[0], y, lo[2])]
    return [face]


def make_directive(
    metaphor: str,
    info: OcclusionInfo,
    cfg: OcclusionConfig = OcclusionConfig(),
    eye: Optional[Point3] = None,
    target: Optional[Point3] = None,
    occluders: Sequence[Occluder] = (),
) -> RenderDirective:
    """Build the metaphor-specific parameter record for one entity.

    eye/target/occluders are needed only by the geometry-bearing metaphors
    (edge-map, virtual-wall, tunnel).
    """
    if metaphor not in METAPHORS:
        raise ConfigError(f"unknown occlusion metaphor {metaphor!r}")

    params: dict = {}
    if metaphor == "opacity":
        params = {"alpha": cfg.opacity_table[info.zone - 1]}
    elif metaphor == "stipple":
        idx = min(info.layers, len(cfg.stipple_patterns) - 1)
        params = {"pattern": cfg.stipple_patterns[idx], "period_m": cfg.stipple_period_m}
    elif metaphor == "ground-grid":
        params = {
            "rings": ground_grid_rings(cfg.grid_max_distance, cfg.grid_first_ring, cfg.grid_spacing),
            "drop_line": {"entity_id": info.entity_id, "to_ground": True},
        }
    elif metaphor == "edge-map":
        outlines = []
        for _, occ in _crossed(eye, target, occluders):
            outlines.extend(_occluder_outline(occ, eye))
        params = {"outlines": outlines}
    elif metaphor == "virtual-wall":
        walls = []
        for j, (t, occ) in enumerate(_crossed(eye, target, occluders), start=1):
            walls.append({
                "layer": j,
                "occluder_id": occ.id,
                "line_count": cfg.wall_base_lines + j * cfg.wall_line_increment,
                "outline": _occluder_outline(occ, eye)[0],
            })
        params = {"walls": walls}
    elif metaphor == "tunnel":
        squares = []
        for t, occ in _crossed(eye, target, occluders):
            cx = eye.x + t * (target.x - eye.x)
            cy = eye.y + t * (target.y - eye.y)
            cz = eye.z + t * (target.z - eye.z)
            dist = t * info.distance
            side = cfg.tunnel_base_side * cfg.tunnel_base_distance / max(dist, 1e-9)
            squares.append({"center": (cx, cy, cz), "side": side, "occluder_id": occ.id})
        params = {"squares": squares}

    return RenderDirective(entity_id=info.entity_id, metaphor=metaphor,
                           parameters=params, line_drawing=True)


def directive_to_record(d: RenderDirective) -> dict:
    return {
        "entity_id": d.entity_id,
        "metaphor": d.metaphor,
        "parameters": d.parameters,
        "line_drawing": d.line_drawing,
    }
