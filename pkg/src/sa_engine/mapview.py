"""Top-down map view: activation, screen/ground picking, and route editing.

The map is centered on the user and rotated so the user's heading points
screen-up.  Picks land on the ground plane (z = 0).  Route edits produce new
Route values so undo is just keeping the previous value.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from typing import Optional, Tuple

from .entities import EntityDatabase
from .filtering import FilterDecisionSet, FocusSet, OperationZone, run_filter
from .geo import Point3, Polyline2, Vec2

PixelPoint = Tuple[float, float]

# Map mode engages when the user looks down past this pitch (degrees,
# negative = down); the hysteresis band prevents flicker at the boundary.
ACTIVATION_PITCH = -60.0
HYSTERESIS = 5.0


class PickError(ValueError):
    """A screen pick fell outside the viewport or the map is inactive."""


@dataclass(frozen=True)
class MapViewState:
    center: Vec2               # user position on the ground
    heading: float             # degrees clockwise from north; drawn screen-up
    scale: float               # pixels per meter
    viewport: Tuple[int, int]  # width, height in pixels
    active: bool = True

    def __post_init__(self):
        if self.scale <= 0:
            raise ValueError("scale must be > 0")
        if self.viewport[0] <= 0 or self.viewport[1] <= 0:
            raise ValueError("viewport must be positive")


@dataclass(frozen=True)
class Route:
    id: str
    waypoints: Tuple[Point3, ...] = ()
    half_width: float = 50.0

    def __post_init__(self):
        if self.half_width <= 0:
            raise ValueError("half_width must be > 0")
        if any(w.z != 0.0 for w in self.waypoints):
            raise ValueError("route waypoints must lie on the ground (z = 0)")


class MapActivation:
    """Pitch-driven activation with hysteresis.

    Activates when pitch drops to ACTIVATION_PITCH or below; deactivates only
    once pitch rises back past ACTIVATION_PITCH + HYSTERESIS.
    """

    def __init__(self):
        self.active = False

    def update(self, pitch: float) -> bool:
        if not (-90.0 <= pitch <= 90.0):
            raise ValueError(f"pitch {pitch} outside [-90, 90]")
        if self.active:
            if pitch >= ACTIVATION_PITCH + HYSTERESIS:
                self.active = False
        else:
            if pitch <= ACTIVATION_PITCH:
                self.active = True
        return self.active


def set_map_active(pitch: float, state: Optional[MapActivation] = None) -> bool:
    """Stateless threshold check, or a hysteresis step when state is given."""
    if state is not None:
        return state.update(pitch)
    if not (-90.0 <= pitch <= 90.0):
        raise ValueError(f"pitch {pitch} outside [-90, 90]")
    return pitch <= ACTIVATION_PITCH


def world_to_screen(p: Point3, view: MapViewState) -> PixelPoint:
    """Ground point to viewport pixels (origin top-left, +y down)."""
    h = math.radians(view.heading)
    dx = p.x - view.center[0]
    dy = p.y - view.center[1]
    forward = dx * math.sin(h) + dy * math.cos(h)
    right = dx * math.cos(h) - dy * math.sin(h)
    return (view.viewport[0] / 2 + right * view.scale,
            view.viewport[1] / 2 - forward * view.scale)


def screen_to_world(px: PixelPoint, view: MapViewState) -> Point3:
    """Pixel pick to ground point (z = 0); exact inverse of world_to_screen."""
    if not view.active:
        raise PickError("map view is not active")
    if not (0 <= px[0] <= view.viewport[0] and 0 <= px[1] <= view.viewport[1]):
        raise PickError(f"pixel {px} outside viewport {view.viewport}")
    h = math.radians(view.heading)
    right = (px[0] - view.viewport[0] / 2) / view.scale
    forward = (view.viewport[1] / 2 - px[1]) / view.scale
    dx = right * math.cos(h) + forward * math.sin(h)
    dy = -right * math.sin(h) + forward * math.cos(h)
    return Point3(view.center[0] + dx, view.center[1] + dy, 0.0)


def add_waypoint(route: Route, px: PixelPoint, view: MapViewState) -> Route:
    """Append a picked ground waypoint; returns a new Route value."""
    wp = screen_to_world(px, view)
    return replace(route, waypoints=route.waypoints + (wp,))


# Waypoint selection radius for edit operations, in pixels.
SELECT_RADIUS_PX = 10.0


def _nearest_waypoint(route: Route, px: PixelPoint, view: MapViewState) -> Optional[int]:
    best, best_d = None, SELECT_RADIUS_PX
    for i, wp in enumerate(route.waypoints):
        sx, sy = world_to_screen(wp, view)
        d = math.hypot(sx - px[0], sy - px[1])
        if d <= best_d:
            best, best_d = i, d
    return best


def delete_waypoint(route: Route, px: PixelPoint, view: MapViewState) -> Route:
    """Remove the waypoint within the selection radius of the click, if any."""
    idx = _nearest_waypoint(route, px, view)
    if idx is None:
        return route
    return replace(route, waypoints=route.waypoints[:idx] + route.waypoints[idx + 1:])


def move_waypoint(route: Route, index: int, px: PixelPoint, view: MapViewState) -> Route:
    wp = screen_to_world(px, view)
    wps = list(route.waypoints)
    wps[index] = wp
    return replace(route, waypoints=tuple(wps))


def route_to_zone(route: Route) -> OperationZone:
    """A route with at least two waypoints becomes a corridor operation zone."""
    if len(route.waypoints) < 2:
        raise ValueError("route needs at least 2 waypoints to form a corridor")
    line = Polyline2([(w.x, w.y) for w in route.waypoints])
    return OperationZone(kind="corridor", route=line, half_width=route.half_width)


def preview_filter(zone: OperationZone, foci: FocusSet, db: EntityDatabase,
                   now: float = 0.0) -> FilterDecisionSet:
    """Run the full filter pipeline for preview; never mutates session state
    and is never published to other federates."""
    return run_filter(db, zone, foci, now)
