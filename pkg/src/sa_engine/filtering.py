"""Operation-zone / focus / nimbus information filter.

Each entity gets an impact zone (its nimbus): a sphere sized from its class,
amplified when a hazard sits near an amplifier-class object, projected to a
ground disc.  The cull keeps an entity when its nimbus meets the operation
zone AND (the entity sits inside one of the user's foci OR its nimbus meets
the awareness focus).  A rule-based pass forces vital classes to Show before
any spatial test, and an optional time window hides stale non-vital entries.

The filter itself is a pure function of its snapshot inputs; the trigger
coalescer below is the only stateful piece.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Dict, List, Optional, Sequence

from .entities import Entity, EntityClass, EntityDatabase
from .geo import (
    Disc2,
    Point3,
    Polygon2,
    Polyline2,
    disc_intersects_polygon,
    distance_point_polyline,
)


@dataclass(frozen=True)
class OperationZone:
    """Mission-relevant ground region: a polygon or a route corridor."""

    kind: str  # "polygon" | "corridor"
    polygon: Optional[Polygon2] = None
    route: Optional[Polyline2] = None
    half_width: float = 0.0

    def __post_init__(self):
        if self.kind == "polygon":
            if self.polygon is None or self.route is not None:
                raise ValueError("polygon zone requires exactly the polygon variant")
        elif self.kind == "corridor":
            if self.route is None or self.polygon is not None:
                raise ValueError("corridor zone requires exactly the route variant")
            if self.half_width <= 0:
                raise ValueError("corridor half_width must be > 0")
        else:
            raise ValueError(f"unknown zone kind {self.kind!r}")


@dataclass(frozen=True)
class FocusSet:
    """Per-user foci: weapon range, adjustable awareness range, optional time window."""

    user_position: Point3
    weapon_range: float
    awareness_range: float
    time_window: Optional[float] = None

    def __post_init__(self):
        if self.weapon_range < 0 or self.awareness_range < 0:
            raise ValueError("focus ranges must be >= 0")
        if self.time_window is not None and self.time_window <= 0:
            raise ValueError("time_window must be > 0 when present")


@dataclass(frozen=True)
class ImpactZone:
    entity_id: str
    sphere_center: Point3
    radius: float
    ground_disc: Disc2

    def __post_init__(self):
        if self.radius < 0:
            raise ValueError("impact radius must be >= 0")


class Visibility(str, Enum):
    TO_BE_DETERMINED = "to-be-determined"
    SHOW = "show"
    HIDE = "hide"


@dataclass(frozen=True)
class VisibilityState:
    state: Visibility
    reason: str  # vital-rule | zone-pass | zone-fail | temporal-fail | default-hide


@dataclass(frozen=True)
class FilterDecisionSet:
    decisions: Dict[str, VisibilityState]
    input_revision: int
    focus_snapshot: FocusSet
    zone_snapshot: OperationZone

    def show_ids(self) -> List[str]:
        return sorted(i for i, d in self.decisions.items() if d.state is Visibility.SHOW)


@dataclass(frozen=True)
class AmplificationConfig:
    """Nimbus amplification: radius scales by factor when an amplifier-class
    entity lies within the trigger distance (measured on the ground plane)."""

    factor: float = 2.0
    distance: float = 50.0


def _dist2d(a: Point3, b: Point3) -> float:
    return math.hypot(a.x - b.x, a.y - b.y)


def compute_impact_zone(
    e: Entity,
    table: Dict[str, EntityClass],
    neighbors: Sequence[Entity] = (),
    params: AmplificationConfig = AmplificationConfig(),
) -> ImpactZone:
    """Nimbus of an entity: class base radius, amplified near amplifier objects."""
    radius = table[e.class_name].base_impact_radius
    for n in neighbors:
        if n.id == e.id:
            continue
        ncls = table.get(n.class_name)
        if ncls is not None and ncls.amplifier and _dist2d(e.position, n.position) <= params.distance:
            radius *= params.factor
            break
    return ImpactZone(
        entity_id=e.id,
        sphere_center=e.position,
        radius=radius,
        ground_disc=Disc2((e.position.x, e.position.y), radius),
    )


def zone_pass(iz: ImpactZone, e: Entity, zone: OperationZone, foci: FocusSet) -> bool:
    """Spatial cull predicate: A and (B or C).

    A: the nimbus disc intersects the operation zone.
    B: the entity position lies within the weapon or awareness focus.
    C: the nimbus disc intersects the awareness focus.
    """
    if zone.kind == "polygon":
        a = disc_intersects_polygon(iz.ground_disc, zone.polygon)
    else:
        a = distance_point_polyline(iz.ground_disc.center, zone.route) <= zone.half_width + iz.radius
    if not a:
        return False
    d_user = _dist2d(e.position, foci.user_position)
    b = d_user <= foci.weapon_range or d_user <= foci.awareness_range
    c = d_user <= foci.awareness_range + iz.radius
    return b or c


def run_filter(
    db: EntityDatabase,
    zone: OperationZone,
    foci: FocusSet,
    now: float,
    amplification: AmplificationConfig = AmplificationConfig(),
) -> FilterDecisionSet:
    """Drive every entity through to-be-determined -> show/hide.

    Pipeline order: vital rule first (never overridden), then the temporal
    focus, then the zone/focus cull, then a default hide for anything left.
    """
    snapshot = db.snapshot()
    # Only amplifier-class entities can change another entity's nimbus.
    amplifiers = [e for e in snapshot if db.class_table[e.class_name].amplifier]
    decisions: Dict[str, VisibilityState] = {
        e.id: VisibilityState(Visibility.TO_BE_DETERMINED, "default-hide") for e in snapshot
    }

    for e in snapshot:
        if db.class_table[e.class_name].vital:
            decisions[e.id] = VisibilityState(Visibility.SHOW, "vital-rule")

    for e in snapshot:
        if decisions[e.id].state is not Visibility.TO_BE_DETERMINED:
            continue
        if foci.time_window is not None and now - e.last_update > foci.time_window:
            decisions[e.id] = VisibilityState(Visibility.HIDE, "temporal-fail")
            continue
        iz = compute_impact_zone(e, db.class_table, amplifiers, amplification)
        if zone_pass(iz, e, zone, foci):
            decisions[e.id] = VisibilityState(Visibility.SHOW, "zone-pass")
        else:
            decisions[e.id] = VisibilityState(Visibility.HIDE, "zone-fail")

    for eid, d in decisions.items():
        if d.state is Visibility.TO_BE_DETERMINED:
            decisions[eid] = VisibilityState(Visibility.HIDE, "default-hide")

    return FilterDecisionSet(
        decisions=decisions,
        input_revision=db.revision,
        focus_snapshot=foci,
        zone_snapshot=zone,
    )


def decision_set_to_record(ds: FilterDecisionSet) -> dict:
    """Stable serializable form; entity ids in ascending order."""
    return {
        "input_revision": ds.input_revision,
        "decisions": {
            eid: {"state": ds.decisions[eid].state.value, "reason": ds.decisions[eid].reason}
            for eid in sorted(ds.decisions)
        },
    }


class FilterScheduler:
    """Coalesces pose/focus/zone/db events into at most one pending recomputation.

    Callers notify on every event; run_pending executes a single filter pass
    against the latest inputs and publishes it with the database revision it
    saw.  A burst of events between runs costs one recomputation.
    """

    def __init__(self, db: EntityDatabase, zone: OperationZone, foci: FocusSet,
                 amplification: AmplificationConfig = AmplificationConfig()):
        self.db = db
        self.zone = zone
        self.foci = foci
        self.amplification = amplification
        self.now = 0.0
        self._pending = False
        self.runs = 0
        self.last_decisions: Optional[FilterDecisionSet] = None

    def notify_pose(self, foci: FocusSet):
        self.foci = foci
        self._pending = True

    def notify_focus(self, foci: FocusSet):
        self.foci = foci
        self._pending = True

    def notify_zone(self, zone: OperationZone):
        self.zone = zone
        self._pending = True

    def notify_db_mutation(self):
        self._pending = True

    def set_clock(self, now: float):
        self.now = now

    def run_pending(self) -> Optional[FilterDecisionSet]:
        if not self._pending:
            return None
        self._pending = False
        self.runs += 1
        self.last_decisions = run_filter(self.db, self.zone, self.foci, self.now,
                                         self.amplification)
        return self.last_decisions
