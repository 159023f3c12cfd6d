"""Shared geo-registered entity database with versioned last-writer-wins updates.

Updates carry a per-entity version and an owner id.  An update is applied
when its version is newer, or equal with a lexicographically greater owner.
This makes applying any multiset of updates order-independent, which is what
lets replicated copies converge regardless of delivery order.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Dict, List, Optional, Tuple

from .geo import Point3


class UnknownClassError(KeyError):
    """An entity referenced a class missing from the class table."""


@dataclass(frozen=True)
class EntityClass:
    name: str
    vital: bool = False
    base_impact_radius: float = 0.0
    amplifier: bool = False
    symbol_code: str = "SUZP-----------"

    def __post_init__(self):
        if self.base_impact_radius < 0:
            raise ValueError(f"negative base_impact_radius for class {self.name!r}")
        if not self.symbol_code:
            raise ValueError(f"empty symbol_code for class {self.name!r}")


@dataclass(frozen=True)
class Entity:
    """A geo-registered object owned by one federate.

    heading is degrees in [0, 360); last_update is scenario-clock seconds.
    version must strictly increase on every attribute change by the owner.
    """

    id: str
    class_name: str
    position: Point3
    heading: float = 0.0
    last_update: float = 0.0
    version: int = 1
    owner: str = "local"

    def __post_init__(self):
        if not (0.0 <= self.heading < 360.0):
            raise ValueError(f"heading {self.heading} outside [0, 360)")


def _wins(version: int, owner: str, cur_version: int, cur_owner: str) -> bool:
    """Last-writer-wins with owner-id lexicographic tie-break."""
    return (version, owner) > (cur_version, cur_owner)


class EntityDatabase:
    """Single-writer entity store; snapshots are pure, consistent reads.

    Removals keep a (version, owner) tombstone so that replayed or reordered
    update/remove pairs resolve identically on every replica.
    """

    def __init__(self, class_table: Dict[str, EntityClass]):
        self.class_table = dict(class_table)
        self.entities: Dict[str, Entity] = {}
        self._tombstones: Dict[str, Tuple[int, str]] = {}
        self.revision = 0

    def upsert_entity(self, e: Entity) -> bool:
        """Store e under LWW rules; returns True when applied."""
        if e.class_name not in self.class_table:
            raise UnknownClassError(e.class_name)
        tomb = self._tombstones.get(e.id)
        if tomb is not None and not _wins(e.version, e.owner, *tomb):
            return False
        cur = self.entities.get(e.id)
        if cur is not None and not _wins(e.version, e.owner, cur.version, cur.owner):
            return False
        self.entities[e.id] = e
        self._tombstones.pop(e.id, None)
        self.revision += 1
        return True

    def remove_entity(self, entity_id: str, version: int, owner: str) -> bool:
        """Tombstone the entity under the same LWW rules; True when applied."""
        tomb = self._tombstones.get(entity_id)
        if tomb is not None and not _wins(version, owner, *tomb):
            return False
        cur = self.entities.get(entity_id)
        if cur is not None and not _wins(version, owner, cur.version, cur.owner):
            return False
        self.entities.pop(entity_id, None)
        self._tombstones[entity_id] = (version, owner)
        self.revision += 1
        return True

    def get(self, entity_id: str) -> Optional[Entity]:
        return self.entities.get(entity_id)

    def snapshot(self) -> List[Entity]:
        """All entities sorted ascending by id; pure read."""
        return [self.entities[k] for k in sorted(self.entities)]


def entity_to_record(e: Entity) -> dict:
    return {
        "id": e.id,
        "class": e.class_name,
        "position": [e.position.x, e.position.y, e.position.z],
        "heading": e.heading,
        "last_update": e.last_update,
        "version": e.version,
        "owner": e.owner,
    }


def entity_from_record(rec: dict) -> Entity:
    x, y, z = rec["position"]
    return Entity(
        id=rec["id"],
        class_name=rec["class"],
        position=Point3(float(x), float(y), float(z)),
        heading=float(rec.get("heading", 0.0)),
        last_update=float(rec.get("last_update", 0.0)),
        version=int(rec.get("version", 1)),
        owner=rec.get("owner", "local"),
    )


def class_to_record(c: EntityClass) -> dict:
    return {
        "name": c.name,
        "vital": c.vital,
        "base_impact_radius": c.base_impact_radius,
        "amplifier": c.amplifier,
        "symbol_code": c.symbol_code,
    }


def class_from_record(rec: dict) -> EntityClass:
    return EntityClass(
        name=rec["name"],
        vital=bool(rec.get("vital", False)),
        base_impact_radius=float(rec.get("base_impact_radius", 0.0)),
        amplifier=bool(rec.get("amplifier", False)),
        symbol_code=rec.get("symbol_code", "SUZP-----------"),
    )


# Class table used when a scenario does not override it; enemy positions and
# IEDs are always-show vital classes.
DEFAULT_CLASS_TABLE: Dict[str, EntityClass] = {
    c.name: c
    for c in [
        EntityClass("friendly", vital=False, base_impact_radius=5.0, symbol_code="SFGPUCI--------"),
        EntityClass("hostile", vital=False, base_impact_radius=25.0, symbol_code="SHGPUCI--------"),
        EntityClass("enemy-position", vital=True, base_impact_radius=100.0, symbol_code="SHGPUCF--------"),
        EntityClass("IED", vital=True, base_impact_radius=50.0, symbol_code="SHGPE-IED------"),
        EntityClass("gas-station", vital=False, base_impact_radius=30.0, amplifier=True, symbol_code="SNGPIRP--------"),
        EntityClass("waypoint", vital=False, base_impact_radius=0.0, symbol_code="GFGPGPW--------"),
        EntityClass("vehicle", vital=False, base_impact_radius=10.0, symbol_code="SNGPEV---------"),
    ]
}
