"""Declarative scenario files and the deterministic headless pipeline.

A scenario fixes the class table, entities, occluders, operation zone, foci,
user pose track, cameras, and a timed event script.  `run` advances the
scenario clock and emits one RunRecord per recomputation: the filter decision
set, occlusion directives for every Show entity, and texture placements for
every camera.  Records are newline-delimited canonical JSON behind a header
line that embeds the scenario, so a record file replays from itself.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, replace
from pathlib import Path
from typing import Dict, List, Optional, Tuple

from .entities import (
    DEFAULT_CLASS_TABLE,
    Entity,
    EntityClass,
    EntityDatabase,
    class_from_record,
    class_to_record,
    entity_from_record,
)
from .filtering import (
    AmplificationConfig,
    FilterDecisionSet,
    FocusSet,
    OperationZone,
    Visibility,
    decision_set_to_record,
    run_filter,
)
from .geo import AABB3, GeometryError, Point3, Polygon2, Polyline2
from .occlusion import (
    METAPHORS,
    OcclusionConfig,
    OcclusionInfo,
    Occluder,
    analyze_occlusion,
    directive_to_record,
    make_directive,
)
from .projection import (
    CameraPose,
    GroundCell,
    ProjectionError,
    WallRect,
    grid_ground,
    look_at_rotation,
    place_on_ground,
    wall_frustum_homography,
)
from .wire import canonical_json

RECORD_FORMAT = "sa-run-records"
RECORD_VERSION = 1


@dataclass(frozen=True)
class ValidationIssue:
    path: str   # JSON path into the scenario document
    message: str

    def __str__(self):
        return f"{self.path}: {self.message}"


class ScenarioError(ValueError):
    """Scenario failed validation; carries every issue found, not just the first."""

    def __init__(self, issues: List[ValidationIssue]):
        self.issues = issues
        super().__init__("; ".join(str(i) for i in issues))


@dataclass
class Camera:
    id: str
    pose: CameraPose
    walls: List[WallRect]
    ground_aoi: Optional[Tuple[float, float, float, float]]
    cell: float


@dataclass
class Scenario:
    seed: int
    class_table: Dict[str, EntityClass]
    entities: List[Entity]
    occluders: List[Occluder]
    zone: OperationZone
    foci: FocusSet
    heading: float
    pitch: float
    metaphor: str
    occlusion_config: OcclusionConfig
    amplification: AmplificationConfig
    cameras: List[Camera]
    events: List[dict]
    raw: dict  # original document, embedded into record headers


def _parse_zone(doc: dict, path: str, issues: List[ValidationIssue]) -> Optional[OperationZone]:
    kind = doc.get("kind")
    try:
        if kind == "polygon":
            return OperationZone(kind="polygon",
                                 polygon=Polygon2([tuple(v) for v in doc["vertices"]]))
        if kind == "corridor":
            return OperationZone(kind="corridor",
                                 route=Polyline2([tuple(v) for v in doc["route"]]),
                                 half_width=float(doc.get("half_width", 50.0)))
        issues.append(ValidationIssue(path, f"unknown zone kind {kind!r}"))
    except (GeometryError, ValueError, KeyError, TypeError) as exc:
        issues.append(ValidationIssue(path, str(exc)))
    return None


def _parse_foci(doc: dict, user: dict, path: str, issues: List[ValidationIssue]) -> Optional[FocusSet]:
    try:
        pos = user.get("position", [0.0, 0.0, 0.0])
        return FocusSet(
            user_position=Point3(*[float(v) for v in pos]),
            weapon_range=float(doc.get("weapon_range", 0.0)),
            awareness_range=float(doc.get("awareness_range", 0.0)),
            time_window=float(doc["time_window"]) if doc.get("time_window") is not None else None,
        )
    except (ValueError, TypeError) as exc:
        issues.append(ValidationIssue(path, str(exc)))
        return None


def _parse_occluder(doc: dict, path: str, issues: List[ValidationIssue]) -> Optional[Occluder]:
    try:
        if doc.get("kind") == "box":
            return Occluder(id=doc["id"], kind="box",
                            box=AABB3(tuple(doc["min"]), tuple(doc["max"])))
        if doc.get("kind") == "wall":
            return Occluder(id=doc["id"], kind="wall",
                            wall_p0=tuple(doc["p0"]), wall_p1=tuple(doc["p1"]),
                            wall_height=float(doc["height"]))
        issues.append(ValidationIssue(path, f"unknown occluder kind {doc.get('kind')!r}"))
    except (GeometryError, ValueError, KeyError, TypeError) as exc:
        issues.append(ValidationIssue(path, str(exc)))
    return None


def _parse_camera(doc: dict, path: str, issues: List[ValidationIssue]) -> Optional[Camera]:
    try:
        position = Point3(*[float(v) for v in doc["position"]])
        if "rotation" in doc:
            rotation = tuple(tuple(float(v) for v in row) for row in doc["rotation"])
        else:
            rotation = look_at_rotation(position, Point3(*[float(v) for v in doc["look_at"]]))
        pose = CameraPose(
            position=position,
            rotation=rotation,
            image_size=tuple(int(v) for v in doc.get("image_size", [640, 480])),
            base_fov_h=float(doc.get("base_fov_h", 60.0)),
            zoom=float(doc.get("zoom", 1.0)),
        )
        walls = [WallRect(id=w["id"], corners=tuple(Point3(*[float(v) for v in c])
                                                    for c in w["corners"]))
                 for w in doc.get("walls", [])]
        aoi = tuple(float(v) for v in doc["ground_aoi"]) if "ground_aoi" in doc else None
        return Camera(id=doc["id"], pose=pose, walls=walls, ground_aoi=aoi,
                      cell=float(doc.get("cell", 25.0)))
    except (ProjectionError, GeometryError, ValueError, KeyError, TypeError) as exc:
        issues.append(ValidationIssue(path, str(exc)))
        return None


def parse_scenario(doc: dict) -> Scenario:
    """Validate the whole document; raises ScenarioError listing every issue."""
    issues: List[ValidationIssue] = []

    class_table = dict(DEFAULT_CLASS_TABLE)
    for i, rec in enumerate(doc.get("classes", [])):
        try:
            cls = class_from_record(rec)
            class_table[cls.name] = cls
        except (ValueError, KeyError, TypeError) as exc:
            issues.append(ValidationIssue(f"classes[{i}]", str(exc)))

    entities: List[Entity] = []
    seen_ids = set()
    for i, rec in enumerate(doc.get("entities", [])):
        try:
            e = entity_from_record(rec)
            if e.class_name not in class_table:
                issues.append(ValidationIssue(f"entities[{i}]",
                                              f"unknown class {e.class_name!r}"))
                continue
            if e.id in seen_ids:
                issues.append(ValidationIssue(f"entities[{i}]", f"duplicate id {e.id!r}"))
                continue
            seen_ids.add(e.id)
            entities.append(e)
        except (ValueError, KeyError, TypeError) as exc:
            issues.append(ValidationIssue(f"entities[{i}]", str(exc)))

    occluders = []
    for i, rec in enumerate(doc.get("occluders", [])):
        occ = _parse_occluder(rec, f"occluders[{i}]", issues)
        if occ is not None:
            occluders.append(occ)

    zone = None
    if "zone" in doc:
        zone = _parse_zone(doc["zone"], "zone", issues)
    else:
        issues.append(ValidationIssue("zone", "missing operation zone"))

    user = doc.get("user", {})
    foci = _parse_foci(doc.get("foci", {}), user, "foci", issues)

    metaphor = doc.get("metaphor", "empty")
    if metaphor not in METAPHORS:
        issues.append(ValidationIssue("metaphor", f"unknown metaphor {metaphor!r}"))

    try:
        occ_cfg = OcclusionConfig(**{k: tuple(v) if isinstance(v, list) else v
                                     for k, v in doc.get("occlusion", {}).items()})
    except (TypeError, ValueError) as exc:
        issues.append(ValidationIssue("occlusion", str(exc)))
        occ_cfg = OcclusionConfig()

    try:
        amp = AmplificationConfig(**doc.get("amplification", {}))
    except (TypeError, ValueError) as exc:
        issues.append(ValidationIssue("amplification", str(exc)))
        amp = AmplificationConfig()

    cameras = []
    for i, rec in enumerate(doc.get("cameras", [])):
        cam = _parse_camera(rec, f"cameras[{i}]", issues)
        if cam is not None:
            cameras.append(cam)

    events = doc.get("events", [])
    last_t = None
    for i, ev in enumerate(events):
        t = ev.get("t")
        if not isinstance(t, (int, float)):
            issues.append(ValidationIssue(f"events[{i}]", "missing or non-numeric time 't'"))
            continue
        if last_t is not None and t < last_t:
            issues.append(ValidationIssue(f"events[{i}]",
                                          f"non-monotone timestamp {t} after {last_t}"))
        last_t = t
        kind = ev.get("kind")
        if kind not in ("entity", "remove", "focus", "zone", "pose"):
            issues.append(ValidationIssue(f"events[{i}]", f"unknown event kind {kind!r}"))
        elif kind == "entity":
            cls = ev.get("entity", {}).get("class")
            if cls not in class_table:
                issues.append(ValidationIssue(f"events[{i}].entity",
                                              f"unknown class {cls!r}"))
        elif kind == "zone":
            _parse_zone(ev.get("zone", {}), f"events[{i}].zone", issues)

    if issues:
        raise ScenarioError(issues)

    return Scenario(
        seed=int(doc.get("seed", 0)),
        class_table=class_table,
        entities=entities,
        occluders=occluders,
        zone=zone,
        foci=foci,
        heading=float(user.get("heading", 0.0)),
        pitch=float(user.get("pitch", 0.0)),
        metaphor=metaphor,
        occlusion_config=occ_cfg,
        amplification=amp,
        cameras=cameras,
        events=events,
        raw=doc,
    )


def load_scenario(path) -> Scenario:
    raw = Path(path).read_text(encoding="utf-8")
    try:
        doc = json.loads(raw)
    except json.JSONDecodeError as exc:
        raise ScenarioError([ValidationIssue(f"line {exc.lineno}", exc.msg)]) from exc
    return parse_scenario(doc)


def _directives_for(ds: FilterDecisionSet, db: EntityDatabase, eye: Point3,
                    sc: Scenario) -> List[dict]:
    records = []
    for eid in ds.show_ids():
        target = db.get(eid).position
        if (eye.x, eye.y, eye.z) == (target.x, target.y, target.z):
            info = OcclusionInfo(entity_id=eid, distance=0.0, layers=0, zone=1)
        else:
            info = analyze_occlusion(eye, target, sc.occluders, sc.occlusion_config, eid)
        d = make_directive(sc.metaphor, info, sc.occlusion_config,
                           eye=eye, target=target, occluders=sc.occluders)
        records.append(directive_to_record(d))
    return records


def _placements_for(sc: Scenario, now: float) -> List[dict]:
    records = []
    for cam in sorted(sc.cameras, key=lambda c: c.id):
        for wall in cam.walls:
            try:
                p = wall_frustum_homography(cam.pose, wall, source=cam.id, timestamp=now)
            except ProjectionError:
                continue  # wall not visible from this pose
            records.append(p.to_record())
        if cam.ground_aoi is not None:
            cells = grid_ground(cam.ground_aoi, cam.cell)
            for p in place_on_ground(cam.pose, cells, source=cam.id, timestamp=now):
                records.append(p.to_record())
    return records


class ScenarioSession:
    """Mutable execution state for one scenario run or served session."""

    def __init__(self, sc: Scenario):
        self.scenario = sc
        self.db = EntityDatabase(sc.class_table)
        for e in sc.entities:
            self.db.upsert_entity(e)
        self.zone = sc.zone
        self.foci = sc.foci
        self.now = 0.0

    def apply_event(self, ev: dict):
        kind = ev["kind"]
        if kind == "entity":
            self.db.upsert_entity(entity_from_record(ev["entity"]))
        elif kind == "remove":
            self.db.remove_entity(ev["id"], int(ev["version"]), ev.get("owner", "script"))
        elif kind == "focus":
            f = ev.get("foci", {})
            self.foci = replace(
                self.foci,
                weapon_range=float(f.get("weapon_range", self.foci.weapon_range)),
                awareness_range=float(f.get("awareness_range", self.foci.awareness_range)),
                time_window=(float(f["time_window"]) if f.get("time_window") is not None
                             else self.foci.time_window),
            )
        elif kind == "pose":
            pos = ev.get("position")
            if pos is not None:
                self.foci = replace(self.foci, user_position=Point3(*[float(v) for v in pos]))
        elif kind == "zone":
            issues: List[ValidationIssue] = []
            zone = _parse_zone(ev["zone"], "event.zone", issues)
            if issues:
                raise ScenarioError(issues)
            self.zone = zone

    def record(self) -> dict:
        ds = run_filter(self.db, self.zone, self.foci, self.now,
                        self.scenario.amplification)
        rec = {
            "time": self.now,
            "decisions": decision_set_to_record(ds),
            "directives": _directives_for(ds, self.db, self.foci.user_position, self.scenario),
        }
        if self.scenario.cameras:
            rec["placements"] = _placements_for(self.scenario, self.now)
        return rec


def run(sc: Scenario) -> List[dict]:
    """Execute the event script; one RunRecord per recomputation, t=0 first."""
    session = ScenarioSession(sc)
    records = [session.record()]
    # Events sharing a timestamp coalesce into a single recomputation.
    i = 0
    events = sc.events
    while i < len(events):
        t = events[i]["t"]
        session.now = float(t)
        while i < len(events) and events[i]["t"] == t:
            session.apply_event(events[i])
            i += 1
        records.append(session.record())
    return records


def header_record(sc: Scenario, options: Optional[dict] = None) -> dict:
    return {
        "format": RECORD_FORMAT,
        "version": RECORD_VERSION,
        "scenario": sc.raw,
        "options": options or {},
    }


def write_records(path, sc: Scenario, records: List[dict], options: Optional[dict] = None):
    with open(path, "wb") as fh:
        fh.write(canonical_json(header_record(sc, options)) + b"\n")
        for rec in records:
            fh.write(canonical_json(rec) + b"\n")


@dataclass
class ReplayReport:
    ok: bool
    lines_checked: int
    divergence: Optional[dict] = None  # {"line", "time", "entity"|"field"}

    def to_record(self) -> dict:
        return {"ok": self.ok, "lines_checked": self.lines_checked,
                "divergence": self.divergence}


def _locate_divergence(expected: bytes, actual: bytes) -> dict:
    """Name the first differing entity (or field) between two record lines."""
    try:
        exp, act = json.loads(expected), json.loads(actual)
    except json.JSONDecodeError:
        return {"field": "unparseable"}
    out = {"time": exp.get("time")}
    exp_dec = exp.get("decisions", {}).get("decisions", {})
    act_dec = act.get("decisions", {}).get("decisions", {})
    for eid in sorted(set(exp_dec) | set(act_dec)):
        if exp_dec.get(eid) != act_dec.get(eid):
            out["entity"] = eid
            return out
    for key in sorted(set(exp) | set(act)):
        if exp.get(key) != act.get(key):
            out["field"] = key
            return out
    out["field"] = "serialization"
    return out


def replay(record_path) -> ReplayReport:
    """Re-execute the inputs embedded in a record file and compare outputs
    byte-for-byte; reports the first divergence."""
    lines = Path(record_path).read_bytes().split(b"\n")
    lines = [ln for ln in lines if ln]
    if not lines:
        raise ScenarioError([ValidationIssue("line 1", "empty record file")])
    try:
        header = json.loads(lines[0])
    except json.JSONDecodeError as exc:
        raise ScenarioError([ValidationIssue("line 1", f"corrupt header: {exc.msg}")]) from exc
    if header.get("format") != RECORD_FORMAT:
        raise ScenarioError([ValidationIssue("line 1", "not a run record file")])
    sc = parse_scenario(header["scenario"])
    fresh = [canonical_json(rec) for rec in run(sc)]
    recorded = lines[1:]
    for n, (exp, act) in enumerate(zip(recorded, fresh), start=2):
        if exp != act:
            return ReplayReport(ok=False, lines_checked=n - 1,
                                divergence={"line": n, **_locate_divergence(exp, act)})
    if len(recorded) != len(fresh):
        return ReplayReport(ok=False, lines_checked=min(len(recorded), len(fresh)),
                            divergence={"line": min(len(recorded), len(fresh)) + 2,
                                        "field": "record-count"})
    return ReplayReport(ok=True, lines_checked=len(recorded))


def project(sc: Scenario) -> List[dict]:
    """Texture placements only, for every scenario camera, at t=0."""
    return _placements_for(sc, 0.0)
