/**
 * Local read-only mirror of the session state.
 *
 * The mirror is exactly: last received SNAPSHOT + every update applied since,
 * under the same versioned last-writer-wins rules the replicas use.  The UI
 * never writes to it directly; every mutation goes out as a message and comes
 * back through here.
 */

import type { Message } from "./protocol.js";

export interface EntityRecord {
  id: string;
  class: string;
  position: [number, number, number];
  heading?: number;
  last_update?: number;
  version: number;
  owner: string;
}

export interface Decision {
  state: "show" | "hide";
  reason: string;
}

export interface ZoneState {
  kind: "polygon" | "corridor";
  vertices?: [number, number][];
  route?: [number, number][];
  half_width?: number;
}

function wins(a: { version: number; owner: string },
              b: { version: number; owner: string }): boolean {
  return a.version > b.version || (a.version === b.version && a.owner > b.owner);
}

export class Mirror {
  entities = new Map<string, EntityRecord>();
  tombstones = new Map<string, { version: number; owner: string }>();
  decisions = new Map<string, Decision>();
  zone: ZoneState | null = null;
  route: { waypoints: [number, number][]; half_width: number } | null = null;
  placements: Record<string, unknown>[] = [];

  apply(msg: Message): void {
    switch (msg.type) {
      case "SNAPSHOT": {
        const records = (msg.payload.entities ?? []) as EntityRecord[];
        for (const rec of records) this.upsert(rec);
        const shared = (msg.payload.shared ?? {}) as Record<string, any>;
        if (shared.ZONE_UPDATE) this.zone = shared.ZONE_UPDATE as ZoneState;
        break;
      }
      case "ENTITY_UPDATE":
        this.upsert(msg.payload as unknown as EntityRecord);
        break;
      case "ENTITY_REMOVE": {
        const p = msg.payload as { id: string; version: number; owner: string };
        const cur = this.entities.get(p.id);
        const tomb = this.tombstones.get(p.id);
        if ((cur && !wins(p, cur)) || (tomb && !wins(p, tomb))) return;
        this.entities.delete(p.id);
        this.tombstones.set(p.id, { version: p.version, owner: p.owner });
        break;
      }
      case "DECISIONS": {
        const dec = (msg.payload.decisions ?? {}) as Record<string, Decision>;
        this.decisions = new Map(Object.entries(dec));
        break;
      }
      case "ZONE_UPDATE":
        this.zone = msg.payload as unknown as ZoneState;
        break;
      case "ROUTE_UPDATE": {
        const p = msg.payload as { waypoints: [number, number][]; half_width?: number };
        this.route = { waypoints: p.waypoints ?? [], half_width: p.half_width ?? 50 };
        break;
      }
      default:
        break; // WELCOME, HEARTBEAT, ... carry no mirrored state
    }
  }

  private upsert(rec: EntityRecord): void {
    const cur = this.entities.get(rec.id);
    const tomb = this.tombstones.get(rec.id);
    if ((cur && !wins(rec, cur)) || (tomb && !wins(rec, tomb))) return;
    this.entities.set(rec.id, rec);
    this.tombstones.delete(rec.id);
  }

  shownEntities(): EntityRecord[] {
    return [...this.entities.values()]
      .filter((e) => this.decisions.get(e.id)?.state === "show")
      .sort((a, b) => (a.id < b.id ? -1 : 1));
  }

  showCount(): number {
    let n = 0;
    for (const d of this.decisions.values()) if (d.state === "show") n++;
    return n;
  }
}
