import { describe, expect, it } from "vitest";

import { Mirror } from "../src/mirror.js";
import type { Message } from "../src/protocol.js";

function msg(type: Message["type"], payload: Record<string, unknown>): Message {
  return { type, sender: "hub", seq: 1, payload };
}

function entity(id: string, version: number, owner = "fed-a", x = 0) {
  return { id, class: "vehicle", position: [x, 0, 0], version, owner };
}

describe("Mirror", () => {
  it("equals snapshot plus applied updates", () => {
    const m = new Mirror();
    m.apply(msg("SNAPSHOT", { entities: [entity("e1", 1), entity("e2", 1)] }));
    m.apply(msg("ENTITY_UPDATE", entity("e3", 1)));
    expect([...m.entities.keys()].sort()).toEqual(["e1", "e2", "e3"]);
  });

  it("ignores stale versions (last writer wins)", () => {
    const m = new Mirror();
    m.apply(msg("ENTITY_UPDATE", entity("e1", 5, "fed-b", 50)));
    m.apply(msg("ENTITY_UPDATE", entity("e1", 3, "fed-a", 30)));
    expect(m.entities.get("e1")!.position[0]).toBe(50);
  });

  it("breaks version ties by owner id", () => {
    const m = new Mirror();
    m.apply(msg("ENTITY_UPDATE", entity("e1", 5, "fed-b", 1)));
    m.apply(msg("ENTITY_UPDATE", entity("e1", 5, "fed-a", 2)));
    expect(m.entities.get("e1")!.owner).toBe("fed-b");
  });

  it("tombstones removes so late stale updates stay dead", () => {
    const m = new Mirror();
    m.apply(msg("ENTITY_REMOVE", { id: "e1", version: 4, owner: "fed-a" }));
    m.apply(msg("ENTITY_UPDATE", entity("e1", 3)));
    expect(m.entities.has("e1")).toBe(false);
    m.apply(msg("ENTITY_UPDATE", entity("e1", 6)));
    expect(m.entities.has("e1")).toBe(true);
  });

  it("replaces decisions wholesale and counts shows", () => {
    const m = new Mirror();
    m.apply(msg("SNAPSHOT", { entities: [entity("e1", 1), entity("e2", 1)] }));
    m.apply(msg("DECISIONS", {
      decisions: {
        e1: { state: "show", reason: "zone-pass" },
        e2: { state: "hide", reason: "zone-fail" },
      },
    }));
    expect(m.showCount()).toBe(1);
    expect(m.shownEntities().map((e) => e.id)).toEqual(["e1"]);
  });

  it("tracks zone and route state", () => {
    const m = new Mirror();
    m.apply(msg("ZONE_UPDATE", { kind: "polygon", vertices: [[0, 0], [1, 0], [1, 1]] }));
    expect(m.zone!.kind).toBe("polygon");
    m.apply(msg("ROUTE_UPDATE", { waypoints: [[0, 0], [10, 0]], half_width: 40 }));
    expect(m.route!.waypoints.length).toBe(2);
    expect(m.route!.half_width).toBe(40);
  });
});
