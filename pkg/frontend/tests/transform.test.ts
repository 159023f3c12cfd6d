import { describe, expect, it } from "vitest";
import { readFileSync } from "node:fs";
import { join } from "node:path";

import { MapView, screenToWorld, worldToScreen } from "../src/transform.js";

interface Case {
  view: { center: [number, number]; heading: number; scale: number;
          viewport: [number, number] };
  pixel: [number, number];
  world: [number, number];
}

const CASES: Case[] = JSON.parse(
  readFileSync(join(__dirname, "fixtures", "engine_picks.json"), "utf-8"),
);

describe("screenToWorld", () => {
  it("matches the engine's picks within 0.5 m on every scripted click", () => {
    expect(CASES.length).toBeGreaterThanOrEqual(10);
    for (const c of CASES) {
      const view: MapView = { ...c.view };
      const w = screenToWorld(c.pixel, view);
      const err = Math.hypot(w.x - c.world[0], w.y - c.world[1]);
      expect(err).toBeLessThanOrEqual(0.5);
      // In practice the two implementations agree to double precision.
      expect(err).toBeLessThanOrEqual(1e-9);
    }
  });

  it("maps the viewport center to the map center", () => {
    const view: MapView = { center: [100, 200], heading: 77, scale: 3,
                            viewport: [640, 480] };
    const w = screenToWorld([320, 240], view);
    expect(w.x).toBeCloseTo(100, 9);
    expect(w.y).toBeCloseTo(200, 9);
  });

  it("round-trips with worldToScreen", () => {
    const view: MapView = { center: [-50, 12], heading: 213, scale: 0.8,
                            viewport: [800, 600] };
    for (let i = 0; i < 100; i++) {
      const px: [number, number] = [Math.random() * 800, Math.random() * 600];
      const back = worldToScreen(screenToWorld(px, view), view);
      expect(Math.hypot(back[0] - px[0], back[1] - px[1])).toBeLessThan(1e-9);
    }
  });

  it("rotates picks with the heading", () => {
    const base: MapView = { center: [0, 0], heading: 0, scale: 2,
                            viewport: [800, 600] };
    const rot: MapView = { ...base, heading: 90 };
    // 20 px right of center: east at heading 0, south at heading 90.
    const east = screenToWorld([420, 300], base);
    const south = screenToWorld([420, 300], rot);
    expect(east.x).toBeCloseTo(10, 9);
    expect(east.y).toBeCloseTo(0, 9);
    expect(south.x).toBeCloseTo(0, 9);
    expect(south.y).toBeCloseTo(-10, 9);
  });
});
