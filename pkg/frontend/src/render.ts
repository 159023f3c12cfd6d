/**
 * Canvas renderer: line-drawing glyphs only, no filled interiors.
 *
 * Friendly = blue rectangle outline, hostile = red diamond outline,
 * everything else = green circle outline; symbol codes ride along untouched
 * for a future full-symbology renderer.
 */

import type { EntityRecord, Mirror } from "./mirror.js";
import { MapView, worldToScreen } from "./transform.js";

export interface RenderOptions {
  showFiltered: boolean; // debug toggle: draw Hide entities faintly
  userPosition: [number, number];
  weaponRange: number;
  awarenessRange: number;
}

function glyphStyle(cls: string): { color: string; shape: "rect" | "diamond" | "circle" } {
  if (cls === "friendly" || cls === "vehicle") return { color: "#3b82f6", shape: "rect" };
  if (cls === "hostile" || cls === "enemy-position" || cls === "IED")
    return { color: "#ef4444", shape: "diamond" };
  return { color: "#22c55e", shape: "circle" };
}

function drawGlyph(ctx: CanvasRenderingContext2D, px: [number, number],
                   cls: string, faint: boolean): void {
  const { color, shape } = glyphStyle(cls);
  ctx.strokeStyle = color;
  ctx.globalAlpha = faint ? 0.25 : 1.0;
  ctx.lineWidth = 1.5;
  const r = 6;
  ctx.beginPath();
  if (shape === "rect") {
    ctx.rect(px[0] - r, px[1] - r, 2 * r, 2 * r);
  } else if (shape === "diamond") {
    ctx.moveTo(px[0], px[1] - r);
    ctx.lineTo(px[0] + r, px[1]);
    ctx.lineTo(px[0], px[1] + r);
    ctx.lineTo(px[0] - r, px[1]);
    ctx.closePath();
  } else {
    ctx.arc(px[0], px[1], r, 0, 2 * Math.PI);
  }
  ctx.stroke();
  ctx.globalAlpha = 1.0;
}

function drawPolyline(ctx: CanvasRenderingContext2D, pts: [number, number][],
                      view: MapView, close: boolean): void {
  if (pts.length < 2) return;
  ctx.beginPath();
  pts.forEach((p, i) => {
    const px = worldToScreen({ x: p[0], y: p[1] }, view);
    if (i === 0) ctx.moveTo(px[0], px[1]);
    else ctx.lineTo(px[0], px[1]);
  });
  if (close) ctx.closePath();
  ctx.stroke();
}

export function renderMap(ctx: CanvasRenderingContext2D, mirror: Mirror,
                          view: MapView, opts: RenderOptions): void {
  ctx.clearRect(0, 0, view.viewport[0], view.viewport[1]);
  ctx.fillStyle = "#0b1220";
  ctx.fillRect(0, 0, view.viewport[0], view.viewport[1]);

  // Operation zone outline.
  ctx.strokeStyle = "#eab308";
  ctx.lineWidth = 1.5;
  if (mirror.zone?.kind === "polygon" && mirror.zone.vertices) {
    drawPolyline(ctx, mirror.zone.vertices, view, true);
  } else if (mirror.zone?.kind === "corridor" && mirror.zone.route) {
    drawPolyline(ctx, mirror.zone.route, view, false);
  }

  // Route being drawn.
  if (mirror.route && mirror.route.waypoints.length >= 2) {
    ctx.strokeStyle = "#a78bfa";
    ctx.setLineDash([6, 4]);
    drawPolyline(ctx, mirror.route.waypoints, view, false);
    ctx.setLineDash([]);
  }

  // Focus rings: radius in pixels is meters times scale.
  const userPx = worldToScreen({ x: opts.userPosition[0], y: opts.userPosition[1] }, view);
  for (const [range, color] of [
    [opts.weaponRange, "#f97316"],
    [opts.awarenessRange, "#38bdf8"],
  ] as [number, string][]) {
    if (range <= 0) continue;
    ctx.strokeStyle = color;
    ctx.beginPath();
    ctx.arc(userPx[0], userPx[1], range * view.scale, 0, 2 * Math.PI);
    ctx.stroke();
  }

  // Camera footprint quads.
  ctx.strokeStyle = "#64748b";
  for (const p of mirror.placements) {
    const quad = (p as { quad?: [number, number, number][] }).quad;
    if (quad && quad.length === 4) {
      drawPolyline(ctx, quad.map((q) => [q[0], q[1]] as [number, number]), view, true);
    }
  }

  // Entities: Show always, Hide only under the debug toggle.
  for (const e of mirror.entities.values()) {
    const state = mirror.decisions.get(e.id)?.state ?? "show";
    if (state === "hide" && !opts.showFiltered) continue;
    const px = worldToScreen({ x: e.position[0], y: e.position[1] }, view);
    drawGlyph(ctx, px, e.class, state === "hide");
  }
}

export function visibleEntities(mirror: Mirror, showFiltered: boolean): EntityRecord[] {
  return [...mirror.entities.values()].filter((e) => {
    const state = mirror.decisions.get(e.id)?.state ?? "show";
    return state === "show" || showFiltered;
  });
}
