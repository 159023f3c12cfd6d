/**
 * Heading-up map transform between screen pixels and world meters.
 *
 * This re-states the engine's math; the engine's answer stays authoritative
 * (route echoes correct any drift), but the two agree to floating-point
 * precision so local prediction is exact in practice.
 */

export interface MapView {
  center: [number, number]; // world coords at the viewport center
  heading: number;          // degrees; up on screen points along this heading
  scale: number;            // pixels per meter
  viewport: [number, number];
}

export interface WorldPoint {
  x: number;
  y: number;
}

export function worldToScreen(p: WorldPoint, view: MapView): [number, number] {
  const h = (view.heading * Math.PI) / 180;
  const dx = p.x - view.center[0];
  const dy = p.y - view.center[1];
  const forward = dx * Math.sin(h) + dy * Math.cos(h);
  const right = dx * Math.cos(h) - dy * Math.sin(h);
  return [
    view.viewport[0] / 2 + right * view.scale,
    view.viewport[1] / 2 - forward * view.scale,
  ];
}

export function screenToWorld(px: [number, number], view: MapView): WorldPoint {
  const h = (view.heading * Math.PI) / 180;
  const right = (px[0] - view.viewport[0] / 2) / view.scale;
  const forward = (view.viewport[1] / 2 - px[1]) / view.scale;
  return {
    x: view.center[0] + right * Math.cos(h) + forward * Math.sin(h),
    y: view.center[1] - right * Math.sin(h) + forward * Math.cos(h),
  };
}
