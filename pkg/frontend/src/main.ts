/**
 * Console entry point: connect to the hub's UI websocket, wire the canvas,
 * tool buttons, and focus sliders to one UiSession, and re-render on every
 * state change.
 */

import { renderMap } from "./render.js";
import { UiSession } from "./session.js";
import { MapView, screenToWorld } from "./transform.js";

const canvas = document.getElementById("map") as HTMLCanvasElement;
const ctx = canvas.getContext("2d")!;
const status = document.getElementById("status")!;
const showCount = document.getElementById("show-count")!;
const awarenessSlider = document.getElementById("awareness") as HTMLInputElement;
const awarenessValue = document.getElementById("awareness-value")!;
const weaponSlider = document.getElementById("weapon") as HTMLInputElement;
const weaponValue = document.getElementById("weapon-value")!;
const showFilteredToggle = document.getElementById("show-filtered") as HTMLInputElement;
const toolButtons = Array.from(document.querySelectorAll<HTMLButtonElement>("[data-tool]"));

const view: MapView = {
  center: [300, 75],
  heading: 0,
  scale: 1.0,
  viewport: [canvas.width, canvas.height],
};

let tool: "pan" | "draw-route" = "pan";
const session = new UiSession();

function redraw(): void {
  renderMap(ctx, session.mirror, view, {
    showFiltered: showFilteredToggle.checked,
    userPosition: view.center,
    weaponRange: Number(weaponSlider.value),
    awarenessRange: Number(awarenessSlider.value),
  });
  // Slider value and the resulting Show count belong side by side.
  showCount.textContent =
    `${session.mirror.showCount()} of ${session.mirror.entities.size} shown`;
}

session.on("*", redraw);
session.on("WELCOME", () => { status.textContent = "connected"; });

const ws = new WebSocket(`ws://${location.host}/ws`);
ws.addEventListener("close", () => { status.textContent = "disconnected (queuing)"; });
session.attach(ws as unknown as Parameters<UiSession["attach"]>[0]);

canvas.addEventListener("click", (ev) => {
  const rect = canvas.getBoundingClientRect();
  const px: [number, number] = [ev.clientX - rect.left, ev.clientY - rect.top];
  if (tool === "draw-route") {
    session.clickWaypoint(px, view);
  } else {
    const w = screenToWorld(px, view); // pan tool: recenter, no message
    view.center = [w.x, w.y];
  }
  redraw();
});

for (const btn of toolButtons) {
  btn.addEventListener("click", () => {
    tool = btn.dataset.tool as typeof tool;
    toolButtons.forEach((b) => b.classList.toggle("active", b === btn));
  });
}

function sliderHandler(): void {
  awarenessValue.textContent = `${awarenessSlider.value} m`;
  weaponValue.textContent = `${weaponSlider.value} m`;
  session.setFocus({
    awareness_range: Number(awarenessSlider.value),
    weapon_range: Number(weaponSlider.value),
  });
  redraw();
}
awarenessSlider.addEventListener("input", sliderHandler);
weaponSlider.addEventListener("input", sliderHandler);
showFilteredToggle.addEventListener("change", redraw);

canvas.addEventListener("wheel", (ev) => {
  ev.preventDefault();
  view.scale = Math.min(20, Math.max(0.05, view.scale * (ev.deltaY < 0 ? 1.15 : 0.87)));
  redraw();
});

redraw();
