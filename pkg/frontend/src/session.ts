/**
 * UiSession: one websocket federate.
 *
 * Joins the hub as kind=ui, keeps the local mirror current, and exposes the
 * two write paths the console has: route edits (map clicks) and focus
 * sliders (rate-limited to 10 messages per second).  While disconnected,
 * outgoing messages queue and a pending flag is exposed for the UI.
 */

import { RateLimiter } from "./debounce.js";
import { Mirror } from "./mirror.js";
import { decodeMessage, encodeMessage, Message, MessageType } from "./protocol.js";
import { MapView, screenToWorld } from "./transform.js";

export interface FocusValues {
  weapon_range?: number;
  awareness_range?: number;
}

type SocketLike = {
  readyState: number;
  send(data: string): void;
  close(): void;
  addEventListener(type: string, fn: (ev: any) => void): void;
};

const OPEN = 1;

export class UiSession {
  readonly mirror = new Mirror();
  readonly id: string;
  private seq = 0;
  private socket: SocketLike | null = null;
  private queue: string[] = [];
  private focusLimiter: RateLimiter<FocusValues>;
  private listeners = new Map<MessageType | "*", ((m: Message) => void)[]>();
  route: { waypoints: [number, number][]; half_width: number } = {
    waypoints: [],
    half_width: 50,
  };

  constructor(id = `ui-${Math.floor(Math.random() * 1e6)}`,
              now: () => number = () => Date.now()) {
    this.id = id;
    this.focusLimiter = new RateLimiter<FocusValues>(
      (foci) => this.send("FOCUS_UPDATE", foci as Record<string, unknown>),
      10,
      now,
    );
  }

  attach(socket: SocketLike): void {
    this.socket = socket;
    socket.addEventListener("message", (ev: { data: unknown }) => {
      this.receive(String(ev.data));
    });
    socket.addEventListener("open", () => {
      this.send("JOIN", { kind: "ui" });
      this.drain();
    });
    if (socket.readyState === OPEN) {
      this.send("JOIN", { kind: "ui" });
      this.drain();
    }
  }

  get pendingCount(): number {
    return this.queue.length;
  }

  on(type: MessageType | "*", fn: (m: Message) => void): void {
    const fns = this.listeners.get(type) ?? [];
    fns.push(fn);
    this.listeners.set(type, fns);
  }

  receive(text: string): void {
    const msg = decodeMessage(text);
    this.mirror.apply(msg);
    // The engine's echoed route is authoritative; adopt it verbatim.
    if (msg.type === "ROUTE_UPDATE" && this.mirror.route) {
      this.route = this.mirror.route;
    }
    for (const fn of this.listeners.get(msg.type) ?? []) fn(msg);
    for (const fn of this.listeners.get("*") ?? []) fn(msg);
  }

  send(type: MessageType, payload: Record<string, unknown> = {}): Message {
    this.seq += 1;
    const msg: Message = { type, sender: this.id, seq: this.seq, payload };
    const text = encodeMessage(msg);
    if (this.socket && this.socket.readyState === OPEN) {
      this.socket.send(text);
    } else {
      this.queue.push(text); // visible via pendingCount until reconnect
    }
    return msg;
  }

  private drain(): void {
    while (this.queue.length && this.socket && this.socket.readyState === OPEN) {
      this.socket.send(this.queue.shift()!);
    }
  }

  /** Map click while the draw-route tool is active. */
  clickWaypoint(px: [number, number], view: MapView): [number, number] {
    const w = screenToWorld(px, view);
    const waypoint: [number, number] = [w.x, w.y];
    this.route = {
      waypoints: [...this.route.waypoints, waypoint],
      half_width: this.route.half_width,
    };
    this.send("ROUTE_UPDATE", {
      waypoints: this.route.waypoints,
      half_width: this.route.half_width,
    });
    return waypoint;
  }

  /** Slider move; rate-limited, latest value always wins. */
  setFocus(foci: FocusValues): void {
    this.focusLimiter.push(foci);
  }

  flushFocus(): void {
    this.focusLimiter.flush();
  }
}
