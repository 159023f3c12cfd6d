/**
 * Wire protocol: the same canonical-JSON messages the hub speaks, sent as
 * one websocket text frame each.
 */

export const MESSAGE_TYPES = [
  "JOIN", "WELCOME", "ENTITY_UPDATE", "ENTITY_REMOVE", "ZONE_UPDATE",
  "ROUTE_UPDATE", "FOCUS_UPDATE", "CAMERA_META", "DECISIONS",
  "SNAPSHOT_REQ", "SNAPSHOT", "HEARTBEAT",
] as const;

export type MessageType = (typeof MESSAGE_TYPES)[number];

export interface Message {
  type: MessageType;
  sender: string;
  seq: number;
  payload: Record<string, unknown>;
}

/** JSON with lexicographically sorted keys and no whitespace, so equal
 * messages are byte-identical across implementations. */
export function canonicalJson(value: unknown): string {
  if (value === null || typeof value !== "object") {
    return JSON.stringify(value);
  }
  if (Array.isArray(value)) {
    return "[" + value.map(canonicalJson).join(",") + "]";
  }
  const obj = value as Record<string, unknown>;
  const parts = Object.keys(obj)
    .sort()
    .map((k) => JSON.stringify(k) + ":" + canonicalJson(obj[k]));
  return "{" + parts.join(",") + "}";
}

export function encodeMessage(msg: Message): string {
  return canonicalJson({
    type: msg.type,
    sender: msg.sender,
    seq: msg.seq,
    payload: msg.payload,
  });
}

export function decodeMessage(text: string): Message {
  const obj = JSON.parse(text);
  if (typeof obj.type !== "string" || typeof obj.sender !== "string") {
    throw new Error("malformed message");
  }
  return {
    type: obj.type as MessageType,
    sender: obj.sender,
    seq: Number(obj.seq),
    payload: obj.payload ?? {},
  };
}
