// Wire protocol of the bridge: one JSON envelope per WebSocket text frame.
// Encoding is canonical (sorted keys, no whitespace) and decoding is strict:
// unknown envelope keys are rejected so drift from the broker shows up loudly.

export type Op = "advertise" | "unadvertise" | "subscribe" | "unsubscribe" | "publish";

const OPS: readonly Op[] = ["advertise", "unadvertise", "subscribe", "unsubscribe", "publish"];

export interface Envelope {
  op: Op;
  topic: string;
  stamp: number;
  type?: string;
  msg?: Record<string, unknown>;
}

export interface GazeMsg {
  x: number;
  y: number;
  valid: boolean;
  stamp: number;
}

export interface PoseMsg {
  x: number;
  y: number;
  theta: number;
  stamp: number;
}

export interface CmdVelMsg {
  vx: number;
  vy: number;
  omega: number;
}

export interface ForceMsg {
  fx: number;
  fy: number;
}

export interface WheelCmdMsg {
  w: number[];
}

export interface ControlParamsMsg {
  damping_ns_per_m: number;
}

// Topic -> message type names, mirroring the broker's builtin bindings.
export const TOPIC_TYPES: Record<string, string> = {
  "/gaze": "gaze_drive/Gaze",
  "/joy": "gaze_drive/Joy",
  "/virtual_robot/pose": "gaze_drive/Pose2D",
  "/robot/pose": "gaze_drive/Pose2D",
  "/cmd_vel": "gaze_drive/CmdVel",
  "/wheel_cmd": "gaze_drive/WheelCmd",
  "/control/params": "gaze_drive/ControlParams",
  "/telemetry/force": "gaze_drive/Force",
};

const ENVELOPE_KEYS = new Set(["op", "topic", "stamp", "type", "msg"]);

export class ProtocolError extends Error {}

function sortedStringify(value: unknown): string {
  if (value === null || typeof value !== "object") {
    return JSON.stringify(value);
  }
  if (Array.isArray(value)) {
    return "[" + value.map(sortedStringify).join(",") + "]";
  }
  const entries = Object.keys(value as Record<string, unknown>)
    .sort()
    .map((k) => JSON.stringify(k) + ":" + sortedStringify((value as Record<string, unknown>)[k]));
  return "{" + entries.join(",") + "}";
}

export function encodeEnvelope(env: Envelope): string {
  if (!OPS.includes(env.op)) {
    throw new ProtocolError(`unknown op ${env.op}`);
  }
  if (!env.topic.startsWith("/")) {
    throw new ProtocolError(`topic must start with '/': ${env.topic}`);
  }
  if (!Number.isFinite(env.stamp) || env.stamp < 0) {
    throw new ProtocolError(`stamp must be finite and >= 0: ${env.stamp}`);
  }
  const payload: Record<string, unknown> = { op: env.op, topic: env.topic, stamp: env.stamp };
  if (env.type !== undefined) payload.type = env.type;
  if (env.msg !== undefined) payload.msg = env.msg;
  return sortedStringify(payload);
}

export function decodeEnvelope(text: string): Envelope {
  let raw: unknown;
  try {
    raw = JSON.parse(text);
  } catch (err) {
    throw new ProtocolError(`frame is not valid JSON: ${err}`);
  }
  if (raw === null || typeof raw !== "object" || Array.isArray(raw)) {
    throw new ProtocolError("frame must be a JSON object");
  }
  const obj = raw as Record<string, unknown>;
  for (const key of Object.keys(obj)) {
    if (!ENVELOPE_KEYS.has(key)) {
      throw new ProtocolError(`unknown envelope key '${key}'`);
    }
  }
  const { op, topic, stamp } = obj;
  if (typeof op !== "string" || !OPS.includes(op as Op)) {
    throw new ProtocolError(`bad op ${String(op)}`);
  }
  if (typeof topic !== "string" || !topic.startsWith("/")) {
    throw new ProtocolError(`bad topic ${String(topic)}`);
  }
  if (typeof stamp !== "number" || !Number.isFinite(stamp) || stamp < 0) {
    throw new ProtocolError(`bad stamp ${String(stamp)}`);
  }
  if (op === "publish" && (obj.msg === undefined || obj.type === undefined)) {
    throw new ProtocolError("publish requires type and msg");
  }
  const env: Envelope = { op: op as Op, topic, stamp };
  if (obj.type !== undefined) {
    if (typeof obj.type !== "string") throw new ProtocolError("type must be a string");
    env.type = obj.type;
  }
  if (obj.msg !== undefined) {
    if (obj.msg === null || typeof obj.msg !== "object" || Array.isArray(obj.msg)) {
      throw new ProtocolError("msg must be an object");
    }
    env.msg = obj.msg as Record<string, unknown>;
  }
  return env;
}

export function makePublish(topic: string, msg: Record<string, unknown>, stamp: number): Envelope {
  const type = TOPIC_TYPES[topic];
  if (!type) {
    throw new ProtocolError(`no builtin type for topic ${topic}`);
  }
  return { op: "publish", topic, type, msg, stamp };
}

// Broker diagnostics arrive as non-envelope frames: {"error": {kind, message}}.
export function errorFrameMessage(text: string): string | null {
  try {
    const obj = JSON.parse(text);
    if (obj && typeof obj === "object" && "error" in obj) {
      const err = (obj as { error: { kind?: string; message?: string } }).error;
      return `${err.kind ?? "error"}: ${err.message ?? "unknown"}`;
    }
  } catch {
    // not JSON at all; let the caller treat it as garbage
  }
  return null;
}
