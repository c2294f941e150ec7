// Wire protocol types and guards for the jogcell service (v1).
// See docs/protocol.md in the repository root.

export interface RobotState {
  x: number;
  y: number;
  z: number;
  rotation: number;
  gripper: number;
}

export interface WorkcellObject {
  name: string;
  x: number;
  y: number;
  z: number;
  rotation: number;
  radius: number;
  height: number;
  held: boolean;
}

export interface Snapshot {
  robot: RobotState;
  held: string | null;
  objects: WorkcellObject[];
  running: boolean;
  mode: string;
  stepSize: number;
  recording: string | null;
  queueLength: number;
  executing: string | null;
  tick: number;
  time: number;
}

export interface StateMessage {
  v: number;
  type: "state";
  seq: number;
  tick: number;
  time: number;
  state: Snapshot;
}

export interface EventMessage {
  v: number;
  type: "event";
  seq: number;
  tick: number;
  time: number;
  kind: string;
  data: Record<string, unknown>;
}

export interface AckMessage {
  v: number;
  type: "ack";
  seq: number;
  id: number | string | null;
  ok: boolean;
  diagnostic: string | null;
  warnings: string[];
  enqueued: number;
}

export type ServerMessage = StateMessage | EventMessage | AckMessage;

export interface CommandFrame {
  v: 1;
  type: "command";
  id: number;
  text: string;
}

export interface StopFrame {
  v: 1;
  type: "stop";
  id: number;
}

export function commandFrame(id: number, text: string): CommandFrame {
  return { v: 1, type: "command", id, text };
}

export function stopFrame(id: number): StopFrame {
  return { v: 1, type: "stop", id };
}

/** Parse one raw socket payload; null for anything malformed. */
export function parseServerMessage(raw: string): ServerMessage | null {
  let value: unknown;
  try {
    value = JSON.parse(raw);
  } catch {
    return null;
  }
  if (typeof value !== "object" || value === null) return null;
  const msg = value as Record<string, unknown>;
  if (msg.v !== 1 || typeof msg.seq !== "number") return null;
  switch (msg.type) {
    case "state":
      if (typeof msg.state !== "object" || msg.state === null) return null;
      return msg as unknown as StateMessage;
    case "event":
      if (typeof msg.kind !== "string") return null;
      return msg as unknown as EventMessage;
    case "ack":
      if (typeof msg.ok !== "boolean") return null;
      return msg as unknown as AckMessage;
    default:
      return null;
  }
}
