// Console state: a pure reducer over server messages.
//
// The console holds no authoritative state.  The newest snapshot IS the
// display; reloading mid-task rebuilds an identical view from the next
// snapshot.

import { AckMessage, ServerMessage, Snapshot } from "./protocol.js";

export interface LogLine {
  time: number;
  text: string;
  tone: "info" | "error" | "warning" | "echo";
}

export interface ConsoleState {
  connected: boolean;
  snapshot: Snapshot | null;
  log: LogLine[];
  /** Command ids awaiting their ack, text by id. */
  inflight: Map<number, string>;
  /** Set when a stop was sent and its stopped event has not arrived. */
  stopPending: boolean;
  lastSeq: number;
}

const LOG_LIMIT = 200;

export function initialState(): ConsoleState {
  return {
    connected: false,
    snapshot: null,
    log: [],
    inflight: new Map(),
    stopPending: false,
    lastSeq: 0,
  };
}

function pushLog(state: ConsoleState, line: LogLine): void {
  state.log.push(line);
  if (state.log.length > LOG_LIMIT) state.log.shift();
}

export function noteConnection(state: ConsoleState, connected: boolean): void {
  state.connected = connected;
  if (!connected) {
    state.snapshot = null; // stale: wait for the next snapshot
    pushLog(state, { time: 0, text: "connection lost, retrying...",
                     tone: "warning" });
  }
}

export function noteSubmitted(state: ConsoleState, id: number,
                              text: string): void {
  state.inflight.set(id, text);
  pushLog(state, { time: state.snapshot?.time ?? 0, text: `> ${text}`,
                   tone: "echo" });
}

export function noteStopRequested(state: ConsoleState): void {
  state.stopPending = true;
}

function applyAck(state: ConsoleState, ack: AckMessage): void {
  const text = typeof ack.id === "number"
    ? state.inflight.get(ack.id) : undefined;
  if (typeof ack.id === "number") state.inflight.delete(ack.id);
  if (!ack.ok) {
    pushLog(state, {
      time: state.snapshot?.time ?? 0,
      text: `${text ?? "command"}: ${ack.diagnostic ?? "rejected"}`,
      tone: "error",
    });
  }
  for (const warning of ack.warnings) {
    pushLog(state, { time: state.snapshot?.time ?? 0, text: warning,
                     tone: "warning" });
  }
}

export function apply(state: ConsoleState, msg: ServerMessage): void {
  state.lastSeq = msg.seq;
  switch (msg.type) {
    case "state":
      state.snapshot = msg.state;
      break;
    case "event":
      if (msg.kind === "stopped") state.stopPending = false;
      if (msg.kind === "error" || msg.kind === "warning") {
        pushLog(state, {
          time: msg.time,
          text: `${msg.kind}: ${JSON.stringify(msg.data)}`,
          tone: msg.kind === "error" ? "error" : "warning",
        });
      } else {
        pushLog(state, { time: msg.time, text: describeEvent(msg.kind, msg.data),
                         tone: "info" });
      }
      break;
    case "ack":
      applyAck(state, msg);
      break;
  }
}

function describeEvent(kind: string, data: Record<string, unknown>): string {
  switch (kind) {
    case "motionStarted":
      return `moving: ${data.command}`;
    case "motionFinished":
      return `done: ${data.command}`;
    case "grasped":
      return `grasped ${data.object}`;
    case "released":
      return `released ${data.object}`;
    default:
      return `${kind}: ${JSON.stringify(data)}`;
  }
}
