// Reconnecting WebSocket client.  The socket constructor is injectable
// so the logic stays testable without a browser.

import { commandFrame, parseServerMessage, ServerMessage, stopFrame }
  from "./protocol.js";

export interface SocketLike {
  send(data: string): void;
  close(): void;
  // Parameter types stay loose so a browser WebSocket satisfies this as-is.
  onopen: ((ev: any) => void) | null;
  onclose: ((ev: any) => void) | null;
  onmessage: ((ev: any) => void) | null;
  readyState: number;
}

export type SocketFactory = (url: string) => SocketLike;

export interface ClientCallbacks {
  onMessage(msg: ServerMessage): void;
  onStatus(connected: boolean): void;
}

const RETRY_MIN_MS = 250;
const RETRY_MAX_MS = 5000;

export class ConsoleClient {
  private socket: SocketLike | null = null;
  private nextId = 1;
  private retryMs = RETRY_MIN_MS;
  private closed = false;
  private timer: ReturnType<typeof setTimeout> | null = null;

  constructor(private url: string,
              private callbacks: ClientCallbacks,
              private factory: SocketFactory,
              private schedule: (fn: () => void, ms: number) =>
                ReturnType<typeof setTimeout> = setTimeout) {}

  connect(): void {
    if (this.closed) return;
    const socket = this.factory(this.url);
    this.socket = socket;
    socket.onopen = () => {
      this.retryMs = RETRY_MIN_MS;
      this.callbacks.onStatus(true);
    };
    socket.onclose = () => {
      this.callbacks.onStatus(false);
      this.socket = null;
      if (!this.closed) {
        this.timer = this.schedule(() => this.connect(), this.retryMs);
        this.retryMs = Math.min(this.retryMs * 2, RETRY_MAX_MS);
      }
    };
    socket.onmessage = (ev: { data: string }) => {
      const msg = parseServerMessage(String(ev.data));
      if (msg !== null) this.callbacks.onMessage(msg);
    };
  }

  /** Send one command line; returns its id, or null while disconnected. */
  sendCommand(text: string): number | null {
    if (this.socket === null || this.socket.readyState !== 1) return null;
    const id = this.nextId++;
    this.socket.send(JSON.stringify(commandFrame(id, text)));
    return id;
  }

  /** Priority stop; usable regardless of what is queued. */
  sendStop(): number | null {
    if (this.socket === null || this.socket.readyState !== 1) return null;
    const id = this.nextId++;
    this.socket.send(JSON.stringify(stopFrame(id)));
    return id;
  }

  close(): void {
    this.closed = true;
    if (this.timer !== null) clearTimeout(this.timer);
    this.socket?.close();
  }
}
