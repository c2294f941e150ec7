import { describe, expect, it } from "vitest";

import { ConsoleClient, SocketLike } from "../src/client.js";
import { ServerMessage } from "../src/protocol.js";

class FakeSocket implements SocketLike {
  sent: string[] = [];
  readyState = 0;
  onopen: ((ev?: unknown) => void) | null = null;
  onclose: ((ev?: unknown) => void) | null = null;
  onmessage: ((ev: { data: string }) => void) | null = null;

  send(data: string): void {
    this.sent.push(data);
  }

  close(): void {
    this.readyState = 3;
    this.onclose?.();
  }

  open(): void {
    this.readyState = 1;
    this.onopen?.();
  }
}

function harness() {
  const sockets: FakeSocket[] = [];
  const scheduled: Array<() => void> = [];
  const messages: ServerMessage[] = [];
  const statuses: boolean[] = [];
  const client = new ConsoleClient(
    "ws://test/ws",
    { onMessage: (m) => messages.push(m),
      onStatus: (c) => statuses.push(c) },
    () => { const s = new FakeSocket(); sockets.push(s); return s; },
    (fn) => { scheduled.push(fn); return 0 as never; },
  );
  return { client, sockets, scheduled, messages, statuses };
}

describe("ConsoleClient", () => {
  it("sends numbered command frames once connected", () => {
    const h = harness();
    h.client.connect();
    expect(h.client.sendCommand("home")).toBeNull(); // not open yet
    h.sockets[0].open();
    expect(h.client.sendCommand("home")).toBe(1);
    expect(h.client.sendStop()).toBe(2);
    expect(JSON.parse(h.sockets[0].sent[0])).toEqual(
      { v: 1, type: "command", id: 1, text: "home" });
    expect(JSON.parse(h.sockets[0].sent[1])).toEqual(
      { v: 1, type: "stop", id: 2 });
  });

  it("delivers parsed messages and drops junk", () => {
    const h = harness();
    h.client.connect();
    h.sockets[0].open();
    h.sockets[0].onmessage?.({ data: JSON.stringify(
      { v: 1, type: "event", seq: 1, tick: 1, time: 0, kind: "stopped",
        data: {} }) });
    h.sockets[0].onmessage?.({ data: "garbage" });
    expect(h.messages).toHaveLength(1);
    expect(h.messages[0].type).toBe("event");
  });

  it("reconnects after a drop and reports status changes", () => {
    const h = harness();
    h.client.connect();
    h.sockets[0].open();
    h.sockets[0].close();
    expect(h.statuses).toEqual([true, false]);
    expect(h.scheduled).toHaveLength(1);
    h.scheduled[0]();
    expect(h.sockets).toHaveLength(2);
    h.sockets[1].open();
    expect(h.statuses).toEqual([true, false, true]);
  });

  it("stops reconnecting once closed", () => {
    const h = harness();
    h.client.connect();
    h.sockets[0].open();
    h.client.close();
    expect(h.scheduled).toHaveLength(0);
    expect(h.sockets).toHaveLength(1);
  });
});
