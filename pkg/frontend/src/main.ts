// DOM wiring for the operator console.

import { complete, suggest } from "./autocomplete.js";
import { ConsoleClient } from "./client.js";
import { Bounds } from "./geometry.js";
import { CommandHistory } from "./history.js";
import { drawSide, drawTop } from "./render.js";
import {
  apply,
  initialState,
  noteConnection,
  noteStopRequested,
  noteSubmitted,
} from "./state.js";

const state = initialState();
const history = new CommandHistory();
let heads: string[] = [];
let workspace: Bounds | null = null;

const input = document.getElementById("command") as HTMLInputElement;
const sendButton = document.getElementById("send") as HTMLButtonElement;
const stopButton = document.getElementById("stop") as HTMLButtonElement;
const banner = document.getElementById("banner") as HTMLDivElement;
const logPane = document.getElementById("log") as HTMLDivElement;
const panel = document.getElementById("panel") as HTMLDivElement;
const suggestions = document.getElementById("suggestions") as HTMLDivElement;
const topCanvas = document.getElementById("top-view") as HTMLCanvasElement;
const sideCanvas = document.getElementById("side-view") as HTMLCanvasElement;

const wsUrl = `${location.protocol === "https:" ? "wss" : "ws"}://`
  + `${location.host}/ws`;
const client = new ConsoleClient(wsUrl, {
  onMessage(msg) {
    apply(state, msg);
  },
  onStatus(connected) {
    noteConnection(state, connected);
    input.disabled = !connected;
    banner.hidden = connected;
  },
}, (url) => new WebSocket(url));

fetch("/commands")
  .then((response) => response.json())
  .then((body: { heads: string[] }) => { heads = body.heads; })
  .catch(() => { /* autocomplete stays empty; free text still works */ });

function submit(): void {
  const text = input.value.trim();
  if (!text) return;
  const id = client.sendCommand(text);
  if (id === null) return; // disconnected; banner already shows
  noteSubmitted(state, id, text);
  history.push(text);
  input.value = "";
  suggestions.textContent = "";
}

function requestStop(): void {
  if (client.sendStop() !== null) {
    noteStopRequested(state);
  }
}

input.addEventListener("keydown", (ev) => {
  if (ev.key === "Enter") {
    submit();
  } else if (ev.key === "ArrowUp") {
    const previous = history.up(input.value);
    if (previous !== null) input.value = previous;
    ev.preventDefault();
  } else if (ev.key === "ArrowDown") {
    const next = history.down();
    if (next !== null) input.value = next;
    ev.preventDefault();
  } else if (ev.key === "Tab") {
    input.value = complete(input.value, heads);
    ev.preventDefault();
  }
});

input.addEventListener("input", () => {
  suggestions.textContent = suggest(input.value, heads).join("  ");
});

sendButton.addEventListener("click", submit);
stopButton.addEventListener("click", requestStop);
document.addEventListener("keydown", (ev) => {
  if (ev.key === "Escape") requestStop();
});

function renderPanel(): void {
  const snap = state.snapshot;
  if (!snap) {
    panel.textContent = "waiting for state...";
    return;
  }
  const robot = snap.robot;
  const fields = [
    ["robot", `${robot.x.toFixed(1)}, ${robot.y.toFixed(1)}, `
      + `${robot.z.toFixed(1)} mm`],
    ["rotation", `${robot.rotation.toFixed(1)} deg`],
    ["gripper", robot.gripper > 0.5 ? "open" : "closed"
      + (snap.held ? ` (${snap.held})` : "")],
    ["mode", `${snap.mode}, step ${snap.stepSize} mm`],
    ["running", snap.running ? "yes" : "no — say 'start robot'"],
    ["queue", String(snap.queueLength)],
    ["executing", snap.executing ?? "-"],
    ["recording", snap.recording ?? "-"],
    ["sim time", `${snap.time.toFixed(1)} s`],
  ];
  panel.innerHTML = fields
    .map(([k, v]) => `<div><span>${k}</span><b>${v}</b></div>`)
    .join("");
  const badge = snap.recording ? ` <mark>REC ${snap.recording}</mark>` : "";
  if (badge) panel.innerHTML += badge;
}

function renderLog(): void {
  logPane.innerHTML = state.log
    .slice(-40)
    .map((line) => `<div class="${line.tone}">`
      + `[${line.time.toFixed(1)}] ${escapeHtml(line.text)}</div>`)
    .join("");
  logPane.scrollTop = logPane.scrollHeight;
}

function escapeHtml(text: string): string {
  return text.replace(/&/g, "&amp;").replace(/</g, "&lt;")
    .replace(/>/g, "&gt;");
}

function frame(): void {
  if (state.snapshot) {
    drawTop(topCanvas, state.snapshot, workspace);
    drawSide(sideCanvas, state.snapshot, workspace);
  }
  renderPanel();
  renderLog();
  stopButton.classList.toggle("flashing", state.stopPending);
  requestAnimationFrame(frame);
}

client.connect();
requestAnimationFrame(frame);
