"""Network bridge for operator consoles.

One WebSocket endpoint carries JSON messages both ways: command and stop
frames in, acks, state snapshots, and events out.  Stop frames route to
the dispatcher's priority path, bypassing the command queue.  Snapshots
are full (the state is tiny), so consoles stay stateless and a page
reload rebuilds an identical display from the next snapshot.
"""

from __future__ import annotations

import asyncio
import contextlib
from typing import Literal

from fastapi import FastAPI, WebSocket, WebSocketDisconnect
from fastapi.responses import HTMLResponse
from fastapi.staticfiles import StaticFiles
from pydantic import BaseModel, ValidationError

from .dispatcher import Dispatcher
from .parser import command_heads

PROTOCOL_VERSION = 1
SNAPSHOT_INTERVAL_S = 0.1   # >= 10 Hz state broadcast
BACKLOG_LIMIT = 1000        # messages queued before a slow client is dropped


class CommandFrame(BaseModel):
    v: int = PROTOCOL_VERSION
    type: Literal["command"]
    id: int | str | None = None
    text: str


class StopFrame(BaseModel):
    v: int = PROTOCOL_VERSION
    type: Literal["stop"]
    id: int | str | None = None


class AckMessage(BaseModel):
    v: int = PROTOCOL_VERSION
    type: Literal["ack"] = "ack"
    id: int | str | None = None
    ok: bool
    diagnostic: str | None = None
    warnings: list[str] = []
    enqueued: int = 0


class StateMessage(BaseModel):
    v: int = PROTOCOL_VERSION
    type: Literal["state"] = "state"
    tick: int
    time: float
    state: dict


class EventMessage(BaseModel):
    v: int = PROTOCOL_VERSION
    type: Literal["event"] = "event"
    tick: int
    time: float
    kind: str
    data: dict


class _Connection:
    """Outbound side of one client: a bounded queue drained by a send task."""

    def __init__(self):
        self.queue: asyncio.Queue[dict] = asyncio.Queue(maxsize=BACKLOG_LIMIT)
        self.seq = 0
        self.dropped = False

    def offer(self, message: dict) -> bool:
        """Queue a message; False means the client is too slow to keep."""
        if self.dropped:
            return False
        try:
            self.queue.put_nowait(message)
            return True
        except asyncio.QueueFull:
            self.dropped = True
            return False

    def stamp(self, message: dict) -> dict:
        self.seq += 1
        return {**message, "seq": self.seq}


class ServiceHost:
    """Owns the dispatcher clock while serving: one asyncio tick task."""

    def __init__(self, dispatcher: Dispatcher,
                 snapshot_interval_s: float = SNAPSHOT_INTERVAL_S):
        self.dispatcher = dispatcher
        self.snapshot_interval_s = snapshot_interval_s
        self.connections: set[_Connection] = set()
        self._ticker: asyncio.Task | None = None

    def state_message(self) -> dict:
        snap = self.dispatcher.snapshot()
        return StateMessage(tick=snap["tick"], time=snap["time"],
                            state=snap).model_dump()

    def _broadcast(self, message: dict) -> None:
        for connection in list(self.connections):
            if not connection.offer(message):
                self.connections.discard(connection)

    async def _run(self) -> None:
        ticks_per_snapshot = max(
            1, round(self.snapshot_interval_s / self.dispatcher.tick_s))
        count = 0
        while True:
            await asyncio.sleep(self.dispatcher.tick_s)
            events = self.dispatcher.tick()
            for event in events:
                self._broadcast(EventMessage(
                    tick=event.tick, time=event.time, kind=event.kind,
                    data=event.data).model_dump())
            count += 1
            if count >= ticks_per_snapshot:
                count = 0
                self._broadcast(self.state_message())

    def start(self) -> None:
        self._ticker = asyncio.get_running_loop().create_task(self._run())

    async def shutdown(self) -> None:
        if self._ticker is not None:
            self._ticker.cancel()
            with contextlib.suppress(asyncio.CancelledError):
                await self._ticker

    def attach(self) -> _Connection:
        connection = _Connection()
        # Handshake: a full snapshot before anything else.
        connection.offer(self.state_message())
        self.connections.add(connection)
        return connection

    def detach(self, connection: _Connection) -> None:
        self.connections.discard(connection)

    def handle_inbound(self, payload) -> AckMessage:
        """Route one inbound frame; malformed input gets a diagnostic ack."""
        if not isinstance(payload, dict):
            return AckMessage(ok=False, diagnostic="frame must be an object")
        kind = payload.get("type")
        try:
            if kind == "command":
                frame = CommandFrame.model_validate(payload)
                ack = self.dispatcher.submit(frame.text)
                return AckMessage(id=frame.id, ok=ack.ok,
                                  diagnostic=ack.diagnostic,
                                  warnings=list(ack.warnings),
                                  enqueued=ack.enqueued)
            if kind == "stop":
                frame = StopFrame.model_validate(payload)
                self.dispatcher.stop()
                return AckMessage(id=frame.id, ok=True)
        except ValidationError as err:
            return AckMessage(id=payload.get("id"), ok=False,
                              diagnostic=f"bad frame: {err.errors()[0]['msg']}")
        return AckMessage(id=payload.get("id"), ok=False,
                          diagnostic=f"unknown frame type: {kind!r}")


_FALLBACK_PAGE = """<!doctype html>
<html><head><title>jogcell</title></head>
<body><h1>jogcell service</h1>
<p>The operator console bundle is not installed.  Connect a WebSocket
client to <code>/ws</code>, or build the console and pass
<code>--ui &lt;dir&gt;</code>.</p></body></html>
"""


def build_app(host: ServiceHost, ui_dir: str | None = None) -> FastAPI:
    @contextlib.asynccontextmanager
    async def lifespan(_app: FastAPI):
        host.start()
        try:
            yield
        finally:
            await host.shutdown()

    app = FastAPI(title="jogcell", version="1", lifespan=lifespan)

    @app.get("/commands")
    def get_commands() -> dict:
        return {"heads": command_heads()}

    @app.get("/state")
    def get_state() -> dict:
        return host.state_message()

    @app.websocket("/ws")
    async def websocket_endpoint(websocket: WebSocket):
        await websocket.accept()
        connection = host.attach()

        async def sender():
            while True:
                message = await connection.queue.get()
                await websocket.send_json(connection.stamp(message))

        send_task = asyncio.get_running_loop().create_task(sender())
        try:
            while True:
                try:
                    payload = await websocket.receive_json()
                except ValueError:
                    ack = AckMessage(ok=False, diagnostic="frame is not JSON")
                else:
                    ack = host.handle_inbound(payload)
                connection.offer(ack.model_dump())
        except WebSocketDisconnect:
            pass
        finally:
            send_task.cancel()
            with contextlib.suppress(asyncio.CancelledError):
                await send_task
            host.detach(connection)

    if ui_dir:
        app.mount("/", StaticFiles(directory=ui_dir, html=True), name="ui")
    else:
        @app.get("/", response_class=HTMLResponse)
        def index() -> str:
            return _FALLBACK_PAGE

    return app
