"""Command ingestion and execution loop.

Lines are normalized, parsed, expanded, and their primitives appended to
a FIFO queue; a fixed-rate tick advances the executing motion on the
simulator.  A stop request travels outside the queue on a priority flag
checked first on every tick, so it preempts within one tick no matter
how much work is pending.  Execution errors become events and never
block the next command: the operator corrects by voice.
"""

from __future__ import annotations

import json
import threading
from collections import deque
from dataclasses import dataclass
from typing import IO

from . import parser as cmds
from .engine import (
    ExpansionContext,
    ExpansionError,
    MoveAbsolute,
    Recorder,
    RepeatMarker,
    expand,
    fuse,
)
from .lexicon import AliasTable, default_aliases, normalize
from .parser import Command, render_command, try_parse
from .sim import AXIS, Scene, Workcell
from .store import Store, StoreError

DEFAULT_TICK_S = 0.02          # 50 Hz simulation clock
CONTINUOUS_SPEED_MM_S = 50.0   # velocity-limited interpolation speed
STEP_SIZE_MIN_MM = 1.0
STEP_SIZE_MAX_MM = 500.0
DEFAULT_STEP_MM = 50.0
RUN_TO_BOUND_MM = 1e7          # bare continuous move: head for the boundary


@dataclass(frozen=True)
class Ack:
    """Immediate reply to a submitted line; execution happens later."""

    ok: bool
    line: str
    command: Command | None = None
    diagnostic: str | None = None
    enqueued: int = 0
    warnings: tuple[str, ...] = ()


@dataclass(frozen=True)
class Event:
    kind: str
    data: dict
    tick: int
    time: float  # simulated seconds


@dataclass
class _Motion:
    command: Command
    target: tuple[float, float, float]
    rotation: float | None = None


class Dispatcher:
    """Owns the workcell, the store, and the command queue.

    submit() and stop() may be called from any thread; tick() is driven
    by exactly one clock (REPL thread, replay loop, or service task).
    """

    def __init__(self, scene: Scene, store: Store, *,
                 aliases: AliasTable | None = None,
                 tick_s: float = DEFAULT_TICK_S,
                 start_running: bool = False,
                 log: IO[str] | None = None):
        self.cell = Workcell(scene)
        self.store = store
        self.aliases = aliases if aliases is not None else default_aliases()
        self.tick_s = tick_s
        self.running = start_running
        self.mode = "step"
        self.step_size = DEFAULT_STEP_MM
        self.recorder = Recorder()
        self.ctx = ExpansionContext()
        self.pending: deque[Command] = deque()
        self.executing: _Motion | None = None
        self.tick_count = 0
        self._stop_requested = False
        self._lock = threading.Lock()
        self._log = log

    # -- ingestion ----------------------------------------------------------

    def submit(self, line: str) -> Ack:
        with self._lock:
            ack = self._submit_locked(line)
        self._log_record({"type": "submit", "time": self.time,
                          "line": ack.line, "ok": ack.ok,
                          "diagnostic": ack.diagnostic,
                          "enqueued": ack.enqueued})
        return ack

    def _submit_locked(self, line: str) -> Ack:
        outcome = try_parse(normalize(line, self.aliases))
        if not outcome.ok:
            return Ack(False, line, diagnostic=outcome.diagnostic)
        cmd = outcome.command

        if isinstance(cmd, cmds.StopExecution):
            # Priority path; never queued, never captured.
            self._stop_requested = True
            return Ack(True, line, command=cmd)
        if not self.running and not isinstance(cmd, cmds.StartRobot):
            return Ack(False, line, command=cmd,
                       diagnostic="NotRunning: say 'start robot' first")
        if isinstance(cmd, cmds.StartRobot):
            self.running = True
            self.pending.append(cmds.Home())
            self._capture(cmd)
            return Ack(True, line, command=cmd, enqueued=1)
        if isinstance(cmd, cmds.StopRobot):
            self._stop_requested = True
            self.running = False
            self._capture(cmd)
            return Ack(True, line, command=cmd)
        if isinstance(cmd, cmds.RecordStart):
            try:
                self.recorder.start(cmd.name)
            except ExpansionError as err:
                return Ack(False, line, command=cmd,
                           diagnostic=f"{type(err).__name__}: {err}")
            return Ack(True, line, command=cmd)
        if isinstance(cmd, cmds.RecordFinish):
            try:
                task = self.recorder.finish()
                self.store.save_task(task)
            except (ExpansionError, StoreError, ValueError) as err:
                return Ack(False, line, command=cmd,
                           diagnostic=f"{type(err).__name__}: {err}")
            return Ack(True, line, command=cmd)

        self.ctx.warnings = []
        self.ctx.holding = self.cell.held is not None
        try:
            primitives = expand(cmd, self.store, self.ctx)
        except (ExpansionError, StoreError) as err:
            return Ack(False, line, command=cmd,
                       diagnostic=f"{type(err).__name__}: {err}")
        self._capture(cmd)  # Again is captured as the command it resolved to
        if not isinstance(cmd, cmds.Again):
            self.ctx.last_top_level = cmd
        self.pending.extend(primitives)
        return Ack(True, line, command=cmd, enqueued=len(primitives),
                   warnings=tuple(self.ctx.warnings))

    def _capture(self, cmd: Command) -> Command | None:
        """Record the executed form of an accepted top-level command."""
        if not self.recorder.active:
            return None
        if isinstance(cmd, cmds.Again):
            cmd = self.ctx.last_top_level
            if cmd is None:
                return None
        self.recorder.capture(cmd)
        return cmd

    def stop(self) -> None:
        """Priority stop: bypasses the queue, takes effect next tick."""
        with self._lock:
            self._stop_requested = True
        self._log_record({"type": "stop", "time": self.time})

    # -- clock --------------------------------------------------------------

    @property
    def time(self) -> float:
        return self.tick_count * self.tick_s

    @property
    def idle(self) -> bool:
        with self._lock:
            return self.executing is None and not self.pending

    def tick(self, dt: float | None = None) -> list[Event]:
        """Advance the simulation by one tick; returns the events emitted."""
        dt = self.tick_s if dt is None else dt
        with self._lock:
            events = self._tick_locked(dt)
        for event in events:
            self._log_record({"type": "event", "time": event.time,
                              "tick": event.tick, "kind": event.kind,
                              **event.data})
        return events

    def _tick_locked(self, dt: float) -> list[Event]:
        self.tick_count += 1
        raw: list[tuple[str, dict]] = []

        if self._stop_requested:
            self._stop_requested = False
            flushed = len(self.pending)
            self.pending.clear()
            interrupted = self.executing is not None
            self.executing = None
            raw.append(("stopped", {"flushed": flushed,
                                    "interrupted": interrupted}))

        if self.executing is None:
            self._start_next(raw)
        if self.executing is not None:
            self._advance_motion(dt, raw)

        return [Event(kind, data, self.tick_count, self.time)
                for kind, data in raw]

    def _start_next(self, raw: list[tuple[str, dict]]) -> None:
        """Pop instantaneous commands until a motion starts or queue drains."""
        while self.pending and self.executing is None:
            cmd = self.pending.popleft()
            try:
                self._dispatch(cmd, raw)
            except (StoreError, ExpansionError) as err:
                raw.append(("error", {"command": _describe(cmd),
                                      "diagnostic": str(err)}))

    def _dispatch(self, cmd: Command, raw: list[tuple[str, dict]]) -> None:
        if isinstance(cmd, cmds.SetModeStep):
            self.mode = "step"
        elif isinstance(cmd, cmds.SetModeContinuous):
            self.mode = "continuous"
        elif isinstance(cmd, cmds.SetStepSize):
            size = float(cmds.STEP_PRESETS[cmd.preset] if cmd.preset
                         else cmd.size)
            clamped = min(max(size, STEP_SIZE_MIN_MM), STEP_SIZE_MAX_MM)
            if clamped != size:
                raw.append(("warning", {"reason": "step-size-clamped",
                                        "requested": size, "applied": clamped}))
            self.step_size = clamped
        elif isinstance(cmd, cmds.SavePosition):
            self.store.save_pose(cmd.name, self.cell.pose)
        elif isinstance(cmd, cmds.ListAdd):
            self.store.lookup_pose(cmd.pose)  # referenced pose must exist
            self.store.list_add(cmd.list_name, cmd.pose)
        elif isinstance(cmd, cmds.OpenGripper):
            raw.extend(self.cell.open_gripper())
        elif isinstance(cmd, cmds.CloseGripper):
            raw.extend(self.cell.close_gripper())
        elif isinstance(cmd, cmds.RotateTool):
            raw.extend(self.cell.rotate_tool(cmd.degrees))
        elif isinstance(cmd, RepeatMarker):
            # Re-expand one iteration; a stop in between flushes the marker.
            self.ctx.warnings = []
            self.ctx.holding = self.cell.held is not None
            primitives = expand(cmds.Repeat(cmd.task, continuous=True),
                                self.store, self.ctx)
            for warning in self.ctx.warnings:
                raw.append(("warning", {"reason": warning}))
            self.pending.extend(primitives)
        else:
            self._start_motion(cmd, raw)

    def _start_motion(self, cmd: Command, raw: list[tuple[str, dict]]) -> None:
        pose = self.cell.pose
        rotation: float | None = None
        if isinstance(cmd, cmds.DirectionalMove):
            ax, ay, az = AXIS[cmd.direction]
            if cmd.magnitude is not None:
                magnitude = float(cmd.magnitude)
                warn_on_clamp = True
            elif self.mode == "step":
                magnitude = self.step_size
                warn_on_clamp = True
            else:
                magnitude = RUN_TO_BOUND_MM  # run until stop or boundary
                warn_on_clamp = False
            target = (pose.x + ax * magnitude, pose.y + ay * magnitude,
                      pose.z + az * magnitude)
        elif isinstance(cmd, cmds.FusedMove):
            dx, dy, dz = fuse(cmd, self.step_size)
            target = (pose.x + dx, pose.y + dy, pose.z + dz)
            warn_on_clamp = True
        elif isinstance(cmd, cmds.MoveToPosition):
            saved = self.store.lookup_pose(cmd.name)
            target = (saved.x, saved.y, saved.z)
            rotation = saved.rotation
            warn_on_clamp = True
        elif isinstance(cmd, MoveAbsolute):
            target = (cmd.x, cmd.y, cmd.z)
            rotation = cmd.rotation
            warn_on_clamp = True
        elif isinstance(cmd, cmds.Home):
            home = self.cell.home
            target = (home.x, home.y, home.z)
            rotation = home.rotation
            warn_on_clamp = True
        else:
            raise AssertionError(f"unexecutable primitive: {cmd!r}")

        cx, cy, cz, clamped = self.cell.clamp_target(*target)
        if clamped and warn_on_clamp:
            raw.append(("warning", {"reason": "boundary",
                                    "command": _describe(cmd)}))
        self.executing = _Motion(cmd, (cx, cy, cz), rotation)
        raw.append(("motionStarted", {"command": _describe(cmd),
                                      "target": [cx, cy, cz]}))

    def _advance_motion(self, dt: float, raw: list[tuple[str, dict]]) -> None:
        motion = self.executing
        assert motion is not None
        tx, ty, tz = motion.target
        pose = self.cell.pose
        if self.mode == "continuous":
            dx, dy, dz = tx - pose.x, ty - pose.y, tz - pose.z
            distance = (dx * dx + dy * dy + dz * dz) ** 0.5
            travel = CONTINUOUS_SPEED_MM_S * dt
            if distance > travel:
                scale = travel / distance
                self.cell.move_to(pose.x + dx * scale, pose.y + dy * scale,
                                  pose.z + dz * scale)
                return
        self.cell.move_to(tx, ty, tz, motion.rotation)
        self.executing = None
        raw.append(("motionFinished", {"command": _describe(motion.command),
                                       "pose": [self.cell.pose.x,
                                                self.cell.pose.y,
                                                self.cell.pose.z]}))

    # -- introspection ------------------------------------------------------

    def snapshot(self) -> dict:
        """Consistent state view, taken under the dispatcher lock."""
        with self._lock:
            snap = self.cell.snapshot()
            snap.update({
                "running": self.running,
                "mode": self.mode,
                "stepSize": self.step_size,
                "recording": self.recorder.name,
                "queueLength": len(self.pending),
                "executing": _describe(self.executing.command)
                if self.executing else None,
                "tick": self.tick_count,
                "time": self.time,
            })
            return snap

    def _log_record(self, record: dict) -> None:
        if self._log is None:
            return
        json.dump(record, self._log, separators=(",", ":"), sort_keys=True)
        self._log.write("\n")


def _describe(cmd: Command) -> str:
    try:
        return render_command(cmd)
    except ValueError:
        if isinstance(cmd, MoveAbsolute):
            return f"goto {cmd.x:g} {cmd.y:g} {cmd.z:g}"
        if isinstance(cmd, RepeatMarker):
            return f"repeat {cmd.task} continuous"
        return type(cmd).__name__
