"""Hierarchical command expansion.

Turns task invocations, repetition, concatenation, fused moves, and the
template skills (pick, place, stack, hold, push) into flat lists of
primitive commands for the dispatcher queue.  Expansion is a pure
function of the command, the store, and the context; primitives pass
through unchanged.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from . import parser as cmds
from .parser import Command, DirectionalMove, FusedMove
from .sim import AXIS, Pose
from .store import EmptyList, Store, TaskDefinition

MAX_TASK_DEPTH = 8      # guards task-calls-task recursion
APPROACH_MM = 50.0      # vertical approach above pick/place targets
PUSH_LENGTH_MM = 90.0   # default traversal either side of a push pose


class ExpansionError(Exception):
    pass


class RecursionLimit(ExpansionError):
    def __init__(self):
        super().__init__(f"tasks nest deeper than {MAX_TASK_DEPTH}")


class NothingToRepeat(ExpansionError):
    def __init__(self):
        super().__init__("no previous command to repeat")


class AlreadyRecording(ExpansionError):
    def __init__(self, name: str):
        super().__init__(f"already recording '{name}'")


class NotRecording(ExpansionError):
    def __init__(self):
        super().__init__("no recording in progress")


class EmptyTask(ExpansionError):
    def __init__(self, name: str):
        super().__init__(f"nothing was recorded for '{name}'")


@dataclass(frozen=True)
class MoveAbsolute(Command):
    """Internal primitive: motion target in workcell coordinates.  Produced
    only by template expansion, never parsed from text."""

    x: float
    y: float
    z: float
    rotation: float | None = None


@dataclass(frozen=True)
class RepeatMarker(Command):
    """Internal primitive: when dequeued, the dispatcher re-expands the task
    and appends it plus a fresh marker, so a stop always lands between
    iterations."""

    task: str


@dataclass
class ExpansionContext:
    """State threaded through one expansion and across submissions."""

    last_top_level: Command | None = None
    depth: int = 0
    holding: bool = False            # best-effort gripper prediction
    bindings: dict[str, str] = field(default_factory=dict)
    warnings: list[str] = field(default_factory=list)


def fuse(moves: FusedMove | tuple[DirectionalMove, ...],
         step_size: float) -> tuple[float, float, float]:
    """Net displacement of consecutive directional moves, in mm.

    Children without a magnitude contribute one step along their axis.
    """
    children = moves.moves if isinstance(moves, FusedMove) else tuple(moves)
    dx = dy = dz = 0.0
    for move in children:
        magnitude = float(move.magnitude if move.magnitude is not None
                          else step_size)
        ax, ay, az = AXIS[move.direction]
        dx += ax * magnitude
        dy += ay * magnitude
        dz += az * magnitude
    return dx, dy, dz


def _resolve_pose(store: Store, ctx: ExpansionContext, name: str) -> Pose:
    return store.lookup_pose(ctx.bindings.get(name, name))


def _above(pose: Pose, lift: float) -> MoveAbsolute:
    return MoveAbsolute(pose.x, pose.y, pose.z + lift, pose.rotation)


def _expand_template(cmd: Command, store: Store,
                     ctx: ExpansionContext) -> list[Command]:
    if isinstance(cmd, cmds.Pick):
        pose = _resolve_pose(store, ctx, cmd.pose)
        ctx.holding = True
        return [
            _above(pose, APPROACH_MM),
            cmds.OpenGripper(),
            _above(pose, 0.0),
            cmds.CloseGripper(),
            _above(pose, APPROACH_MM),
        ]
    if isinstance(cmd, (cmds.Place, cmds.Stack)):
        offset = cmd.offset if isinstance(cmd, cmds.Stack) else 0
        pose = _resolve_pose(store, ctx, cmd.pose)
        if not ctx.holding:
            ctx.warnings.append(
                f"{render_head(cmd)} '{cmd.pose}': gripper appears empty")
        ctx.holding = False
        return [
            _above(pose, offset + APPROACH_MM),
            _above(pose, offset),
            cmds.OpenGripper(),
            _above(pose, offset + APPROACH_MM),
        ]
    if isinstance(cmd, cmds.Hold):
        pose = _resolve_pose(store, ctx, cmd.pose)
        if not ctx.holding:
            ctx.warnings.append(f"hold '{cmd.pose}': gripper appears empty")
        return [
            _above(pose, cmd.offset + APPROACH_MM),
            _above(pose, cmd.offset),
        ]
    if isinstance(cmd, cmds.Push):
        pose = _resolve_pose(store, ctx, cmd.pose)
        length = float(cmd.length if cmd.length is not None else PUSH_LENGTH_MM)
        ax, ay, az = AXIS[cmd.direction]
        start = Pose(pose.x - ax * length, pose.y - ay * length,
                     pose.z - az * length, pose.rotation)
        end = Pose(pose.x + ax * length, pose.y + ay * length,
                   pose.z + az * length, pose.rotation)
        return [
            _above(start, APPROACH_MM),
            _above(start, 0.0),
            _above(end, 0.0),
            _above(end, APPROACH_MM),
        ]
    raise AssertionError(f"not a template: {cmd!r}")


def render_head(cmd: Command) -> str:
    return type(cmd).__name__.lower()


def _expand_task_body(name: str, store: Store,
                      ctx: ExpansionContext) -> list[Command]:
    if ctx.depth + 1 > MAX_TASK_DEPTH:
        raise RecursionLimit()
    task = store.lookup_task(name)
    inner = replace_depth(ctx, ctx.depth + 1)
    out: list[Command] = []
    for child in task.commands:
        out.extend(expand(child, store, inner))
    ctx.holding = inner.holding
    return out


def replace_depth(ctx: ExpansionContext, depth: int) -> ExpansionContext:
    inner = ExpansionContext(last_top_level=ctx.last_top_level, depth=depth,
                             holding=ctx.holding, bindings=ctx.bindings,
                             warnings=ctx.warnings)
    return inner


def expand(cmd: Command, store: Store, ctx: ExpansionContext) -> list[Command]:
    """Flatten one command into dispatcher primitives, in execution order."""
    if isinstance(cmd, cmds.Sequence):
        out: list[Command] = []
        for child in cmd.children:
            out.extend(expand(child, store, ctx))
        return out
    if isinstance(cmd, (cmds.Pick, cmds.Place, cmds.Stack, cmds.Hold,
                        cmds.Push)):
        return _expand_template(cmd, store, ctx)
    if isinstance(cmd, cmds.RunTask):
        return _expand_task_body(cmd.name, store, ctx)
    if isinstance(cmd, cmds.Repeat):
        if cmd.continuous:
            return _expand_task_body(cmd.task, store, ctx) \
                + [RepeatMarker(cmd.task)]
        if cmd.list_name is not None:
            out = []
            iterations = 0
            while True:
                try:
                    target = store.pop_front(cmd.list_name)
                except EmptyList:
                    if iterations == 0:
                        raise
                    break
                previous = ctx.bindings.get("target")
                ctx.bindings["target"] = target
                try:
                    out.extend(_expand_task_body(cmd.task, store, ctx))
                finally:
                    if previous is None:
                        ctx.bindings.pop("target", None)
                    else:
                        ctx.bindings["target"] = previous
                iterations += 1
            return out
        out = []
        for _ in range(cmd.times or 0):
            out.extend(_expand_task_body(cmd.task, store, ctx))
        return out
    if isinstance(cmd, cmds.Again):
        if ctx.last_top_level is None:
            raise NothingToRepeat()
        return expand(ctx.last_top_level, store, ctx)
    if isinstance(cmd, cmds.MoveToPosition):
        bound = ctx.bindings.get(cmd.name)
        return [cmds.MoveToPosition(bound) if bound else cmd]
    if isinstance(cmd, cmds.CloseGripper):
        ctx.holding = True
        return [cmd]
    if isinstance(cmd, cmds.OpenGripper):
        ctx.holding = False
        return [cmd]
    if isinstance(cmd, (cmds.RecordStart, cmds.RecordFinish,
                        cmds.StopExecution, cmds.StartRobot, cmds.StopRobot)):
        raise AssertionError(f"control command reached expansion: {cmd!r}")
    # Remaining primitives pass through untouched.
    return [cmd]


class Recorder:
    """Captures accepted top-level commands between record and finish."""

    def __init__(self):
        self.name: str | None = None
        self.captured: list[Command] = []

    @property
    def active(self) -> bool:
        return self.name is not None

    def start(self, name: str) -> None:
        if self.active:
            raise AlreadyRecording(self.name)
        self.name = name
        self.captured = []

    def capture(self, cmd: Command) -> None:
        if self.active:
            self.captured.append(cmd)

    def finish(self) -> TaskDefinition:
        if not self.active:
            raise NotRecording()
        name, captured = self.name, self.captured
        self.name, self.captured = None, []
        if not captured:
            raise EmptyTask(name)
        return TaskDefinition(name, tuple(captured))

    def abort(self) -> None:
        self.name, self.captured = None, []
