"""Command-line entry points: interactive REPL, transcript replay, serve.

Exit codes: 0 ok, 1 usage error, 2 assertion failure, 3 runtime error.
"""

from __future__ import annotations

import argparse
import contextlib
import sys
import tempfile
import threading
from dataclasses import dataclass, field
from pathlib import Path

from . import data
from .dispatcher import DEFAULT_TICK_S, Dispatcher
from .lexicon import AliasTable, default_aliases
from .sim import Scene, load_scene
from .store import Store

DEFAULT_PORT = 8490
MAX_DRAIN_TICKS = 100_000  # a replay line that never settles is an error


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # argparse would exit(2); we reserve 2 for asserts
        raise UsageError(message)


@dataclass
class PoseAssert:
    label: str            # "robot" or an object name
    x: float
    y: float
    z: float


@dataclass
class ReplayReport:
    transcript: str
    commands: int = 0
    accepted: int = 0
    rejected: int = 0
    human_steps: int = 0
    ticks: int = 0
    rejected_lines: list[tuple[str, str]] = field(default_factory=list)
    final_state: dict = field(default_factory=dict)
    assert_failures: list[str] = field(default_factory=list)
    asserts_checked: int = 0

    @property
    def ok(self) -> bool:
        return not self.assert_failures

    def render(self) -> str:
        robot = self.final_state.get("robot", {})
        lines = [
            f"transcript: {self.transcript}",
            f"commands: {self.commands}",
            f"accepted: {self.accepted}",
            f"rejected: {self.rejected}",
            f"human steps: {self.human_steps}",
            f"ticks: {self.ticks}",
            "robot: "
            f"{robot.get('x', 0.0):.3f} {robot.get('y', 0.0):.3f} "
            f"{robot.get('z', 0.0):.3f} rotation {robot.get('rotation', 0.0):.3f} "
            f"gripper {robot.get('gripper', 1.0):.2f}",
        ]
        for line, diagnostic in self.rejected_lines:
            lines.append(f"rejected line: {line!r}: {diagnostic}")
        for obj in self.final_state.get("objects", []):
            lines.append(
                f"object {obj['name']}: {obj['x']:.3f} {obj['y']:.3f} "
                f"{obj['z']:.3f} rotation {obj['rotation']:.3f}")
        if self.asserts_checked:
            lines.append(f"assertions: {self.asserts_checked} checked, "
                         f"{len(self.assert_failures)} failed")
            lines.extend(f"assert failed: {failure}"
                         for failure in self.assert_failures)
        return "\n".join(lines) + "\n"


def load_asserts(path: str | Path) -> tuple[float, list[PoseAssert]]:
    tolerance = 1.0
    expectations: list[PoseAssert] = []
    for raw in Path(path).read_text(encoding="utf-8").splitlines():
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        if parts[0] == "tolerance" and len(parts) == 2:
            tolerance = float(parts[1])
        elif parts[0] == "robot" and len(parts) == 4:
            expectations.append(PoseAssert("robot", *map(float, parts[1:])))
        elif parts[0] == "object" and len(parts) == 5:
            expectations.append(PoseAssert(parts[1], *map(float, parts[2:])))
        else:
            raise ValueError(f"bad assert line: {raw!r}")
    return tolerance, expectations


def _check_asserts(report: ReplayReport, tolerance: float,
                   expectations: list[PoseAssert]) -> None:
    objects = {o["name"]: o for o in report.final_state.get("objects", [])}
    for want in expectations:
        report.asserts_checked += 1
        if want.label == "robot":
            got = report.final_state["robot"]
        elif want.label in objects:
            got = objects[want.label]
        else:
            report.assert_failures.append(f"{want.label}: no such object")
            continue
        deltas = (abs(got["x"] - want.x), abs(got["y"] - want.y),
                  abs(got["z"] - want.z))
        if max(deltas) > tolerance:
            report.assert_failures.append(
                f"{want.label}: expected ({want.x:.3f}, {want.y:.3f}, "
                f"{want.z:.3f}) got ({got['x']:.3f}, {got['y']:.3f}, "
                f"{got['z']:.3f})")


def _drain(dispatcher: Dispatcher, report: ReplayReport) -> None:
    ticks = 0
    while not dispatcher.idle:
        dispatcher.tick()
        report.ticks += 1
        ticks += 1
        if ticks > MAX_DRAIN_TICKS:
            raise RuntimeError("replay did not settle; missing a stop?")


def replay_transcript(transcript: str | Path, scene_file: str | Path | None,
                      store_dir: str | Path | None = None,
                      assert_file: str | Path | None = None,
                      tick_s: float = DEFAULT_TICK_S,
                      aliases: AliasTable | None = None,
                      log=None) -> ReplayReport:
    """Run a transcript to quiescence at full speed and report the outcome.

    Transcripts reproduce sessions on an already powered robot, so the
    dispatcher starts in the running state; `start robot` lines are still
    accepted and re-home the arm.  Directives: `# comment`, `@tick N`,
    `@human <label>`, `@object <name> <x> <y> <z> [rotation]`.
    """
    transcript = data.resolve("transcript", transcript)
    scene = load_scene(data.resolve("scene", scene_file)) if scene_file \
        else Scene()
    with contextlib.ExitStack() as stack:
        if store_dir is None:
            store_dir = stack.enter_context(tempfile.TemporaryDirectory())
        dispatcher = Dispatcher(scene, Store(store_dir), aliases=aliases,
                                tick_s=tick_s, start_running=True, log=log)
        report = ReplayReport(transcript=Path(transcript).name)

        lines = [ln.split("#", 1)[0].strip()
                 for ln in Path(transcript).read_text(encoding="utf-8").splitlines()]
        lines = [ln for ln in lines if ln]
        for index, line in enumerate(lines):
            if line.startswith("@"):
                parts = line.split()
                if parts[0] == "@tick" and len(parts) == 2:
                    for _ in range(int(parts[1])):
                        dispatcher.tick()
                        report.ticks += 1
                elif parts[0] == "@human":
                    report.human_steps += 1
                elif parts[0] == "@object" and len(parts) in (5, 6):
                    rotation = float(parts[5]) if len(parts) == 6 else None
                    dispatcher.cell.set_object_pose(
                        parts[1], float(parts[2]), float(parts[3]),
                        float(parts[4]), rotation)
                else:
                    raise ValueError(f"bad directive: {line!r}")
                continue
            report.commands += 1
            ack = dispatcher.submit(line)
            if ack.ok:
                report.accepted += 1
            else:
                report.rejected += 1
                report.rejected_lines.append((line, ack.diagnostic or ""))
            next_line = lines[index + 1] if index + 1 < len(lines) else ""
            if not next_line.startswith("@tick"):
                _drain(dispatcher, report)
        _drain(dispatcher, report)
        report.final_state = dispatcher.snapshot()

    if assert_file is not None:
        tolerance, expectations = load_asserts(data.resolve("assert", assert_file))
        _check_asserts(report, tolerance, expectations)
    return report


def _open_log(path: str | None, stack: contextlib.ExitStack):
    if path is None:
        return None
    return stack.enter_context(open(path, "w", encoding="utf-8"))


def _cmd_replay(args) -> int:
    with contextlib.ExitStack() as stack:
        report = replay_transcript(
            args.transcript, args.scene, store_dir=args.store,
            assert_file=getattr(args, "assert_file", None),
            tick_s=args.tick_ms / 1000.0,
            aliases=_load_aliases(args),
            log=_open_log(args.log, stack))
    sys.stdout.write(report.render())
    return 0 if report.ok else 2


def _load_aliases(args) -> AliasTable:
    if getattr(args, "aliases", None):
        return AliasTable.load(args.aliases)
    return default_aliases()


def _cmd_repl(args) -> int:
    scene = load_scene(data.resolve("scene", args.scene)) if args.scene \
        else Scene()
    store_dir = args.store if args.store else "./jogcell_store"
    with contextlib.ExitStack() as stack:
        dispatcher = Dispatcher(scene, Store(store_dir),
                                aliases=_load_aliases(args),
                                tick_s=args.tick_ms / 1000.0,
                                log=_open_log(args.log, stack))
        stop_flag = threading.Event()

        def clock():
            while not stop_flag.wait(dispatcher.tick_s):
                for event in dispatcher.tick():
                    print(f"  [{event.time:7.2f}s] {event.kind} {event.data}")

        ticker = threading.Thread(target=clock, daemon=True)
        ticker.start()
        print("jogcell REPL; type commands ('start robot' first), 'exit' to quit")
        try:
            for line in sys.stdin:
                line = line.strip()
                if line in ("exit", "quit"):
                    break
                if not line:
                    continue
                ack = dispatcher.submit(line)
                if ack.ok:
                    note = f" ({ack.enqueued} queued)" if ack.enqueued else ""
                    print(f"ok{note}")
                    for warning in ack.warnings:
                        print(f"  warning: {warning}")
                else:
                    print(f"rejected: {ack.diagnostic}")
        except KeyboardInterrupt:
            pass
        finally:
            stop_flag.set()
            ticker.join()
    return 0


def _cmd_serve(args) -> int:
    import uvicorn

    from .service import ServiceHost, build_app

    scene = load_scene(data.resolve("scene", args.scene)) if args.scene \
        else Scene()
    store_dir = args.store if args.store else "./jogcell_store"
    with contextlib.ExitStack() as stack:
        dispatcher = Dispatcher(scene, Store(store_dir),
                                aliases=_load_aliases(args),
                                tick_s=args.tick_ms / 1000.0,
                                log=_open_log(args.log, stack))
        host = ServiceHost(dispatcher)
        app = build_app(host, ui_dir=args.ui)
        uvicorn.run(app, host="127.0.0.1", port=args.port, log_level="warning")
    return 0


def build_parser() -> _Parser:
    parser = _Parser(prog="jogcell",
                     description="verbal-command robot workcell simulator")
    sub = parser.add_subparsers(dest="mode", required=True)

    def common(p):
        p.add_argument("--store", help="store directory (holds store.xml)")
        p.add_argument("--scene", help="scene file or bundled scene name")
        p.add_argument("--log", help="write a JSON-lines activity log")
        p.add_argument("--tick-ms", type=int, default=20,
                       help="simulation tick in milliseconds (default 20)")
        p.add_argument("--aliases", help="alias table file (surface canonical)")

    repl = sub.add_parser("repl", help="interactive session on stdin")
    common(repl)
    replay = sub.add_parser("replay", help="run a transcript and report")
    replay.add_argument("transcript",
                        help="transcript file or bundled transcript name")
    replay.add_argument("--assert", dest="assert_file",
                        help="expected final poses to check")
    common(replay)
    serve = sub.add_parser("serve", help="host the operator console")
    serve.add_argument("--port", type=int, default=DEFAULT_PORT)
    serve.add_argument("--ui", help="directory with the built console bundle")
    common(serve)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except UsageError as err:
        print(f"usage error: {err}", file=sys.stderr)
        return 1
    handlers = {"repl": _cmd_repl, "replay": _cmd_replay, "serve": _cmd_serve}
    try:
        return handlers[args.mode](args)
    except (FileNotFoundError, ValueError, RuntimeError) as err:
        print(f"error: {err}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
