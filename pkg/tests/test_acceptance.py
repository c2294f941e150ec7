"""End-to-end acceptance checks.

Run with `pytest tests/test_acceptance.py -v -s` to see one PASS line per
criterion.  Every tolerance is pinned here, not configurable.
"""

import os
import random
import time

import pytest

from jogcell import parser as p
from jogcell.cli import replay_transcript
from jogcell.data import transcript_path
from jogcell.dispatcher import Dispatcher
from jogcell.engine import fuse
from jogcell.lexicon import default_aliases, normalize
from jogcell.sim import AXIS, Pose, Scene, Workcell
from jogcell.store import Store, StorageFailure, TaskDefinition


def test_composition_equivalence(tmp_path):
    """27, 19, and 1 command replays reach the same end state."""
    started = time.monotonic()
    store = tmp_path / "store"  # shared: poses taught once, task reused
    reports = [replay_transcript(name, "pickplace", store_dir=store)
               for name in ("pickplace_27", "pickplace_19", "pickplace_task")]
    elapsed = time.monotonic() - started

    for report, expected in zip(reports, (27, 19, 1)):
        assert report.commands == expected
        assert report.accepted == expected
        assert report.rejected == 0

    reference = reports[0].final_state
    for report in reports[1:]:
        state = report.final_state
        for axis in ("x", "y", "z", "rotation", "gripper"):
            assert abs(state["robot"][axis]
                       - reference["robot"][axis]) <= 1e-9
        for got, want in zip(state["objects"], reference["objects"]):
            assert got["name"] == want["name"]
            for axis in ("x", "y", "z", "rotation"):
                assert abs(got[axis] - want[axis]) <= 1e-9

    assert elapsed < 5.0, f"replays took {elapsed:.2f} s"
    print("\nPASS: composition equivalence (27/19/1 commands, end states "
          f"equal to 1e-9 mm, {elapsed:.2f} s)")


# Every published command phrasing with concretized values: one line per
# basic and hierarchical command form, plus the walkthrough strings.
GRAMMAR_CORPUS = [
    "start robot", "stop robot",
    "move up", "move down", "move left", "move right", "move back",
    "move front",
    "stop execution", "step size 20", "open tool", "close tool",
    "rotate tool 90", "save position pick", "load position pick", "home",
    "set mode step", "set mode continuous",
    "position pick", "up 20", "down 300 mm", "left 300 mm", "right 40",
    "back 200 mm", "front 50", "step size low", "open", "close", "rotate 90",
    "record one", "finish", "task one", "repeat one 3",
    "repeat one continuous", "repeat wipe spots", "pick part", "place top",
    "stack table distance fifty", "push gears front", "again",
    "down then down then left 200 mm", "pick part and place top",
    "hold table distance thirty", "forward ninety", "down three",
    "place gear three",
]


def test_grammar_coverage():
    """The full command vocabulary is accepted, 100% of the corpus."""
    assert len(GRAMMAR_CORPUS) >= 30
    aliases = default_aliases()
    rejected = []
    for line in GRAMMAR_CORPUS:
        outcome = p.try_parse(normalize(line, aliases))
        if not outcome.ok:
            rejected.append((line, outcome.diagnostic))
    assert not rejected, rejected
    print(f"\nPASS: grammar coverage ({len(GRAMMAR_CORPUS)} lines, "
          "100% accepted)")


def test_fusion_property():
    """1000 random fused moves equal their sequential execution exactly."""
    rng = random.Random(4242)
    directions = list(AXIS)
    for trial in range(1000):
        step = float(rng.randint(1, 40))
        moves = tuple(
            p.DirectionalMove(rng.choice(directions),
                              rng.randint(1, 40) if rng.random() < 0.6
                              else None)
            for _ in range(rng.randint(2, 6)))

        sequential = Workcell(Scene())
        for move in moves:
            magnitude = float(move.magnitude if move.magnitude is not None
                              else step)
            ax, ay, az = AXIS[move.direction]
            sequential.apply_displacement(
                (ax * magnitude, ay * magnitude, az * magnitude))

        fused = Workcell(Scene())
        fused.apply_displacement(fuse(p.FusedMove(moves), step))

        assert fused.pose == sequential.pose, f"trial {trial}: {moves}"
    print("\nPASS: fusion property (1000 randomized sequences, exact)")


def test_preemption_latency(tmp_path):
    """A stop lands within one tick whatever the queue length."""
    for queue_length in (1, 100, 10_000):
        dispatcher = Dispatcher(Scene(), Store(tmp_path / str(queue_length)),
                                start_running=True)
        for _ in range(queue_length):
            assert dispatcher.submit("up 1").ok
        dispatcher.tick()
        pose_before = dispatcher.cell.pose
        dispatcher.stop()
        events = dispatcher.tick()  # one tick: 20 ms simulated
        assert any(event.kind == "stopped" for event in events)
        assert not dispatcher.pending
        assert dispatcher.executing is None
        for _ in range(100):
            assert dispatcher.tick() == []
        assert dispatcher.cell.pose == pose_before
    print("\nPASS: preemption latency (queues of 1/100/10000, "
          "stop effective within one tick)")


_POOL = [
    p.Home(), p.OpenGripper(), p.CloseGripper(), p.DirectionalMove("down"),
    p.DirectionalMove("left", 200), p.SetStepSize(preset="high"),
    p.SetStepSize(size=25), p.MoveToPosition("pick"), p.SavePosition("place"),
    p.RotateTool(45), p.Pick("part"), p.Place("top"), p.Stack("table", 50),
    p.Hold("table", 30), p.Push("gears", "back", 60), p.RunTask("other"),
    p.Repeat("wipe", times=2), p.Repeat("wipe", list_name="spots"),
    p.Sequence((p.OpenGripper(), p.Home())),
    p.FusedMove((p.DirectionalMove("up"), p.DirectionalMove("front", 30))),
]


def _random_store(directory, rng: random.Random) -> Store:
    store = Store(directory)
    for i in range(rng.randint(0, 5)):
        store.poses[f"pose{i}"] = Pose(
            float(f"{rng.uniform(0, 800):.1f}"),
            float(f"{rng.uniform(-400, 400):.1f}"),
            float(f"{rng.uniform(0, 600):.1f}"),
            rotation=float(f"{rng.uniform(0, 359.9):.1f}"),
            gripper=float(f"{rng.random():.1f}"))
    for i in range(rng.randint(0, 4)):
        store.tasks[f"task{i}"] = TaskDefinition(
            f"task{i}",
            tuple(rng.choice(_POOL) for _ in range(rng.randint(1, 10))))
    for i in range(rng.randint(0, 3)):
        store.lists[f"list{i}"] = [f"pose{j}"
                                   for j in range(rng.randint(0, 6))]
    store._write()
    return store


def test_persistence_roundtrip(tmp_path, monkeypatch):
    """500 random stores survive serialize/parse; a crash keeps the old file."""
    rng = random.Random(9099)
    for trial in range(500):
        directory = tmp_path / f"store{trial % 8}"
        store = _random_store(directory, rng)
        reloaded = Store(directory)
        assert reloaded.poses == store.poses, f"trial {trial}"
        assert reloaded.tasks == store.tasks, f"trial {trial}"
        assert reloaded.lists == store.lists, f"trial {trial}"

    crash_dir = tmp_path / "crash"
    store = Store(crash_dir)
    store.save_pose("keep", Pose(1.0, 2.0, 3.0))

    def injected(src, dst):
        raise OSError("crash between temp write and rename")

    monkeypatch.setattr(os, "replace", injected)
    with pytest.raises(StorageFailure):
        store.save_pose("lost", Pose(9.0, 9.0, 9.0))
    monkeypatch.undo()
    assert Store(crash_dir).lookup_pose("keep") == Pose(1.0, 2.0, 3.0)
    print("\nPASS: persistence round-trip (500 stores) and crash safety")


def test_assembly_scripts(tmp_path):
    """Both gear assemblies finish with parts on their scripted targets."""
    helical = replay_transcript("helical", "helical_gear",
                                store_dir=tmp_path / "helical",
                                assert_file="helical")
    assert helical.rejected == 0
    assert helical.ok, helical.assert_failures  # tolerance 1.0 mm in the file
    helical_steps = transcript_path("helical").read_text().count("# step")
    assert helical_steps == 6

    planetary = replay_transcript("planetary", "planetary_gear",
                                  store_dir=tmp_path / "planetary",
                                  assert_file="planetary")
    assert planetary.rejected == 0
    assert planetary.ok, planetary.assert_failures
    assert planetary.human_steps == 3
    planetary_steps = transcript_path("planetary").read_text() \
        .count("# robot step")
    assert planetary_steps == 6
    print("\nPASS: assembly scripts (helical 6/6 automated steps; planetary "
          "6 robot steps + 3 scripted human steps; parts within 1 mm)")


def test_repeat_over_list(tmp_path):
    """A 5-pose list drives exactly 5 expansions, then reports empty."""
    dispatcher = Dispatcher(Scene(), Store(tmp_path / "store"),
                            start_running=True)
    for i in range(5):
        dispatcher.store.save_pose(f"spot{i}",
                                   Pose(300.0 + 20 * i, 100.0, 200.0))
    dispatcher.store.save_task(TaskDefinition(
        "visit", (p.MoveToPosition("target"),)))
    dispatcher.store.save_list("spots", [f"spot{i}" for i in range(5)])

    ack = dispatcher.submit("repeat visit spots")
    assert ack.ok
    assert ack.enqueued == 5
    finished = []
    while not dispatcher.idle:
        finished += [e for e in dispatcher.tick()
                     if e.kind == "motionFinished"]
    assert len(finished) == 5
    assert dispatcher.store.lookup_list("spots") == []
    assert dispatcher.cell.pose.x == 380.0  # ended at the last spot

    sixth = dispatcher.submit("repeat visit spots")
    assert not sixth.ok
    assert "EmptyList" in sixth.diagnostic
    print("\nPASS: repeat-over-list (5 expansions, list emptied, "
          "6th reports EmptyList)")
