import pytest

from jogcell.sim import (
    GRASP_Z_WINDOW,
    Pose,
    Scene,
    SceneObject,
    Workcell,
    Workspace,
    load_scene,
)


def cell_with(*objects, home=Pose(400.0, 0.0, 300.0)):
    return Workcell(Scene(home=home, objects=list(objects)))


def test_displacement_identity():
    cell = cell_with()
    before = cell.pose
    assert cell.apply_displacement((0.0, 0.0, 0.0)) == []
    assert cell.pose == before


def test_displacement_moves_and_clamps():
    cell = cell_with(home=Pose(400.0, 0.0, 100.0))
    events = cell.apply_displacement((0.0, 0.0, -300.0))
    assert cell.pose.z == 0.0
    assert events and events[0][0] == "warning"
    assert events[0][1]["reason"] == "boundary"


def test_clamp_respects_held_object_height():
    obj = SceneObject("part", 400.0, 0.0, 0.0, height=20.0)
    cell = cell_with(obj, home=Pose(400.0, 0.0, 20.0))
    cell.close_gripper()
    assert cell.held == "part"
    cell.apply_displacement((0.0, 0.0, -300.0))
    # Gripper stops where the object's base reaches the table.
    assert cell.objects["part"].z == 0.0
    assert cell.pose.z == 20.0


def test_grasp_at_zero_distance():
    obj = SceneObject("part", 400.0, 0.0, 0.0, height=20.0)
    cell = cell_with(obj, home=Pose(400.0, 0.0, 20.0))
    events = cell.close_gripper()
    assert ("grasped", {"object": "part"}) in events
    assert cell.pose.gripper == 0.0


def test_grasp_window_boundary():
    # 9 mm above the object's top, radius 15: inside the window.
    obj = SceneObject("part", 400.0, 0.0, 0.0, height=20.0, radius=15.0)
    cell = cell_with(obj, home=Pose(400.0, 0.0, 29.0))
    assert cell.close_gripper()
    assert cell.held == "part"


def test_grasp_outside_window_misses():
    obj = SceneObject("part", 400.0, 0.0, 0.0, height=20.0)
    cell = cell_with(obj, home=Pose(400.0, 0.0, 20.0 + GRASP_Z_WINDOW))
    assert cell.close_gripper() == []
    assert cell.held is None
    assert cell.pose.gripper == 0.0


def test_grasp_tie_breaks_lexicographically():
    a = SceneObject("a", 400.0, 10.0, 0.0, height=20.0)
    b = SceneObject("b", 400.0, -10.0, 0.0, height=20.0)
    cell = cell_with(a, b, home=Pose(400.0, 0.0, 20.0))
    cell.close_gripper()
    assert cell.held == "a"


def test_release_falls_to_table():
    obj = SceneObject("part", 400.0, 0.0, 0.0, height=20.0)
    cell = cell_with(obj, home=Pose(400.0, 0.0, 20.0))
    cell.close_gripper()
    cell.apply_displacement((0.0, 0.0, 180.0))
    events = cell.open_gripper()
    assert cell.objects["part"].z == 0.0
    assert cell.held is None
    assert ("released", {"object": "part", "rest_z": 0.0}) in events


def test_release_lands_on_support():
    base = SceneObject("base", 400.0, 0.0, 0.0, height=40.0, radius=30.0)
    part = SceneObject("part", 200.0, 0.0, 0.0, height=20.0)
    cell = cell_with(base, part, home=Pose(200.0, 0.0, 20.0))
    cell.close_gripper()
    assert cell.held == "part"
    cell.move_to(400.0, 0.0, 200.0)
    cell.open_gripper()
    assert cell.objects["part"].z == 40.0


def test_open_with_nothing_held_is_noop():
    cell = cell_with()
    cell.close_gripper()
    assert cell.open_gripper() == []
    assert cell.pose.gripper == 1.0


def test_pick_then_place_restores_object_pose():
    cell = cell_with(SceneObject("part", 420.0, 5.0, 0.0, height=20.0),
                     home=Pose(415.0, 0.0, 20.0))
    cell.close_gripper()
    assert cell.held == "part"
    cell.apply_displacement((10.0, -20.0, 50.0))
    cell.apply_displacement((-10.0, 20.0, -50.0))
    cell.open_gripper()
    obj = cell.objects["part"]
    assert (obj.x, obj.y, obj.z) == (420.0, 5.0, 0.0)


def test_rotation_wraps():
    cell = cell_with()
    cell.rotate_tool(90.0)
    assert cell.pose.rotation == 90.0
    cell.rotate_tool(-100.0)
    assert cell.pose.rotation == 350.0
    cell.rotate_tool(20.0)
    assert cell.pose.rotation == 10.0


def test_four_quarter_turns_restore_rotation():
    cell = cell_with()
    for _ in range(4):
        cell.rotate_tool(90.0)
    assert cell.pose.rotation == pytest.approx(0.0)


def test_held_object_rotates_with_tool():
    cell = cell_with(SceneObject("part", 410.0, 0.0, 0.0, height=20.0),
                     home=Pose(400.0, 0.0, 20.0))
    cell.close_gripper()
    cell.rotate_tool(90.0)
    obj = cell.objects["part"]
    assert obj.rotation == 90.0
    assert obj.x == pytest.approx(400.0)
    assert obj.y == pytest.approx(10.0)


def test_object_teleport_for_human_steps():
    cell = cell_with(SceneObject("part", 100.0, 0.0, 0.0))
    cell.set_object_pose("part", 200.0, 50.0, 30.0)
    obj = cell.objects["part"]
    assert (obj.x, obj.y, obj.z) == (200.0, 50.0, 30.0)
    with pytest.raises(KeyError):
        cell.set_object_pose("ghost", 0, 0, 0)


def test_containment_invariant_under_random_walk():
    import random

    rng = random.Random(7)
    obj = SceneObject("part", 400.0, 0.0, 0.0, height=20.0)
    cell = cell_with(obj, home=Pose(400.0, 0.0, 20.0))
    cell.close_gripper()
    ws = cell.workspace
    for _ in range(500):
        cell.apply_displacement((rng.uniform(-200, 200),
                                 rng.uniform(-200, 200),
                                 rng.uniform(-200, 200)))
        assert ws.x_min <= cell.pose.x <= ws.x_max
        assert ws.y_min <= cell.pose.y <= ws.y_max
        assert ws.z_min <= cell.pose.z <= ws.z_max
        for o in cell.objects.values():
            assert o.z >= ws.table_height
            assert ws.x_min <= o.x <= ws.x_max
            assert ws.y_min <= o.y <= ws.y_max


def test_object_attachment_is_exclusive():
    cell = cell_with(SceneObject("part", 400.0, 0.0, 0.0, height=20.0),
                     home=Pose(400.0, 0.0, 20.0))
    obj = cell.objects["part"]
    assert obj.attached_to == "table"
    cell.close_gripper()
    assert obj.attached_to == "gripper"
    cell.open_gripper()
    assert obj.attached_to == "table"


def test_scene_file_roundtrip(tmp_path):
    path = tmp_path / "cell.scene"
    path.write_text(
        '<scene>\n'
        '  <workspace xmin="0" xmax="500" ymin="-200" ymax="200"'
        ' zmin="0" zmax="400" table="0"/>\n'
        '  <home x="250" y="0" z="200" rotation="0" gripper="1.0"/>\n'
        '  <object name="gear1" x="100" y="50" z="0" radius="15" height="20"/>\n'
        '</scene>\n')
    scene = load_scene(path)
    assert scene.workspace == Workspace(0, 500, -200, 200, 0, 400, 0)
    assert scene.home == Pose(250.0, 0.0, 200.0, 0.0, 1.0)
    assert len(scene.objects) == 1
    assert scene.objects[0].name == "gear1"


def test_scene_rejects_duplicate_names(tmp_path):
    path = tmp_path / "bad.scene"
    path.write_text('<scene><object name="a"/><object name="a"/></scene>')
    with pytest.raises(ValueError):
        load_scene(path)


def test_snapshot_shape():
    obj = SceneObject("part", 100.0, 0.0, 0.0)
    cell = cell_with(obj)
    snap = cell.snapshot()
    assert snap["robot"]["x"] == 400.0
    assert snap["held"] is None
    assert snap["objects"][0]["name"] == "part"
