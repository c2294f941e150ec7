"""Deterministic kinematic workcell simulation.

End-effector pose integration with workspace clamping, a proximity-based
gripper grasp model, and straight-drop releases onto the table or onto
other objects.  No dynamics: grasping fidelity comes from the operator's
fine-grained commands, not from physics.

Conventions (used consistently by the whole package):
  front = +x, back = -x, left = +y, right = -y, up = +z, down = -z.
  An object's pose z is its base height; the gripper grasps near its top.
"""

from __future__ import annotations

import xml.etree.ElementTree as ET
from dataclasses import dataclass, field, replace
from math import cos, hypot, radians, sin
from pathlib import Path

AXIS = {
    "front": (1.0, 0.0, 0.0),
    "back": (-1.0, 0.0, 0.0),
    "left": (0.0, 1.0, 0.0),
    "right": (0.0, -1.0, 0.0),
    "up": (0.0, 0.0, 1.0),
    "down": (0.0, 0.0, -1.0),
}

# Vertical window around an object's top inside which a close() grasps.
GRASP_Z_WINDOW = 10.0


@dataclass(frozen=True)
class Pose:
    """End-effector pose: position in mm, tool rotation in degrees [0, 360),
    gripper aperture as a fraction (1 open, 0 closed)."""

    x: float
    y: float
    z: float
    rotation: float = 0.0
    gripper: float = 1.0


@dataclass(frozen=True)
class Workspace:
    x_min: float = 0.0
    x_max: float = 800.0
    y_min: float = -400.0
    y_max: float = 400.0
    z_min: float = 0.0
    z_max: float = 600.0
    table_height: float = 0.0

    def clamp(self, x: float, y: float, z: float,
              z_floor: float | None = None) -> tuple[float, float, float, bool]:
        """Clamp a point per axis; returns the point and whether it moved."""
        cx = min(max(x, self.x_min), self.x_max)
        cy = min(max(y, self.y_min), self.y_max)
        low = self.z_min if z_floor is None else max(self.z_min, z_floor)
        cz = min(max(z, low), self.z_max)
        return cx, cy, cz, (cx, cy, cz) != (x, y, z)


@dataclass
class SceneObject:
    """Rigid part on the table: a labeled cylinder-ish footprint."""

    name: str
    x: float
    y: float
    z: float            # base height
    rotation: float = 0.0
    radius: float = 15.0
    height: float = 20.0
    attached_to: str = "table"  # "table" | "gripper"

    @property
    def top(self) -> float:
        return self.z + self.height


DEFAULT_HOME = Pose(400.0, 0.0, 300.0, rotation=0.0, gripper=1.0)


@dataclass
class Scene:
    workspace: Workspace = field(default_factory=Workspace)
    home: Pose = DEFAULT_HOME
    objects: list[SceneObject] = field(default_factory=list)


def load_scene(path: str | Path) -> Scene:
    """Parse a scene file: <scene><workspace/><home/><object/>...</scene>."""
    root = ET.parse(str(path)).getroot()
    if root.tag != "scene":
        raise ValueError(f"not a scene file: {path}")
    scene = Scene()
    ws = root.find("workspace")
    if ws is not None:
        defaults = Workspace()
        scene.workspace = Workspace(
            x_min=float(ws.get("xmin", defaults.x_min)),
            x_max=float(ws.get("xmax", defaults.x_max)),
            y_min=float(ws.get("ymin", defaults.y_min)),
            y_max=float(ws.get("ymax", defaults.y_max)),
            z_min=float(ws.get("zmin", defaults.z_min)),
            z_max=float(ws.get("zmax", defaults.z_max)),
            table_height=float(ws.get("table", defaults.table_height)),
        )
    home = root.find("home")
    if home is not None:
        scene.home = Pose(
            x=float(home.get("x", DEFAULT_HOME.x)),
            y=float(home.get("y", DEFAULT_HOME.y)),
            z=float(home.get("z", DEFAULT_HOME.z)),
            rotation=float(home.get("rotation", 0.0)),
            gripper=float(home.get("gripper", 1.0)),
        )
    for obj in root.findall("object"):
        name = obj.get("name")
        if not name:
            raise ValueError("scene object without a name")
        scene.objects.append(SceneObject(
            name=name,
            x=float(obj.get("x", 0.0)),
            y=float(obj.get("y", 0.0)),
            z=float(obj.get("z", scene.workspace.table_height)),
            rotation=float(obj.get("rotation", 0.0)),
            radius=float(obj.get("radius", 15.0)),
            height=float(obj.get("height", 20.0)),
        ))
    names = [o.name for o in scene.objects]
    if len(names) != len(set(names)):
        raise ValueError("duplicate object names in scene")
    return scene


class Workcell:
    """Mutable simulation state: robot pose, held object, scene objects."""

    def __init__(self, scene: Scene):
        self.workspace = scene.workspace
        self.home = scene.home
        self.pose = scene.home
        self.objects: dict[str, SceneObject] = {
            o.name: replace(o) for o in scene.objects}
        self.held: str | None = None
        # Offset of the held object's pose relative to the gripper at grasp.
        self._grip_offset = (0.0, 0.0, 0.0)

    # -- motion ------------------------------------------------------------

    def _held_floor(self) -> float | None:
        """Lowest gripper z that keeps a held object's base on the table."""
        if self.held is None:
            return None
        return self.workspace.table_height - self._grip_offset[2]

    def move_to(self, x: float, y: float, z: float,
                rotation: float | None = None) -> list[tuple[str, dict]]:
        events: list[tuple[str, dict]] = []
        if self.held is not None:
            # Keep the held object inside the workspace too.
            ox, oy, oz = self._grip_offset
            x = min(max(x, self.workspace.x_min - ox), self.workspace.x_max - ox)
            y = min(max(y, self.workspace.y_min - oy), self.workspace.y_max - oy)
        cx, cy, cz, clamped = self.workspace.clamp(x, y, z, self._held_floor())
        new_rotation = self.pose.rotation if rotation is None else rotation % 360.0
        self.pose = replace(self.pose, x=cx, y=cy, z=cz, rotation=new_rotation)
        self._carry_held()
        if clamped:
            events.append(("warning", {"reason": "boundary",
                                       "pose": [cx, cy, cz]}))
        return events

    def apply_displacement(self, delta: tuple[float, float, float]
                           ) -> list[tuple[str, dict]]:
        dx, dy, dz = delta
        return self.move_to(self.pose.x + dx, self.pose.y + dy,
                            self.pose.z + dz)

    def clamp_target(self, x: float, y: float, z: float
                     ) -> tuple[float, float, float, bool]:
        """Where a motion toward (x, y, z) will actually end."""
        if self.held is not None:
            ox, oy, _oz = self._grip_offset
            x = min(max(x, self.workspace.x_min - ox), self.workspace.x_max - ox)
            y = min(max(y, self.workspace.y_min - oy), self.workspace.y_max - oy)
        cx, cy, cz, clamped = self.workspace.clamp(x, y, z, self._held_floor())
        return cx, cy, cz, clamped

    def _carry_held(self) -> None:
        if self.held is None:
            return
        obj = self.objects[self.held]
        obj.x = self.pose.x + self._grip_offset[0]
        obj.y = self.pose.y + self._grip_offset[1]
        obj.z = self.pose.z + self._grip_offset[2]

    # -- gripper -----------------------------------------------------------

    def close_gripper(self) -> list[tuple[str, dict]]:
        events: list[tuple[str, dict]] = []
        self.pose = replace(self.pose, gripper=0.0)
        if self.held is not None:
            return events
        best: SceneObject | None = None
        best_key: tuple[float, str] | None = None
        for obj in self.objects.values():
            if obj.attached_to != "table":
                continue
            d_xy = hypot(obj.x - self.pose.x, obj.y - self.pose.y)
            if d_xy >= obj.radius:
                continue
            if abs(self.pose.z - obj.top) >= GRASP_Z_WINDOW:
                continue
            key = (d_xy, obj.name)  # nearest first, ties by name
            if best_key is None or key < best_key:
                best, best_key = obj, key
        if best is not None:
            best.attached_to = "gripper"
            self.held = best.name
            self._grip_offset = (best.x - self.pose.x,
                                 best.y - self.pose.y,
                                 best.z - self.pose.z)
            events.append(("grasped", {"object": best.name}))
        return events

    def open_gripper(self) -> list[tuple[str, dict]]:
        events: list[tuple[str, dict]] = []
        self.pose = replace(self.pose, gripper=1.0)
        if self.held is None:
            return events
        obj = self.objects[self.held]
        obj.attached_to = "table"
        obj.z = self._support_height(obj)
        self.held = None
        self._grip_offset = (0.0, 0.0, 0.0)
        events.append(("released", {"object": obj.name,
                                    "rest_z": obj.z}))
        return events

    def _support_height(self, falling: SceneObject) -> float:
        """Top of the highest overlapping support under a dropped object."""
        level = self.workspace.table_height
        for other in self.objects.values():
            if other.name == falling.name or other.attached_to != "table":
                continue
            overlap = hypot(other.x - falling.x, other.y - falling.y) \
                < other.radius + falling.radius
            if overlap and other.top > level:
                level = other.top
        return level

    def rotate_tool(self, degrees: float) -> list[tuple[str, dict]]:
        self.pose = replace(self.pose,
                            rotation=(self.pose.rotation + degrees) % 360.0)
        if self.held is not None:
            # Rigid rotation about the tool axis: the grasp offset orbits.
            angle = radians(degrees)
            ox, oy, oz = self._grip_offset
            self._grip_offset = (ox * cos(angle) - oy * sin(angle),
                                 ox * sin(angle) + oy * cos(angle), oz)
            obj = self.objects[self.held]
            obj.rotation = (obj.rotation + degrees) % 360.0
            self._carry_held()
        return []

    def set_object_pose(self, name: str, x: float, y: float, z: float,
                        rotation: float | None = None) -> None:
        """Teleport an object: the stand-in for a human assembly action."""
        if name not in self.objects:
            raise KeyError(f"no such object: {name}")
        if self.held == name:
            raise ValueError(f"cannot move '{name}' while the robot holds it")
        obj = self.objects[name]
        obj.x, obj.y = x, y
        obj.z = max(z, self.workspace.table_height)
        if rotation is not None:
            obj.rotation = rotation % 360.0

    # -- introspection -----------------------------------------------------

    def snapshot(self) -> dict:
        """Plain-data view of the cell, cheap to serialize."""
        return {
            "robot": {
                "x": self.pose.x, "y": self.pose.y, "z": self.pose.z,
                "rotation": self.pose.rotation, "gripper": self.pose.gripper,
            },
            "held": self.held,
            "objects": [
                {
                    "name": o.name, "x": o.x, "y": o.y, "z": o.z,
                    "rotation": o.rotation, "radius": o.radius,
                    "height": o.height, "held": o.attached_to == "gripper",
                }
                for o in sorted(self.objects.values(), key=lambda o: o.name)
            ],
        }
