"""Persistent registry of named poses, recorded tasks, and position lists.

Everything lives in one human-editable XML file (`store.xml` in the store
directory), rewritten atomically (temp file + rename) after every
mutation.  Task bodies are stored as command text and re-parsed on load,
which keeps the file editable and independent of AST details.  Pose,
task, and list names are three separate namespaces.
"""

from __future__ import annotations

import os
import tempfile
import xml.etree.ElementTree as ET
from dataclasses import dataclass
from pathlib import Path

from .lexicon import normalize
from .parser import (
    Command,
    RecordFinish,
    RecordStart,
    parse,
    render_command,
)
from .sim import Pose

STORE_FILENAME = "store.xml"


class StoreError(Exception):
    pass


class UnknownName(StoreError):
    def __init__(self, kind: str, name: str):
        super().__init__(f"no {kind} named '{name}'")
        self.kind = kind
        self.name = name


class EmptyList(StoreError):
    def __init__(self, name: str):
        super().__init__(f"position list '{name}' is empty")
        self.name = name


class StorageFailure(StoreError):
    pass


@dataclass(frozen=True)
class TaskDefinition:
    """A named, ordered list of recorded commands."""

    name: str
    commands: tuple[Command, ...]

    def __post_init__(self):
        if not self.name:
            raise ValueError("task needs a name")
        if not self.commands:
            raise ValueError("task needs at least one command")
        for cmd in self.commands:
            if isinstance(cmd, (RecordStart, RecordFinish)):
                raise ValueError("recording cannot nest")


def _format_mm(value: float) -> str:
    # One decimal: below that is under the simulation's resolution.
    return f"{value:.1f}"


class Store:
    """All lookups hit memory; every mutation rewrites the file."""

    def __init__(self, directory: str | Path):
        self.directory = Path(directory)
        self.path = self.directory / STORE_FILENAME
        self.poses: dict[str, Pose] = {}
        self.tasks: dict[str, TaskDefinition] = {}
        self.lists: dict[str, list[str]] = {}
        if self.path.exists():
            self._load()

    # -- poses ---------------------------------------------------------------

    def save_pose(self, name: str, pose: Pose) -> None:
        if not name:
            raise ValueError("pose needs a name")
        self.poses[name] = pose
        self._write()

    def lookup_pose(self, name: str) -> Pose:
        try:
            return self.poses[name]
        except KeyError:
            raise UnknownName("position", name) from None

    # -- tasks ---------------------------------------------------------------

    def save_task(self, task: TaskDefinition) -> None:
        self.tasks[task.name] = task
        self._write()

    def lookup_task(self, name: str) -> TaskDefinition:
        try:
            return self.tasks[name]
        except KeyError:
            raise UnknownName("task", name) from None

    # -- position lists -------------------------------------------------------

    def save_list(self, name: str, pose_names: list[str]) -> None:
        if not name:
            raise ValueError("list needs a name")
        self.lists[name] = list(pose_names)
        self._write()

    def lookup_list(self, name: str) -> list[str]:
        try:
            return list(self.lists[name])
        except KeyError:
            raise UnknownName("list", name) from None

    def list_add(self, name: str, pose_name: str) -> None:
        self.lists.setdefault(name, []).append(pose_name)
        self._write()

    def pop_front(self, name: str) -> str:
        if name not in self.lists:
            raise UnknownName("list", name)
        entries = self.lists[name]
        if not entries:
            raise EmptyList(name)
        front = entries.pop(0)
        self._write()
        return front

    # -- persistence -----------------------------------------------------------

    def serialize(self) -> str:
        root = ET.Element("store", version="1")
        for name in sorted(self.poses):
            pose = self.poses[name]
            el = ET.SubElement(root, "position", name=name)
            ET.SubElement(el, "xyz", x=_format_mm(pose.x), y=_format_mm(pose.y),
                          z=_format_mm(pose.z))
            ET.SubElement(el, "tool", rotation=_format_mm(pose.rotation),
                          gripper=_format_mm(pose.gripper))
        for name in sorted(self.tasks):
            el = ET.SubElement(root, "task", name=name)
            for cmd in self.tasks[name].commands:
                ET.SubElement(el, "cmd").text = render_command(cmd)
        for name in sorted(self.lists):
            el = ET.SubElement(root, "list", name=name)
            for pose_name in self.lists[name]:
                ET.SubElement(el, "ref", name=pose_name)
        ET.indent(root)
        return ET.tostring(root, encoding="unicode") + "\n"

    def _write(self) -> None:
        try:
            self.directory.mkdir(parents=True, exist_ok=True)
            fd, tmp_name = tempfile.mkstemp(
                dir=self.directory, prefix=".store-", suffix=".tmp")
            try:
                with os.fdopen(fd, "w", encoding="utf-8", newline="\n") as fh:
                    fh.write(self.serialize())
                os.replace(tmp_name, self.path)
            except BaseException:
                os.unlink(tmp_name)
                raise
        except OSError as err:
            raise StorageFailure(f"cannot write {self.path}: {err}") from err

    def _load(self) -> None:
        try:
            root = ET.parse(str(self.path)).getroot()
        except (OSError, ET.ParseError) as err:
            raise StorageFailure(f"cannot read {self.path}: {err}") from err
        if root.tag != "store":
            raise StorageFailure(f"{self.path} is not a store file")
        for el in root.findall("position"):
            xyz = el.find("xyz")
            tool = el.find("tool")
            if el.get("name") is None or xyz is None or tool is None:
                raise StorageFailure(f"malformed position element in {self.path}")
            self.poses[el.get("name")] = Pose(
                x=float(xyz.get("x", 0.0)),
                y=float(xyz.get("y", 0.0)),
                z=float(xyz.get("z", 0.0)),
                rotation=float(tool.get("rotation", 0.0)),
                gripper=float(tool.get("gripper", 1.0)),
            )
        for el in root.findall("task"):
            name = el.get("name")
            if not name:
                raise StorageFailure(f"task without name in {self.path}")
            commands = []
            for cmd_el in el.findall("cmd"):
                text = (cmd_el.text or "").strip()
                try:
                    commands.append(parse(normalize(text)))
                except Exception as err:
                    raise StorageFailure(
                        f"bad command {text!r} in task '{name}': {err}") from err
            self.tasks[name] = TaskDefinition(name, tuple(commands))
        for el in root.findall("list"):
            name = el.get("name")
            if not name:
                raise StorageFailure(f"list without name in {self.path}")
            self.lists[name] = [ref.get("name", "") for ref in el.findall("ref")]
