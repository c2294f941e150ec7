"""Bundled scenes, transcripts, and expected end states for replays."""

from __future__ import annotations

from importlib.resources import files
from pathlib import Path


def _bundled(kind: str, name: str, suffix: str) -> Path:
    if not name.endswith(suffix):
        name += suffix
    return Path(str(files("jogcell.data") / kind / name))


def transcript_path(name: str) -> Path:
    return _bundled("transcripts", name, ".txt")


def scene_path(name: str) -> Path:
    return _bundled("scenes", name, ".scene")


def assert_path(name: str) -> Path:
    return _bundled("asserts", name, ".txt")


def resolve(kind: str, name: str | Path) -> Path:
    """A real file path wins; otherwise fall back to the bundled data."""
    path = Path(name)
    if path.exists():
        return path
    lookup = {"transcript": transcript_path, "scene": scene_path,
              "assert": assert_path}[kind]
    bundled = lookup(str(name))
    if bundled.exists():
        return bundled
    raise FileNotFoundError(f"no such {kind}: {name}")
