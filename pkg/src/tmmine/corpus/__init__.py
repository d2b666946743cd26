"""Access to the shipped corpus workspaces (licensing and ed)."""

from importlib import resources
from pathlib import Path

WORKSPACES = ("licensing", "ed")


def corpus_dir(name: str) -> Path:
    if name not in WORKSPACES:
        raise ValueError(f"unknown corpus workspace {name!r}")
    return Path(resources.files(__package__) / name)
