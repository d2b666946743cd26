"""Workspace: the set of artifact files a CLI invocation operates on."""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

from .behavior import BehavioralModel, load_behavior, validate_behavior
from .conformance import ActivityMapping, load_mapping
from .events import DynamicModel, load_events, validate_regions
from .model import ModelError, Report, StaticModel, parse_model, validate_static


@dataclass
class Workspace:
    model_path: Path
    events_path: Path | None = None
    behavior_path: Path | None = None
    mapping_path: Path | None = None

    @classmethod
    def discover(cls, directory: str | Path, model: str | None = None,
                 events: str | None = None, behavior: str | None = None,
                 mapping: str | None = None) -> "Workspace":
        """Find workspace files in a directory; explicit paths win.  With
        several candidates for one role, the alphabetically first is used."""
        directory = Path(directory)

        def pick(suffix: str, override: str | None) -> Path | None:
            if override:
                return Path(override)
            found = sorted(directory.glob(f"*{suffix}"))
            return found[0] if found else None

        model_path = pick(".tm", model)
        if model_path is None:
            raise ModelError(f"no .tm model file in {directory}")
        return cls(
            model_path=model_path,
            events_path=pick(".ev", events),
            behavior_path=pick(".bh", behavior),
            mapping_path=pick(".map", mapping),
        )

    def load(self) -> "LoadedWorkspace":
        static = parse_model(self.model_path.read_text())
        dynamic = None
        behavior = None
        mapping = None
        if self.events_path is not None:
            dynamic = load_events(self.events_path.read_text(), static)
        if self.behavior_path is not None:
            if dynamic is None:
                raise ModelError("behavior file requires an events file")
            behavior = load_behavior(self.behavior_path.read_text(), dynamic)
        if self.mapping_path is not None:
            if dynamic is None:
                raise ModelError("mapping file requires an events file")
            mapping = load_mapping(self.mapping_path.read_text(), dynamic)
        return LoadedWorkspace(static=static, dynamic=dynamic,
                               behavior=behavior, mapping=mapping)


@dataclass
class LoadedWorkspace:
    static: StaticModel
    dynamic: DynamicModel | None = None
    behavior: BehavioralModel | None = None
    mapping: ActivityMapping | None = None

    def validate(self) -> Report:
        report = validate_static(self.static)
        if self.dynamic is not None:
            report.extend(validate_regions(self.dynamic, self.static))
        if self.behavior is not None:
            report.extend(validate_behavior(self.behavior))
        return report

    def require_behavior(self) -> BehavioralModel:
        if self.behavior is None:
            raise ModelError("workspace has no behavior (.bh) file")
        return self.behavior
