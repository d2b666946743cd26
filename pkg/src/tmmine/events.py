"""Dynamic model: named events, each a region (subgraph) of the static model."""

from __future__ import annotations

from dataclasses import dataclass, field

from .model import (
    FlowArc,
    ModelError,
    ModelSyntaxError,
    Report,
    StaticModel,
    _strip_comment,
)


@dataclass(frozen=True)
class EventDef:
    id: str
    label: str = ""
    region_stages: frozenset[str] = frozenset()
    region_flows: tuple[FlowArc, ...] = ()
    observable: bool = True


@dataclass(frozen=True)
class DynamicModel:
    static_ref: str
    events: tuple[EventDef, ...]

    def event_ids(self) -> list[str]:
        return [e.id for e in self.events]

    def event(self, event_id: str) -> EventDef:
        for e in self.events:
            if e.id == event_id:
                return e
        raise ModelError(f"unknown event {event_id}")


def _parse_arc_list(text: str, lineno: int) -> list[tuple[str, str]]:
    arcs = []
    for chunk in text.split(","):
        chunk = chunk.strip()
        if not chunk:
            continue
        if "->" not in chunk:
            raise ModelSyntaxError(f"bad arc {chunk!r}, expected a -> b", lineno)
        src, dst = (part.strip() for part in chunk.split("->", 1))
        if not src or not dst:
            raise ModelSyntaxError(f"bad arc {chunk!r}", lineno)
        arcs.append((src, dst))
    return arcs


def load_events(text: str, m: StaticModel) -> DynamicModel:
    """Parse events-DSL source against a static model.

    Grammar per event:
        event <id> "<label>" [silent]
        region <stage>[, <stage> ...]
        arcs <a> -> <b>[, ...]          (optional)
    """
    known_stages = m.stage_ids()
    known_flows = set(m.flows)
    known_triggers = {(t.src, t.dst) for t in m.triggers}

    events: list[EventDef] = []
    seen: set[str] = set()
    current: dict | None = None

    def close(lineno: int) -> None:
        nonlocal current
        if current is None:
            return
        if not current["stages"]:
            raise ModelError(
                f"line {current['line']}: event {current['id']} has an "
                f"empty region")
        events.append(EventDef(
            id=current["id"],
            label=current["label"],
            region_stages=frozenset(current["stages"]),
            region_flows=tuple(current["arcs"]),
            observable=current["observable"],
        ))
        current = None

    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = _strip_comment(raw).strip()
        if not line:
            continue
        keyword, _, rest = line.partition(" ")
        rest = rest.strip()
        if keyword == "event":
            close(lineno)
            words = rest.split(None, 1)
            if not words:
                raise ModelSyntaxError("expected: event <id> \"<label>\"", lineno)
            eid = words[0]
            if eid in seen:
                raise ModelError(f"line {lineno}: duplicate event {eid}")
            seen.add(eid)
            label, observable = "", True
            if len(words) == 2:
                tail = words[1].strip()
                if tail.endswith(" silent"):
                    observable = False
                    tail = tail[: -len(" silent")].strip()
                elif tail == "silent":
                    observable = False
                    tail = ""
                if tail:
                    if not (tail.startswith('"') and tail.endswith('"')):
                        raise ModelSyntaxError("event label must be quoted", lineno)
                    label = tail[1:-1]
            current = {"id": eid, "label": label, "observable": observable,
                       "stages": [], "arcs": [], "line": lineno}
        elif keyword == "region":
            if current is None:
                raise ModelSyntaxError("region before any event", lineno)
            for sid in (s.strip() for s in rest.split(",")):
                if not sid:
                    continue
                if sid not in known_stages:
                    raise ModelError(
                        f"line {lineno}: unknown stage {sid} in region of "
                        f"{current['id']}")
                current["stages"].append(sid)
        elif keyword == "arcs":
            if current is None:
                raise ModelSyntaxError("arcs before any event", lineno)
            for src, dst in _parse_arc_list(rest, lineno):
                arc = FlowArc(src, dst)
                if arc not in known_flows and (src, dst) not in known_triggers:
                    raise ModelError(
                        f"line {lineno}: unknown arc {src} -> {dst} in "
                        f"event {current['id']}")
                current["arcs"].append(arc)
        else:
            raise ModelSyntaxError(f"unknown keyword {keyword!r}", lineno)
    close(-1)
    return DynamicModel(static_ref=m.name, events=tuple(events))


def _connected(e: EventDef) -> bool:
    stages = sorted(e.region_stages)
    if len(stages) <= 1:
        return True
    adjacency: dict[str, set[str]] = {s: set() for s in stages}
    for arc in e.region_flows:
        if arc.src in adjacency and arc.dst in adjacency:
            adjacency[arc.src].add(arc.dst)
            adjacency[arc.dst].add(arc.src)
    seen = {stages[0]}
    stack = [stages[0]]
    while stack:
        for nxt in adjacency[stack.pop()]:
            if nxt not in seen:
                seen.add(nxt)
                stack.append(nxt)
    return len(seen) == len(stages)


def validate_regions(d: DynamicModel, m: StaticModel,
                     strict_overlap: bool = False) -> Report:
    """Violations for disconnected regions; warnings for overlaps and for
    stages no region covers.  strict_overlap promotes overlaps to violations."""
    report = Report()
    for e in d.events:
        if not _connected(e):
            report.violations.append(
                f"disconnected region: event {e.id}")
    owner: dict[str, str] = {}
    for e in d.events:
        for sid in sorted(e.region_stages):
            if sid in owner:
                msg = (f"stage {sid} shared by events {owner[sid]} and {e.id}")
                if strict_overlap:
                    report.violations.append("overlap: " + msg)
                else:
                    report.warnings.append("overlap: " + msg)
            else:
                owner[sid] = e.id
    for sid in sorted(m.stage_ids() - owner.keys()):
        report.warnings.append(f"stage {sid} covered by no region")
    return report


def export_dynamic_dot(d: DynamicModel, m: StaticModel) -> str:
    """Static-model DOT with one cluster per event region; stages outside
    every region sit at top level."""
    assigned: dict[str, str] = {}
    for e in d.events:
        for sid in e.region_stages:
            assigned.setdefault(sid, e.id)

    kind = {s.id: s.kind.value for s in m.stages}
    lines = [f'digraph "{m.name}_dynamic" {{', "  rankdir=LR;",
             "  node [shape=box];"]
    for e in d.events:
        label = f"{e.id}: {e.label}" if e.label else e.id
        if not e.observable:
            label += " (silent)"
        lines.append(f'  subgraph "cluster_{e.id}" {{')
        lines.append(f'    label="{label}";')
        if not e.observable:
            lines.append("    style=dashed;")
        for sid in sorted(e.region_stages):
            if assigned[sid] == e.id:
                lines.append(f'    "{sid}" [label="{kind[sid]}"];')
        lines.append("  }")
    for s in sorted(m.stages, key=lambda x: x.id):
        if s.id not in assigned:
            lines.append(f'  "{s.id}" [label="{kind[s.id]}"];')
    for arc in sorted(m.flows, key=lambda a: (a.src, a.dst)):
        lines.append(f'  "{arc.src}" -> "{arc.dst}";')
    for arc in sorted(m.triggers, key=lambda a: (a.src, a.dst)):
        lines.append(f'  "{arc.src}" -> "{arc.dst}" [style=dashed];')
    lines.append("}")
    return "\n".join(lines) + "\n"
