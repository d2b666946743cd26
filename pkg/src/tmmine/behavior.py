"""Behavioral model: chronology-of-events graph, stream enumeration, diffing."""

from __future__ import annotations

from dataclasses import dataclass, field

from .events import DynamicModel
from .model import ModelError, ModelSyntaxError, Report, _strip_comment

Edge = tuple[str, str]
Stream = tuple[str, ...]


@dataclass(frozen=True)
class BehavioralModel:
    name: str
    events: frozenset[str]
    edges: frozenset[Edge]
    starts: frozenset[str]
    ends: frozenset[str]
    dynamic_ref: str | None = None

    def successors(self) -> dict[str, list[str]]:
        out: dict[str, list[str]] = {e: [] for e in self.events}
        for src, dst in sorted(self.edges):
            out[src].append(dst)
        return out

    def with_additions(self, edges: set[Edge] = frozenset(),
                       starts: set[str] = frozenset(),
                       ends: set[str] = frozenset()) -> "BehavioralModel":
        for src, dst in edges:
            if src not in self.events or dst not in self.events:
                raise ModelError(f"unknown event in edge {src} -> {dst}")
        for e in set(starts) | set(ends):
            if e not in self.events:
                raise ModelError(f"unknown event {e}")
        return BehavioralModel(
            name=self.name,
            events=self.events,
            edges=self.edges | frozenset(edges),
            starts=self.starts | frozenset(starts),
            ends=self.ends | frozenset(ends),
            dynamic_ref=self.dynamic_ref,
        )


@dataclass(frozen=True)
class BehaviorDiff:
    events_only_a: frozenset[str]
    events_only_b: frozenset[str]
    edges_only_a: frozenset[Edge]
    edges_only_b: frozenset[Edge]
    starts_only_a: frozenset[str]
    starts_only_b: frozenset[str]
    ends_only_a: frozenset[str]
    ends_only_b: frozenset[str]

    @property
    def empty(self) -> bool:
        return not any((self.events_only_a, self.events_only_b,
                        self.edges_only_a, self.edges_only_b,
                        self.starts_only_a, self.starts_only_b,
                        self.ends_only_a, self.ends_only_b))

    @property
    def alphabet_mismatch(self) -> bool:
        return bool(self.events_only_a or self.events_only_b)

    def rows(self) -> list[tuple[str, str, str]]:
        """(kind, side, element) rows for the CSV report, sorted."""
        out = []
        for kind, side, elems in (
                ("event", "a", self.events_only_a),
                ("event", "b", self.events_only_b),
                ("start", "a", self.starts_only_a),
                ("start", "b", self.starts_only_b),
                ("end", "a", self.ends_only_a),
                ("end", "b", self.ends_only_b)):
            out += [(kind, side, e) for e in sorted(elems)]
        for side, edges in (("a", self.edges_only_a), ("b", self.edges_only_b)):
            out += [("edge", side, f"{s}->{t}") for s, t in sorted(edges)]
        return sorted(out)


@dataclass
class StreamEnumeration:
    streams: list[Stream]
    cyclic: bool = False
    truncated: bool = False

    def __len__(self) -> int:
        return len(self.streams)


def load_behavior(text: str, d: DynamicModel) -> BehavioralModel:
    """Parse behavior-DSL source (`behavior`, `start`, `end`, `edge` lines)
    against a dynamic model."""
    known = set(d.event_ids())
    name = None
    starts: set[str] = set()
    ends: set[str] = set()
    edges: set[Edge] = set()

    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = _strip_comment(raw).strip()
        if not line:
            continue
        words = line.split()
        keyword = words[0]
        if keyword == "behavior":
            if len(words) != 2:
                raise ModelSyntaxError("expected: behavior <name>", lineno)
            name = words[1]
        elif keyword in ("start", "end"):
            if len(words) != 2:
                raise ModelSyntaxError(f"expected: {keyword} <event-id>", lineno)
            eid = words[1]
            if eid not in known:
                raise ModelError(f"line {lineno}: unknown event {eid}")
            (starts if keyword == "start" else ends).add(eid)
        elif keyword == "edge":
            if len(words) != 4 or words[2] != "->":
                raise ModelSyntaxError("expected: edge <id> -> <id>", lineno)
            src, dst = words[1], words[3]
            for eid in (src, dst):
                if eid not in known:
                    raise ModelError(f"line {lineno}: unknown event {eid}")
            edges.add((src, dst))
        else:
            raise ModelSyntaxError(f"unknown keyword {keyword!r}", lineno)

    if name is None:
        raise ModelError("missing behavior line")
    if not starts:
        raise ModelError("empty start set")
    if not ends:
        raise ModelError("empty end set")
    return BehavioralModel(
        name=name,
        events=frozenset(known),
        edges=frozenset(edges),
        starts=frozenset(starts),
        ends=frozenset(ends),
        dynamic_ref=d.static_ref,
    )


def validate_behavior(b: BehavioralModel) -> Report:
    report = Report()
    if not b.starts:
        report.violations.append("empty start set")
    if not b.ends:
        report.violations.append("empty end set")
    succ = b.successors()
    reachable = set()
    stack = sorted(b.starts)
    while stack:
        node = stack.pop()
        if node in reachable:
            continue
        reachable.add(node)
        stack.extend(succ.get(node, []))
    for eid in sorted(b.events - reachable):
        report.warnings.append(f"event {eid} unreachable from any start")
    return report


def is_cyclic(b: BehavioralModel) -> bool:
    succ = b.successors()
    color: dict[str, int] = {}

    def visit(node: str) -> bool:
        color[node] = 1
        for nxt in succ.get(node, []):
            c = color.get(nxt, 0)
            if c == 1 or (c == 0 and visit(nxt)):
                return True
        color[node] = 2
        return False

    return any(color.get(e, 0) == 0 and visit(e) for e in sorted(b.events))


def enumerate_streams(b: BehavioralModel,
                      max_len: int | None = None) -> StreamEnumeration:
    """All simple start-to-end paths of length <= max_len, sorted
    lexicographically.  Default max_len is the event count."""
    if max_len is None:
        max_len = len(b.events)
    succ = b.successors()
    streams: list[Stream] = []
    truncated = False

    stack: list[tuple[str, ...]] = [(s,) for s in sorted(b.starts, reverse=True)]
    while stack:
        path = stack.pop()
        node = path[-1]
        if node in b.ends:
            streams.append(path)
        if len(path) >= max_len:
            if any(nxt not in path for nxt in succ.get(node, [])):
                truncated = True
            continue
        for nxt in sorted(succ.get(node, []), reverse=True):
            if nxt not in path:
                stack.append(path + (nxt,))
    streams.sort()
    return StreamEnumeration(streams=streams, cyclic=is_cyclic(b),
                             truncated=truncated)


def diff_behaviors(a: BehavioralModel, b: BehavioralModel) -> BehaviorDiff:
    """Exact set differences between two behavioral models."""
    return BehaviorDiff(
        events_only_a=frozenset(a.events - b.events),
        events_only_b=frozenset(b.events - a.events),
        edges_only_a=frozenset(a.edges - b.edges),
        edges_only_b=frozenset(b.edges - a.edges),
        starts_only_a=frozenset(a.starts - b.starts),
        starts_only_b=frozenset(b.starts - a.starts),
        ends_only_a=frozenset(a.ends - b.ends),
        ends_only_b=frozenset(b.ends - a.ends),
    )


def render_behavior(b: BehavioralModel,
                    provenance: dict[object, str] | None = None) -> str:
    """Canonical behavior-DSL text.  provenance maps an element (edge tuple
    or event id) to a comment appended to its line."""
    provenance = provenance or {}

    def note(key: object) -> str:
        return f"  # {provenance[key]}" if key in provenance else ""

    lines = [f"behavior {b.name}"]
    for eid in sorted(b.starts):
        lines.append(f"start {eid}{note(('start', eid))}")
    for eid in sorted(b.ends):
        lines.append(f"end {eid}{note(('end', eid))}")
    for src, dst in sorted(b.edges):
        lines.append(f"edge {src} -> {dst}{note((src, dst))}")
    return "\n".join(lines) + "\n"


def export_behavior_dot(b: BehavioralModel,
                        diff: BehaviorDiff | None = None) -> str:
    """DOT rendering: one node per event, start nodes bold, end nodes
    doublecircle.  With a diff, elements of this model that are on the
    b-side of the diff are highlighted red."""
    added_edges = diff.edges_only_b if diff else frozenset()
    added_starts = diff.starts_only_b if diff else frozenset()
    added_ends = diff.ends_only_b if diff else frozenset()

    lines = [f'digraph "{b.name}" {{', "  rankdir=LR;",
             "  node [shape=circle];"]
    for eid in sorted(b.events):
        attrs = []
        if eid in b.ends:
            attrs.append("shape=doublecircle")
        if eid in b.starts:
            attrs.append("style=bold")
        if eid in added_starts or eid in added_ends:
            attrs.append("color=red")
        suffix = f' [{", ".join(attrs)}]' if attrs else ""
        lines.append(f'  "{eid}"{suffix};')
    for src, dst in sorted(b.edges):
        style = " [color=red]" if (src, dst) in added_edges else ""
        lines.append(f'  "{src}" -> "{dst}"{style};')
    lines.append("}")
    return "\n".join(lines) + "\n"
