"""Static thinging-machine models: machines, stages, flow arcs and trigger arcs.

A machine is built from stages of five kinds (create, process, release,
transfer, receive).  Things move along solid flow arcs; dashed trigger arcs
start a new flow from a process or create stage.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum


class StageKind(Enum):
    CREATE = "create"
    PROCESS = "process"
    RELEASE = "release"
    TRANSFER = "transfer"
    RECEIVE = "receive"


# Legal successor kinds for a flow arc inside one machine.  The only legal
# arc between two machines is transfer -> transfer.
FLOW_ADJACENCY = {
    StageKind.CREATE: {StageKind.PROCESS, StageKind.RELEASE},
    StageKind.RECEIVE: {StageKind.PROCESS, StageKind.RELEASE},
    StageKind.PROCESS: {StageKind.RELEASE},
    StageKind.RELEASE: {StageKind.TRANSFER},
    StageKind.TRANSFER: {StageKind.RECEIVE},
}

TRIGGER_SOURCES = {StageKind.PROCESS, StageKind.CREATE}
TRIGGER_TARGETS = {StageKind.CREATE, StageKind.PROCESS}


class ModelError(Exception):
    """Semantic error in a model artifact (duplicate id, dangling reference)."""


class ModelSyntaxError(ModelError):
    """Malformed DSL input, with 1-based position information."""

    def __init__(self, message: str, line: int, column: int = 1):
        super().__init__(f"line {line}:{column}: {message}")
        self.line = line
        self.column = column


@dataclass
class Report:
    """Validation outcome.  Violations make the artifact unusable; warnings
    are advisory."""

    violations: list[str] = field(default_factory=list)
    warnings: list[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations

    def extend(self, other: "Report") -> None:
        self.violations.extend(other.violations)
        self.warnings.extend(other.warnings)

    def __str__(self) -> str:
        lines = [f"violation: {v}" for v in self.violations]
        lines += [f"warning: {w}" for w in self.warnings]
        return "\n".join(lines) if lines else "ok"


@dataclass(frozen=True)
class Machine:
    id: str
    label: str = ""
    parent: str | None = None


@dataclass(frozen=True)
class Stage:
    id: str
    kind: StageKind
    has_store: bool = False


@dataclass(frozen=True)
class FlowArc:
    src: str
    dst: str


@dataclass(frozen=True)
class TriggerArc:
    src: str
    dst: str


@dataclass(frozen=True)
class StaticModel:
    name: str
    machines: tuple[Machine, ...]
    stages: tuple[Stage, ...]
    flows: tuple[FlowArc, ...]
    triggers: tuple[TriggerArc, ...]

    def stage(self, stage_id: str) -> Stage:
        for s in self.stages:
            if s.id == stage_id:
                return s
        raise ModelError(f"unknown stage {stage_id}")

    def stage_ids(self) -> set[str]:
        return {s.id for s in self.stages}

    def machine_of(self, stage_id: str) -> str:
        """Machine owning a stage: the longest declared machine id that is a
        dotted prefix of the stage id."""
        best = ""
        for m in self.machines:
            if stage_id.startswith(m.id + ".") and len(m.id) > len(best):
                best = m.id
        if not best:
            raise ModelError(f"stage {stage_id} belongs to no declared machine")
        return best

    def flow_components(self) -> dict[str, int]:
        """Weakly connected components of the flow graph (flows only).
        Used by the trigger different-chain rule."""
        parent = {s.id: s.id for s in self.stages}

        def find(x: str) -> str:
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        for arc in self.flows:
            a, b = find(arc.src), find(arc.dst)
            if a != b:
                parent[a] = b
        roots = sorted({find(s.id) for s in self.stages})
        index = {r: i for i, r in enumerate(roots)}
        return {s.id: index[find(s.id)] for s in self.stages}


def _strip_comment(line: str) -> str:
    out = []
    in_quote = False
    for ch in line:
        if ch == '"':
            in_quote = not in_quote
        if ch == "#" and not in_quote:
            break
        out.append(ch)
    return "".join(out)


def parse_model(text: str) -> StaticModel:
    """Parse model-DSL source into a StaticModel.

    Raises ModelSyntaxError for malformed lines, ModelError for duplicate
    ids or dangling stage references.
    """
    name = None
    machines: dict[str, Machine] = {}
    stages: dict[str, Stage] = {}
    flows: list[FlowArc] = []
    triggers: list[TriggerArc] = []

    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = _strip_comment(raw).strip()
        if not line:
            continue
        words = line.split()
        keyword = words[0]
        if keyword == "model":
            if len(words) != 2:
                raise ModelSyntaxError("expected: model <name>", lineno)
            if name is not None:
                raise ModelSyntaxError("duplicate model line", lineno)
            name = words[1]
        elif keyword == "machine":
            if len(words) < 2:
                raise ModelSyntaxError("expected: machine <id> [\"label\"]", lineno)
            mid = words[1]
            if mid in machines:
                raise ModelError(f"line {lineno}: duplicate machine {mid}")
            label = ""
            rest = line.split(None, 2)
            if len(rest) == 3:
                label = rest[2].strip()
                if not (label.startswith('"') and label.endswith('"')):
                    raise ModelSyntaxError("machine label must be quoted", lineno)
                label = label[1:-1]
            machines[mid] = Machine(id=mid, label=label)
        elif keyword == "stage":
            if len(words) < 4 or words[2] != "kind":
                raise ModelSyntaxError(
                    "expected: stage <id> kind <kind> [store]", lineno)
            sid = words[1]
            if sid in stages:
                raise ModelError(f"line {lineno}: duplicate stage {sid}")
            try:
                kind = StageKind(words[3])
            except ValueError:
                raise ModelSyntaxError(f"unknown stage kind {words[3]!r}", lineno)
            store = False
            if len(words) == 5:
                if words[4] != "store":
                    raise ModelSyntaxError(f"unexpected token {words[4]!r}", lineno)
                store = True
            elif len(words) > 5:
                raise ModelSyntaxError("trailing tokens after stage", lineno)
            stages[sid] = Stage(id=sid, kind=kind, has_store=store)
        elif keyword in ("flow", "trigger"):
            arrow = "->" if keyword == "flow" else "~>"
            if len(words) != 4 or words[2] != arrow:
                raise ModelSyntaxError(
                    f"expected: {keyword} <stage> {arrow} <stage>", lineno)
            src, dst = words[1], words[3]
            for sid in (src, dst):
                if sid not in stages:
                    raise ModelError(
                        f"line {lineno}: unknown stage {sid} in {keyword}")
            if keyword == "flow":
                arc = FlowArc(src, dst)
                if arc in flows:
                    raise ModelError(f"line {lineno}: duplicate flow {src} -> {dst}")
                flows.append(arc)
            else:
                tarc = TriggerArc(src, dst)
                if tarc in triggers:
                    raise ModelError(
                        f"line {lineno}: duplicate trigger {src} ~> {dst}")
                triggers.append(tarc)
        else:
            raise ModelSyntaxError(f"unknown keyword {keyword!r}", lineno)

    if name is None:
        raise ModelError("missing model line")

    # Derive the machine forest from dotted ids: parent is the longest
    # declared proper prefix.
    resolved = {}
    for mid, m in machines.items():
        parent = None
        for other in machines:
            if other != mid and mid.startswith(other + "."):
                if parent is None or len(other) > len(parent):
                    parent = other
        resolved[mid] = Machine(id=mid, label=m.label, parent=parent)

    model = StaticModel(
        name=name,
        machines=tuple(resolved[m] for m in sorted(resolved)),
        stages=tuple(stages[s] for s in sorted(stages)),
        flows=tuple(flows),
        triggers=tuple(triggers),
    )
    # Every stage must belong to a declared machine.
    for s in model.stages:
        model.machine_of(s.id)
    return model


def validate_static(m: StaticModel) -> Report:
    """Check flow adjacency, the cross-machine rule and trigger endpoint
    rules.  Pure: same model, same report."""
    report = Report()
    kinds = {s.id: s.kind for s in m.stages}
    machine_of = {s.id: m.machine_of(s.id) for s in m.stages}
    components = m.flow_components()

    for arc in m.flows:
        src_kind, dst_kind = kinds[arc.src], kinds[arc.dst]
        same_machine = machine_of[arc.src] == machine_of[arc.dst]
        if src_kind is StageKind.TRANSFER and dst_kind is StageKind.TRANSFER:
            if same_machine:
                report.violations.append(
                    f"cross-machine rule: transfer->transfer flow "
                    f"{arc.src} -> {arc.dst} inside one machine")
            continue
        if not same_machine:
            report.violations.append(
                f"cross-machine rule: flow {arc.src} -> {arc.dst} joins "
                f"different machines but is not transfer->transfer")
            continue
        if dst_kind not in FLOW_ADJACENCY[src_kind]:
            report.violations.append(
                f"illegal adjacency {src_kind.value}->{dst_kind.value}: "
                f"flow {arc.src} -> {arc.dst}")

    for arc in m.triggers:
        src_kind, dst_kind = kinds[arc.src], kinds[arc.dst]
        if src_kind not in TRIGGER_SOURCES:
            report.violations.append(
                f"trigger source {arc.src} has kind {src_kind.value}, "
                f"expected process or create")
        if dst_kind not in TRIGGER_TARGETS:
            report.violations.append(
                f"trigger target {arc.dst} has kind {dst_kind.value}, "
                f"expected create or process")
        if (machine_of[arc.src] == machine_of[arc.dst]
                and components[arc.src] == components[arc.dst]):
            report.violations.append(
                f"trigger {arc.src} ~> {arc.dst} stays within one machine "
                f"and one flow chain")

    incident: set[str] = set()
    for arc in m.flows:
        incident.update((arc.src, arc.dst))
    for arc in m.triggers:
        incident.update((arc.src, arc.dst))
    for s in m.stages:
        if s.id not in incident:
            report.warnings.append(f"stage {s.id} has no incident arcs")
    return report


def render_model(m: StaticModel) -> str:
    """Canonical model-DSL text; parse_model(render_model(m)) equals m up to
    ordering."""
    lines = [f"model {m.name}"]
    for mach in sorted(m.machines, key=lambda x: x.id):
        if mach.label:
            lines.append(f'machine {mach.id} "{mach.label}"')
        else:
            lines.append(f"machine {mach.id}")
    for s in sorted(m.stages, key=lambda x: x.id):
        store = " store" if s.has_store else ""
        lines.append(f"stage {s.id} kind {s.kind.value}{store}")
    for arc in sorted(m.flows, key=lambda a: (a.src, a.dst)):
        lines.append(f"flow {arc.src} -> {arc.dst}")
    for arc in sorted(m.triggers, key=lambda a: (a.src, a.dst)):
        lines.append(f"trigger {arc.src} ~> {arc.dst}")
    return "\n".join(lines) + "\n"


def export_static_dot(m: StaticModel) -> str:
    """DOT rendering: one cluster per machine (nested per the machine
    forest), solid flow edges, dashed trigger edges."""
    by_machine: dict[str, list[Stage]] = {mach.id: [] for mach in m.machines}
    for s in sorted(m.stages, key=lambda x: x.id):
        by_machine[m.machine_of(s.id)].append(s)
    children: dict[str | None, list[Machine]] = {}
    for mach in sorted(m.machines, key=lambda x: x.id):
        children.setdefault(mach.parent, []).append(mach)

    lines = [f'digraph "{m.name}" {{', "  rankdir=LR;", "  node [shape=box];"]

    def emit(mach: Machine, indent: str) -> None:
        lines.append(f'{indent}subgraph "cluster_{mach.id}" {{')
        label = mach.label or mach.id
        lines.append(f'{indent}  label="{label}";')
        for s in by_machine[mach.id]:
            store = ", peripheries=2" if s.has_store else ""
            lines.append(
                f'{indent}  "{s.id}" [label="{s.kind.value}"{store}];')
        for child in children.get(mach.id, []):
            emit(child, indent + "  ")
        lines.append(f"{indent}}}")

    for mach in children.get(None, []):
        emit(mach, "  ")
    for arc in sorted(m.flows, key=lambda a: (a.src, a.dst)):
        lines.append(f'  "{arc.src}" -> "{arc.dst}";')
    for arc in sorted(m.triggers, key=lambda a: (a.src, a.dst)):
        lines.append(f'  "{arc.src}" -> "{arc.dst}" [style=dashed];')
    lines.append("}")
    return "\n".join(lines) + "\n"
