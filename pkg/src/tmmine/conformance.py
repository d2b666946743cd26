"""Conformance monitor: decide whether an event stream is acceptable
behavior of a behavioral model.

Observed symbols may be activity labels (mapped to one or more candidate
events) or raw event ids.  Silent events are traversed without log entries.
A trace is Accepted when some resolution forms a simple start-to-end path.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field, replace
from typing import TYPE_CHECKING

from .behavior import BehavioralModel
from .events import DynamicModel
from .model import ModelError, ModelSyntaxError, _strip_comment

if TYPE_CHECKING:
    from .simulate import EventLog


# ---------------------------------------------------------------------------
# deviations and verdicts

@dataclass(frozen=True)
class IllegalStart:
    event: str

    def sort_key(self):
        return ("", self.event)

    def describe(self) -> str:
        return f"illegal start {self.event}"


@dataclass(frozen=True)
class IllegalTransition:
    src: str
    dst: str

    def sort_key(self):
        return (self.src, self.dst)

    def describe(self) -> str:
        return f"illegal transition {self.src} -> {self.dst}"


@dataclass(frozen=True)
class IllegalEnd:
    event: str

    def sort_key(self):
        return (self.event,)

    def describe(self) -> str:
        return f"illegal end {self.event}"


@dataclass(frozen=True)
class UnknownActivity:
    label: str

    def sort_key(self):
        return (self.label,)

    def describe(self) -> str:
        return f"unknown activity {self.label!r}"


DeviationKind = IllegalStart | IllegalTransition | IllegalEnd | UnknownActivity


@dataclass(frozen=True)
class Accepted:
    resolution: tuple[str, ...]
    category = "accepted"


@dataclass(frozen=True)
class Incomplete:
    resolution: tuple[str, ...]
    category = "incomplete"


@dataclass(frozen=True)
class Rejected:
    reason: DeviationKind
    index: int
    category = "rejected"


Verdict = Accepted | Incomplete | Rejected


# ---------------------------------------------------------------------------
# activity mapping

@dataclass(frozen=True)
class ActivityMapping:
    """Activity label -> candidate event ids, plus the silent event set.

    effective_silent additionally covers events the mapping can never
    observe: events outside every candidate set (when a mapping is present)
    and events declared silent in the dynamic model.
    """

    map: dict[str, frozenset[str]]
    silent: frozenset[str]
    alphabet: frozenset[str]
    effective_silent: frozenset[str]

    @classmethod
    def identity(cls, alphabet: frozenset[str] | set[str]) -> "ActivityMapping":
        return cls(map={}, silent=frozenset(),
                   alphabet=frozenset(alphabet),
                   effective_silent=frozenset())

    def candidates(self, symbol: str) -> frozenset[str] | None:
        if symbol in self.map:
            return self.map[symbol]
        if symbol in self.alphabet:
            return frozenset((symbol,))
        return None


def _effective_silent(mapping: dict[str, frozenset[str]],
                      declared: frozenset[str],
                      d: DynamicModel) -> frozenset[str]:
    silent = set(declared)
    silent.update(e.id for e in d.events if not e.observable)
    if mapping:
        targets = set().union(*mapping.values())
        silent.update(set(d.event_ids()) - targets)
    return frozenset(silent)


def load_mapping(text: str, d: DynamicModel) -> ActivityMapping:
    """Parse mapping-DSL source (`map X -> E1|E2`, `silent E2, E10`)."""
    known = set(d.event_ids())
    mapping: dict[str, frozenset[str]] = {}
    declared: set[str] = set()

    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = _strip_comment(raw).strip()
        if not line:
            continue
        keyword, _, rest = line.partition(" ")
        rest = rest.strip()
        if keyword == "map":
            if "->" not in rest:
                raise ModelSyntaxError("expected: map <activity> -> <id>[|<id>...]",
                                       lineno)
            label, targets_text = (part.strip() for part in rest.split("->", 1))
            if not label:
                raise ModelSyntaxError("empty activity label", lineno)
            if label in mapping:
                raise ModelError(f"line {lineno}: duplicate mapping for {label}")
            targets = frozenset(t.strip() for t in targets_text.split("|")
                                if t.strip())
            if not targets:
                raise ModelError(
                    f"line {lineno}: activity {label} mapped to empty set")
            for t in targets:
                if t not in known:
                    raise ModelError(f"line {lineno}: unknown event {t}")
            mapping[label] = targets
        elif keyword == "silent":
            for eid in (e.strip() for e in rest.split(",")):
                if not eid:
                    continue
                if eid not in known:
                    raise ModelError(f"line {lineno}: unknown event {eid}")
                declared.add(eid)
        else:
            raise ModelSyntaxError(f"unknown keyword {keyword!r}", lineno)

    return ActivityMapping(
        map=mapping,
        silent=frozenset(declared),
        alphabet=frozenset(known),
        effective_silent=_effective_silent(mapping, frozenset(declared), d),
    )


# ---------------------------------------------------------------------------
# trace matching

@dataclass(frozen=True)
class Trace:
    case_id: str
    steps: tuple[tuple[str, str], ...]  # (symbol, ISO-8601 timestamp)

    def symbols(self) -> list[str]:
        return [sym for sym, _ in self.steps]


# Matcher state: (last event or None at path start, frozenset of events in
# the resolution) -> lexicographically smallest resolution reaching it.
_States = dict[tuple[str | None, frozenset[str]], tuple[str, ...]]


def _initial_states() -> _States:
    return {(None, frozenset()): ()}


def _keep_best(states: _States, key, resolution) -> bool:
    old = states.get(key)
    if old is None or resolution < old:
        states[key] = resolution
        return True
    return False


def _silent_closure(states: _States, b: BehavioralModel,
                    silent: frozenset[str]) -> _States:
    """Extend every state by silent events.  Resolutions stay simple paths,
    so each silent event is used at most once."""
    closed = dict(states)
    queue = list(states.items())
    while queue:
        (last, visited), resolution = queue.pop()
        for eid in sorted(silent - visited):
            legal = eid in b.starts if last is None else (last, eid) in b.edges
            if legal:
                key = (eid, visited | {eid})
                if _keep_best(closed, key, resolution + (eid,)):
                    queue.append((key, closed[key]))
    return closed


@dataclass(frozen=True)
class MonitorState:
    """Incremental matcher state for one case."""

    case_id: str
    step_count: int = 0
    states: tuple = (((None, frozenset()), ()),)
    rejection: Rejected | None = None

    @property
    def frontier(self) -> frozenset[str]:
        """Event ids the matcher may currently occupy; empty once rejected
        (and before the first observed symbol)."""
        return frozenset(last for (last, _), _ in self.states
                         if last is not None)

    def _state_dict(self) -> _States:
        return dict(self.states)


def start_monitor(case_id: str) -> MonitorState:
    return MonitorState(case_id=case_id)


def _pack(states: _States) -> tuple:
    return tuple(sorted(states.items(), key=lambda kv: (kv[1], kv[0][0] or "")))


def step_monitor(s: MonitorState, symbol: str, b: BehavioralModel,
                 mapping: ActivityMapping | None = None,
                 ) -> tuple[MonitorState, DeviationKind | None]:
    """Advance the frontier by one observed symbol.  Emits a deviation
    exactly when the frontier would become empty; later steps on a rejected
    case are no-ops."""
    if s.rejection is not None:
        return replace(s, step_count=s.step_count + 1), None
    mapping = mapping or ActivityMapping.identity(b.events)

    candidates = mapping.candidates(symbol)
    if candidates is None:
        rej = Rejected(UnknownActivity(symbol), s.step_count)
        return replace(s, step_count=s.step_count + 1, states=(),
                       rejection=rej), rej.reason

    closed = _silent_closure(s._state_dict(), b, mapping.effective_silent)
    advanced: _States = {}
    for (last, visited), resolution in closed.items():
        for eid in candidates:
            if eid in visited:
                continue
            legal = eid in b.starts if last is None else (last, eid) in b.edges
            if legal:
                _keep_best(advanced, (eid, visited | {eid}),
                           resolution + (eid,))
    if advanced:
        return replace(s, step_count=s.step_count + 1,
                       states=_pack(advanced)), None

    # Frontier died: report the failure of the longest-surviving
    # resolution; ties broken by smallest lexicographic pair, illegal
    # starts first.
    failures: list[DeviationKind] = []
    for (last, visited), _ in closed.items():
        for eid in candidates:
            if last is None:
                failures.append(IllegalStart(eid))
            else:
                failures.append(IllegalTransition(last, eid))
    reason = min(failures, key=lambda f: f.sort_key())
    rej = Rejected(reason, s.step_count)
    return replace(s, step_count=s.step_count + 1, states=(),
                   rejection=rej), rej.reason


def _can_reach_end(last: str, visited: frozenset[str],
                   b: BehavioralModel) -> bool:
    succ = b.successors()
    seen = set(visited)
    stack = [last]
    while stack:
        for nxt in succ.get(stack.pop(), []):
            if nxt in b.ends:
                return True
            if nxt not in seen:
                seen.add(nxt)
                stack.append(nxt)
    return False


def finalize_monitor(s: MonitorState, b: BehavioralModel,
                     mapping: ActivityMapping | None = None) -> Verdict:
    """Classify end-of-case as Accepted, Incomplete, or Rejected."""
    if s.rejection is not None:
        return s.rejection
    if s.step_count == 0:
        return Incomplete(())
    mapping = mapping or ActivityMapping.identity(b.events)
    closed = _silent_closure(s._state_dict(), b, mapping.effective_silent)

    accepted = [resolution for (last, _), resolution in closed.items()
                if last is not None and last in b.ends]
    if accepted:
        return Accepted(min(accepted))

    extendable = [resolution for (last, visited), resolution in closed.items()
                  if last is not None and _can_reach_end(last, visited, b)]
    if extendable:
        return Incomplete(min(extendable, key=lambda r: (-len(r), r)))

    stuck = min((resolution for (last, _), resolution in closed.items()
                 if last is not None),
                key=lambda r: (-len(r), r))
    return Rejected(IllegalEnd(stuck[-1]), s.step_count - 1)


def check_trace(t: Trace, b: BehavioralModel,
                mapping: ActivityMapping | None = None) -> Verdict:
    """Batch verdict for one trace: the streaming monitor fed stepwise and
    finalized."""
    state = start_monitor(t.case_id)
    for symbol, _ in t.steps:
        state, _ = step_monitor(state, symbol, b, mapping)
    return finalize_monitor(state, b, mapping)


def check_log(log: "EventLog", b: BehavioralModel,
              mapping: ActivityMapping | None = None,
              ) -> tuple[list[tuple[str, Verdict]], Counter]:
    """Per-case verdicts, ordered by case id, plus summary counts."""
    verdicts = []
    summary: Counter = Counter(accepted=0, incomplete=0, rejected=0)
    for case_id, steps in sorted(log.cases().items()):
        trace = Trace(case_id=case_id, steps=tuple(steps))
        verdict = check_trace(trace, b, mapping)
        verdicts.append((case_id, verdict))
        summary[verdict.category] += 1
    return verdicts, summary


def verdict_rows(verdicts: list[tuple[str, Verdict]]) -> list[tuple[str, str, str, str]]:
    """(case_id, verdict, detail, index) rows for the CSV report."""
    rows = []
    for case_id, v in verdicts:
        if isinstance(v, Rejected):
            rows.append((case_id, "rejected", v.reason.describe(), str(v.index)))
        else:
            rows.append((case_id, v.category, ",".join(v.resolution), ""))
    return rows
