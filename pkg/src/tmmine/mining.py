"""Mining and enhancement: aggregate deviations from rejected streams,
propose additive behavioral-model edits, and apply them."""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass, field
from datetime import datetime

from .behavior import BehavioralModel, enumerate_streams
from .conformance import (
    DeviationKind,
    IllegalEnd,
    IllegalStart,
    IllegalTransition,
    Rejected,
    UnknownActivity,
    Verdict,
)
from .model import ModelError
from .simulate import IMPORTED, EventLog, MetaEvent


@dataclass(frozen=True)
class Deviation:
    kind: DeviationKind
    support: int
    example_cases: tuple[str, ...] = ()  # at most 5


@dataclass(frozen=True)
class AddEdge:
    src: str
    dst: str

    def describe(self) -> str:
        return f"add edge {self.src} -> {self.dst}"


@dataclass(frozen=True)
class AddStart:
    event: str

    def describe(self) -> str:
        return f"add start {self.event}"


@dataclass(frozen=True)
class AddEnd:
    event: str

    def describe(self) -> str:
        return f"add end {self.event}"


Edit = AddEdge | AddStart | AddEnd


@dataclass(frozen=True)
class EditProposal:
    edit: Edit
    support: int
    provenance: Deviation | None = None


@dataclass
class EnhancementReport:
    applied: list[EditProposal]
    streams_before: int
    streams_after: int
    recheck_summary: dict[str, int] | None = None


def aggregate_deviations(verdicts: list[tuple[str, Verdict]]) -> list[Deviation]:
    """One Deviation per distinct kind instance, sorted by support
    descending then lexicographically."""
    counts: dict[DeviationKind, list[str]] = {}
    for case_id, verdict in verdicts:
        if isinstance(verdict, Rejected):
            counts.setdefault(verdict.reason, []).append(case_id)
    out = [Deviation(kind=kind, support=len(cases),
                     example_cases=tuple(cases[:5]))
           for kind, cases in counts.items()]
    out.sort(key=lambda d: (-d.support, type(d.kind).__name__,
                            d.kind.sort_key()))
    return out


def propose_edits(devs: list[Deviation],
                  min_support: int = 1) -> list[EditProposal]:
    """Map each well-supported deviation to its additive edit.
    UnknownActivity deviations never become edits (see mapping_review)."""
    proposals = []
    for dev in devs:
        if dev.support < min_support:
            continue
        if isinstance(dev.kind, IllegalTransition):
            edit: Edit = AddEdge(dev.kind.src, dev.kind.dst)
        elif isinstance(dev.kind, IllegalStart):
            edit = AddStart(dev.kind.event)
        elif isinstance(dev.kind, IllegalEnd):
            edit = AddEnd(dev.kind.event)
        else:
            continue
        proposals.append(EditProposal(edit=edit, support=dev.support,
                                      provenance=dev))
    return proposals


def mapping_review(devs: list[Deviation]) -> list[str]:
    """Activity labels whose deviations need a mapping fix, not an edit."""
    return sorted({d.kind.label for d in devs
                   if isinstance(d.kind, UnknownActivity)})


def apply_edits(b: BehavioralModel,
                edits: list[EditProposal]) -> BehavioralModel:
    """Return b plus the edits; b is unchanged and re-application is
    idempotent."""
    edges = {(p.edit.src, p.edit.dst) for p in edits
             if isinstance(p.edit, AddEdge)}
    starts = {p.edit.event for p in edits if isinstance(p.edit, AddStart)}
    ends = {p.edit.event for p in edits if isinstance(p.edit, AddEnd)}
    return b.with_additions(edges=edges, starts=starts, ends=ends)


def enhance(b: BehavioralModel, proposals: list[EditProposal],
            recheck_summary: dict[str, int] | None = None,
            ) -> tuple[BehavioralModel, EnhancementReport]:
    enhanced = apply_edits(b, proposals)
    report = EnhancementReport(
        applied=list(proposals),
        streams_before=len(enumerate_streams(b)),
        streams_after=len(enumerate_streams(enhanced)),
        recheck_summary=recheck_summary,
    )
    return enhanced, report


def provenance_notes(proposals: list[EditProposal]) -> dict[object, str]:
    """Keys for render_behavior comments on added lines."""
    notes: dict[object, str] = {}
    for p in proposals:
        text = f"added, support {p.support}"
        if isinstance(p.edit, AddEdge):
            notes[(p.edit.src, p.edit.dst)] = text
        elif isinstance(p.edit, AddStart):
            notes[("start", p.edit.event)] = text
        else:
            notes[("end", p.edit.event)] = text
    return notes


# ---------------------------------------------------------------------------
# proposal CSV round trip (kind,from,to,support)

def write_proposals(proposals: list[EditProposal]) -> str:
    out = io.StringIO()
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(["kind", "from", "to", "support"])
    for p in proposals:
        if isinstance(p.edit, AddEdge):
            writer.writerow(["add-edge", p.edit.src, p.edit.dst, p.support])
        elif isinstance(p.edit, AddStart):
            writer.writerow(["add-start", p.edit.event, "", p.support])
        else:
            writer.writerow(["add-end", p.edit.event, "", p.support])
    return out.getvalue()


def read_proposals(text: str) -> list[EditProposal]:
    reader = csv.reader(io.StringIO(text))
    rows = [row for row in reader if row]
    if not rows or rows[0] != ["kind", "from", "to", "support"]:
        raise ModelError("expected proposal header kind,from,to,support")
    proposals = []
    for lineno, row in enumerate(rows[1:], start=2):
        if len(row) != 4:
            raise ModelError(f"line {lineno}: expected 4 columns")
        kind, src, dst, support_text = row
        try:
            support = int(support_text)
        except ValueError:
            raise ModelError(f"line {lineno}: bad support {support_text!r}")
        if kind == "add-edge":
            edit: Edit = AddEdge(src, dst)
        elif kind == "add-start":
            edit = AddStart(src)
        elif kind == "add-end":
            edit = AddEnd(src)
        else:
            raise ModelError(f"line {lineno}: unknown proposal kind {kind!r}")
        proposals.append(EditProposal(edit=edit, support=support))
    return proposals


# ---------------------------------------------------------------------------
# external logs

def import_external_log(text: str) -> EventLog:
    """Import a `case_id,activity,timestamp` CSV as an event log.

    Activities stay unresolved; resolution happens at check time via an
    ActivityMapping.  Steps are ordered by timestamp, ties by row order.
    """
    reader = csv.reader(io.StringIO(text))
    rows = [(lineno, row) for lineno, row in enumerate(reader, start=1) if row]
    if not rows:
        return EventLog(header={"source": IMPORTED}, events=[])
    first_lineno, first = rows[0]
    if first != ["case_id", "activity", "timestamp"]:
        raise ModelError(f"line {first_lineno}: expected header "
                         f"case_id,activity,timestamp")

    parsed: dict[str, list[tuple[str, int, str]]] = {}
    for lineno, row in rows[1:]:
        if len(row) != 3:
            raise ModelError(f"line {lineno}: expected 3 columns, got "
                             f"{len(row)}")
        case_id, activity, timestamp = row
        try:
            datetime.fromisoformat(timestamp)
        except ValueError:
            raise ModelError(f"line {lineno}: bad timestamp {timestamp!r}")
        parsed.setdefault(case_id, []).append((timestamp, lineno, activity))

    events: list[MetaEvent] = []
    for case_id, steps in sorted(parsed.items()):
        steps.sort(key=lambda s: (s[0], s[1]))
        for seq, (timestamp, _, activity) in enumerate(steps):
            events.append(MetaEvent(case_id=case_id, event_id=activity,
                                    seq=seq, timestamp=timestamp,
                                    source=IMPORTED))
    return EventLog(header={"source": IMPORTED}, events=events)
