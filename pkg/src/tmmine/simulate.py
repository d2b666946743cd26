"""Meta-event logs and their generation: seeded execution of a behavioral
model, fault injection, and CSV round-tripping."""

from __future__ import annotations

import csv
import io
import random
from dataclasses import dataclass, field, replace
from datetime import datetime, timedelta, timezone

from .behavior import BehavioralModel
from .model import ModelError

SIMULATED = "simulated"
IMPORTED = "imported"

LOG_COLUMNS = ["case_id", "event_id", "seq", "timestamp", "source"]


@dataclass(frozen=True)
class MetaEvent:
    case_id: str
    event_id: str
    seq: int
    timestamp: str  # ISO-8601 instant
    source: str = SIMULATED


@dataclass
class EventLog:
    header: dict[str, str] = field(default_factory=dict)
    events: list[MetaEvent] = field(default_factory=list)

    def cases(self) -> dict[str, list[tuple[str, str]]]:
        """case_id -> ordered (event_id, timestamp) pairs."""
        out: dict[str, list[tuple[str, str]]] = {}
        for ev in sorted(self.events, key=lambda e: (e.case_id, e.seq)):
            out.setdefault(ev.case_id, []).append((ev.event_id, ev.timestamp))
        return out


@dataclass(frozen=True)
class Fault:
    kind: str  # drop | swap-adjacent | illegal-start
    rate: float

    def __post_init__(self):
        if self.kind not in ("drop", "swap-adjacent", "illegal-start"):
            raise ModelError(f"unknown fault kind {self.kind!r}")
        if not 0.0 <= self.rate <= 1.0:
            raise ModelError(f"fault rate {self.rate} outside [0, 1]")


@dataclass(frozen=True)
class SimConfig:
    seed: int = 0
    cases: int = 1
    edge_weights: dict[tuple[str, str], float] | None = None
    fault: Fault | None = None
    max_steps: int = 1000
    start_time: str = "2020-01-01T00:00:00+00:00"
    step_seconds: int = 60

    def __post_init__(self):
        if self.cases < 0:
            raise ModelError("cases must be non-negative")
        if self.max_steps < 1:
            raise ModelError("max_steps must be positive")
        for edge, w in (self.edge_weights or {}).items():
            if w <= 0:
                raise ModelError(f"non-positive weight on edge {edge}")


def _case_rng(seed: int, index: int, label: str = "walk") -> random.Random:
    # Keyed per case so output is independent of generation order.
    return random.Random(f"{seed}:{label}:{index}")


def _weighted_choice(rng: random.Random, options: list[str],
                     weights: dict, key) -> str:
    ws = [weights.get(key(o), 1.0) for o in options]
    return rng.choices(options, weights=ws, k=1)[0]


def simulate_log(b: BehavioralModel, cfg: SimConfig) -> EventLog:
    """Weighted random walks from a start to an end, one case per walk.

    Cases that exceed max_steps without reaching an end are recorded as
    per-case errors in the header and omitted from the rows.
    """
    weights = cfg.edge_weights or {}
    succ = b.successors()
    base = datetime.fromisoformat(cfg.start_time)
    step = timedelta(seconds=cfg.step_seconds)

    header = {
        "model": b.name,
        "seed": str(cfg.seed),
        "cases": str(cfg.cases),
        "source": SIMULATED,
    }
    if cfg.fault:
        header["fault"] = f"{cfg.fault.kind} rate={cfg.fault.rate}"

    events: list[MetaEvent] = []
    errors: list[str] = []
    starts = sorted(b.starts)
    for i in range(cfg.cases):
        case_id = f"case{i:04d}"
        rng = _case_rng(cfg.seed, i)
        node = _weighted_choice(rng, starts, weights, key=lambda s: ("", s))
        walk = [node]
        while node not in b.ends:
            nexts = succ.get(node, [])
            if not nexts or len(walk) >= cfg.max_steps:
                break
            node = _weighted_choice(rng, nexts, weights,
                                    key=lambda n, u=node: (u, n))
            walk.append(node)
        if walk[-1] not in b.ends:
            errors.append(f"{case_id}: no end reached within "
                          f"{cfg.max_steps} steps")
            continue
        for seq, eid in enumerate(walk):
            events.append(MetaEvent(
                case_id=case_id, event_id=eid, seq=seq,
                timestamp=(base + seq * step).isoformat(),
                source=SIMULATED))
    if errors:
        header["errors"] = "; ".join(errors)

    log = EventLog(header=header, events=events)
    if cfg.fault and cfg.fault.rate > 0:
        log = inject_faults(log, cfg)
    return log


def inject_faults(log: EventLog, cfg: SimConfig) -> EventLog:
    """Mutate each case independently with probability cfg.fault.rate."""
    if cfg.fault is None:
        raise ModelError("no fault configured")
    fault = cfg.fault
    base = datetime.fromisoformat(cfg.start_time)
    step = timedelta(seconds=cfg.step_seconds)

    mutated: list[MetaEvent] = []
    touched: list[str] = []
    for index, (case_id, steps) in enumerate(sorted(log.cases().items())):
        rng = _case_rng(cfg.seed, index, label="fault")
        ids = [eid for eid, _ in steps]
        if rng.random() < fault.rate:
            if fault.kind == "drop" and len(ids) > 1:
                del ids[rng.randrange(1, len(ids))]
                touched.append(case_id)
            elif fault.kind == "swap-adjacent" and len(ids) > 1:
                at = rng.randrange(len(ids) - 1)
                ids[at], ids[at + 1] = ids[at + 1], ids[at]
                touched.append(case_id)
            elif fault.kind == "illegal-start" and ids:
                del ids[0]
                touched.append(case_id)
        for seq, eid in enumerate(ids):
            mutated.append(MetaEvent(
                case_id=case_id, event_id=eid, seq=seq,
                timestamp=(base + seq * step).isoformat(),
                source=SIMULATED))

    header = dict(log.header)
    header["fault"] = f"{fault.kind} rate={fault.rate}"
    header["mutated_cases"] = ",".join(touched)
    return EventLog(header=header, events=mutated)


def write_log(log: EventLog) -> str:
    """Meta-event CSV with `#`-prefixed provenance header lines; rows sorted
    by (case_id, seq)."""
    out = io.StringIO()
    for key in sorted(log.header):
        out.write(f"# {key}: {log.header[key]}\n")
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(LOG_COLUMNS)
    for ev in sorted(log.events, key=lambda e: (e.case_id, e.seq)):
        writer.writerow([ev.case_id, ev.event_id, ev.seq, ev.timestamp,
                         ev.source])
    return out.getvalue()


def read_log(text: str) -> EventLog:
    """Inverse of write_log.  Raises ModelError for malformed rows (with
    line numbers) and for per-case seq gaps."""
    header: dict[str, str] = {}
    body: list[tuple[int, str]] = []
    for lineno, line in enumerate(text.splitlines(), start=1):
        if line.startswith("#"):
            key, _, value = line[1:].partition(":")
            header[key.strip()] = value.strip()
        elif line.strip():
            body.append((lineno, line))
    if not body:
        return EventLog(header=header, events=[])

    first_lineno, first = body[0]
    columns = next(csv.reader([first]))
    if columns != LOG_COLUMNS:
        raise ModelError(
            f"line {first_lineno}: expected header {','.join(LOG_COLUMNS)}")

    events: list[MetaEvent] = []
    for lineno, line in body[1:]:
        row = next(csv.reader([line]))
        if len(row) != len(LOG_COLUMNS):
            raise ModelError(f"line {lineno}: expected {len(LOG_COLUMNS)} "
                             f"columns, got {len(row)}")
        case_id, event_id, seq_text, timestamp, source = row
        try:
            seq = int(seq_text)
        except ValueError:
            raise ModelError(f"line {lineno}: bad seq {seq_text!r}")
        try:
            datetime.fromisoformat(timestamp)
        except ValueError:
            raise ModelError(f"line {lineno}: bad timestamp {timestamp!r}")
        if source not in (SIMULATED, IMPORTED):
            raise ModelError(f"line {lineno}: bad source {source!r}")
        events.append(MetaEvent(case_id, event_id, seq, timestamp, source))

    by_case: dict[str, list[int]] = {}
    for ev in events:
        by_case.setdefault(ev.case_id, []).append(ev.seq)
    for case_id, seqs in sorted(by_case.items()):
        if sorted(seqs) != list(range(len(seqs))):
            raise ModelError(f"seq gap in case {case_id}")
    return EventLog(header=header, events=events)
