"""Command-line interface.  Every subcommand is a thin composition of
module operations; diagnostics go to stderr, data to stdout."""

from __future__ import annotations

import argparse
import csv
import sys
from pathlib import Path

from . import figures, mining, simulate
from .behavior import (
    diff_behaviors,
    enumerate_streams,
    export_behavior_dot,
    load_behavior,
    render_behavior,
)
from .conformance import check_log, verdict_rows
from .events import export_dynamic_dot
from .model import ModelError, export_static_dot
from .workspace import Workspace

EXIT_OK = 0
EXIT_INVALID = 1
EXIT_USAGE = 2


def _err(message: str) -> None:
    print(message, file=sys.stderr)


def _write_output(text: str, out: str | None) -> None:
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def _load_workspace(args):
    ws = Workspace.discover(args.workspace, model=args.model,
                            events=args.events, behavior=args.behavior,
                            mapping=args.map)
    return ws.load()


def _validated(args, need_behavior: bool = True):
    loaded = _load_workspace(args)
    report = loaded.validate()
    if not report.ok:
        _err(str(report))
        return None
    if need_behavior:
        loaded.require_behavior()
    return loaded


def _read_any_log(path: str) -> simulate.EventLog:
    text = Path(path).read_text()
    for line in text.splitlines():
        if line.startswith("#") or not line.strip():
            continue
        if next(csv.reader([line])) == ["case_id", "activity", "timestamp"]:
            return mining.import_external_log(text)
        return simulate.read_log(text)
    return simulate.EventLog()


# ---------------------------------------------------------------------------
# subcommands

def cmd_validate(args) -> int:
    loaded = _load_workspace(args)
    report = loaded.validate()
    print(report)
    return EXIT_OK if report.ok else EXIT_INVALID


def cmd_export_dot(args) -> int:
    loaded = _validated(args, need_behavior=args.level == "behavior")
    if loaded is None:
        return EXIT_INVALID
    if args.level == "static":
        text = export_static_dot(loaded.static)
    elif args.level == "dynamic":
        if loaded.dynamic is None:
            raise ModelError("workspace has no events (.ev) file")
        text = export_dynamic_dot(loaded.dynamic, loaded.static)
    else:
        text = export_behavior_dot(loaded.behavior)
    _write_output(text, args.out)
    return EXIT_OK


def cmd_enumerate(args) -> int:
    loaded = _validated(args)
    if loaded is None:
        return EXIT_INVALID
    result = enumerate_streams(loaded.behavior, args.max_len)
    if result.cyclic:
        _err("notice: behavioral model is cyclic; enumeration bounded")
    for stream in result.streams:
        print(",".join(stream))
    _err(f"{len(result.streams)} stream types")
    return EXIT_OK


def cmd_simulate(args) -> int:
    loaded = _validated(args)
    if loaded is None:
        return EXIT_INVALID
    fault = None
    if args.fault:
        fault = simulate.Fault(kind=args.fault, rate=args.rate)
    cfg = simulate.SimConfig(seed=args.seed, cases=args.cases, fault=fault,
                             max_steps=args.max_steps)
    log = simulate.simulate_log(loaded.behavior, cfg)
    _write_output(simulate.write_log(log), args.out)
    return EXIT_OK


def _summary_line(summary) -> str:
    return (f"{summary['accepted']} accepted, {summary['incomplete']} "
            f"incomplete, {summary['rejected']} rejected")


def cmd_check(args) -> int:
    loaded = _validated(args)
    if loaded is None:
        return EXIT_INVALID
    log = _read_any_log(args.log)
    verdicts, summary = check_log(log, loaded.behavior, loaded.mapping)
    writer = csv.writer(sys.stdout, lineterminator="\n")
    writer.writerow(["case_id", "verdict", "detail", "index"])
    writer.writerows(verdict_rows(verdicts))
    _err(_summary_line(summary))
    return EXIT_OK


def cmd_discover(args) -> int:
    loaded = _validated(args)
    if loaded is None:
        return EXIT_INVALID
    log = _read_any_log(args.log)
    verdicts, summary = check_log(log, loaded.behavior, loaded.mapping)
    deviations = mining.aggregate_deviations(verdicts)
    proposals = mining.propose_edits(deviations, args.min_support)
    review = mining.mapping_review(deviations)
    _write_output(mining.write_proposals(proposals), args.out)
    _err(_summary_line(summary))
    _err(f"{len(deviations)} deviation kinds, {len(proposals)} proposals")
    for label in review:
        _err(f"mapping review: unknown activity {label!r}")
    return EXIT_OK


def cmd_enhance(args) -> int:
    loaded = _validated(args)
    if loaded is None:
        return EXIT_INVALID
    proposals = mining.read_proposals(Path(args.proposals).read_text())
    recheck = None
    enhanced, _ = mining.enhance(loaded.behavior, proposals)
    if args.log:
        log = _read_any_log(args.log)
        _, summary = check_log(log, enhanced, loaded.mapping)
        recheck = dict(summary)
    enhanced, report = mining.enhance(loaded.behavior, proposals,
                                      recheck_summary=recheck)
    notes = mining.provenance_notes(proposals)
    Path(args.out).write_text(render_behavior(enhanced, notes))
    _err(f"applied {len(proposals)} edits; streams "
         f"{report.streams_before} -> {report.streams_after}")
    if recheck is not None:
        _err("re-check: " + _summary_line(recheck))
    return EXIT_OK


def cmd_diff(args) -> int:
    loaded = _validated(args)
    if loaded is None:
        return EXIT_INVALID
    other = load_behavior(Path(args.other).read_text(), loaded.dynamic)
    diff = diff_behaviors(loaded.behavior, other)
    if diff.alphabet_mismatch:
        _err("notice: models have different event alphabets")
    writer = csv.writer(sys.stdout, lineterminator="\n")
    writer.writerow(["kind", "side", "element"])
    writer.writerows(diff.rows())
    _err("models identical" if diff.empty
         else f"{len(diff.rows())} differences")
    return EXIT_OK


def cmd_report(args) -> int:
    loaded = _validated(args)
    if loaded is None:
        return EXIT_INVALID
    out_dir = Path(args.out)
    out_dir.mkdir(parents=True, exist_ok=True)
    b = loaded.behavior

    result = enumerate_streams(b)
    with open(out_dir / "streams.csv", "w", newline="") as handle:
        writer = csv.writer(handle, lineterminator="\n")
        writer.writerow(["stream"])
        writer.writerows([[" ".join(s)] for s in result.streams])
    figures.plot_behavior(b, out_dir / "behavior.png")
    figures.plot_stream_lengths(result.streams,
                                out_dir / "stream_lengths.png")

    if args.log:
        log = _read_any_log(args.log)
        verdicts, summary = check_log(log, b, loaded.mapping)
        with open(out_dir / "verdicts.csv", "w", newline="") as handle:
            writer = csv.writer(handle, lineterminator="\n")
            writer.writerow(["case_id", "verdict", "detail", "index"])
            writer.writerows(verdict_rows(verdicts))
        figures.plot_verdict_summary(summary, out_dir / "verdicts.png",
                                     title=f"{b.name}: {args.log}")
        _err(_summary_line(summary))
    _err(f"report written to {out_dir}")
    return EXIT_OK


# ---------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="tmmine",
        description="Thinging-machine modeling with built-in conformance "
                    "checking and mining")
    parser.add_argument("-w", "--workspace", default=".",
                        help="directory holding the .tm/.ev/.bh/.map files")
    parser.add_argument("--model", help="explicit .tm path")
    parser.add_argument("--events", help="explicit .ev path")
    parser.add_argument("--behavior", help="explicit .bh path")
    parser.add_argument("--map", help="explicit .map path")
    sub = parser.add_subparsers(dest="command", required=True)

    sub.add_parser("validate", help="validate all workspace levels")

    p = sub.add_parser("export-dot", help="export a DOT rendering")
    p.add_argument("--level", choices=["static", "dynamic", "behavior"],
                   required=True)
    p.add_argument("-o", "--out")

    p = sub.add_parser("enumerate", help="list stream types")
    p.add_argument("--max-len", type=int, default=None)

    p = sub.add_parser("simulate", help="generate a meta-event log")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--cases", type=int, default=10)
    p.add_argument("--fault", choices=["drop", "swap-adjacent",
                                       "illegal-start"])
    p.add_argument("--rate", type=float, default=0.0)
    p.add_argument("--max-steps", type=int, default=1000)
    p.add_argument("-o", "--out")

    p = sub.add_parser("check", help="check a log for conformance")
    p.add_argument("--log", required=True)

    p = sub.add_parser("discover", help="mine edit proposals from a log")
    p.add_argument("--log", required=True)
    p.add_argument("--min-support", type=int, default=1)
    p.add_argument("-o", "--out")

    p = sub.add_parser("enhance", help="apply proposals to the behavior")
    p.add_argument("--proposals", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--log", help="re-check this log against the result")

    p = sub.add_parser("diff", help="diff against another behavioral model")
    p.add_argument("--other", required=True)

    p = sub.add_parser("report", help="write CSV reports and figures")
    p.add_argument("--log")
    p.add_argument("--out", required=True)

    return parser


COMMANDS = {
    "validate": cmd_validate,
    "export-dot": cmd_export_dot,
    "enumerate": cmd_enumerate,
    "simulate": cmd_simulate,
    "check": cmd_check,
    "discover": cmd_discover,
    "enhance": cmd_enhance,
    "diff": cmd_diff,
    "report": cmd_report,
}


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return COMMANDS[args.command](args)
    except FileNotFoundError as exc:
        _err(f"error: {exc}")
        return EXIT_USAGE
    except ModelError as exc:
        _err(f"error: {exc}")
        return EXIT_INVALID


if __name__ == "__main__":
    sys.exit(main())
