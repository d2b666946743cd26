import random

import pytest

from oracles import (
    brute_force_accepts,
    random_behavior,
    random_mapping,
    random_trace_symbols,
)
from tmmine.behavior import BehavioralModel, enumerate_streams
from tmmine.conformance import (
    Accepted,
    ActivityMapping,
    IllegalEnd,
    IllegalStart,
    IllegalTransition,
    Incomplete,
    Rejected,
    Trace,
    UnknownActivity,
    check_log,
    check_trace,
    finalize_monitor,
    load_mapping,
    start_monitor,
    step_monitor,
)
from tmmine.mining import import_external_log
from tmmine.model import ModelError


def _model(events, edges, starts, ends):
    return BehavioralModel(name="b", events=frozenset(events),
                           edges=frozenset(edges), starts=frozenset(starts),
                           ends=frozenset(ends))


def _trace(symbols, case_id="t"):
    return Trace(case_id, tuple((s, "") for s in symbols))


ABC = _model("ABC", [("A", "B"), ("B", "C")], ["A"], ["C"])


# ---------------------------------------------------------------------------
# mapping

def test_load_licensing_mapping(licensing):
    mapping = licensing.mapping
    assert mapping.map["Y"] == {"E11", "E12"}
    assert mapping.silent == {"E2", "E10"}
    # events never targeted by an activity are implicitly silent
    assert mapping.effective_silent == {"E2", "E8", "E9", "E10"}


def test_mapping_unknown_event(licensing):
    with pytest.raises(ModelError, match="E99"):
        load_mapping("map Z -> E99\n", licensing.dynamic)


def test_mapping_empty_target(licensing):
    with pytest.raises(ModelError, match="empty"):
        load_mapping("map Z -> \n", licensing.dynamic)


def test_empty_mapping_is_identity(licensing):
    mapping = load_mapping("", licensing.dynamic)
    assert mapping.effective_silent == frozenset()
    assert mapping.candidates("E1") == {"E1"}
    assert mapping.candidates("X") is None


# ---------------------------------------------------------------------------
# check_trace

def test_fig6_instance_accepted(licensing):
    verdict = check_trace(_trace(["X", "A", "C", "D", "Y"]),
                          licensing.behavior, licensing.mapping)
    assert verdict == Accepted(("E1", "E2", "E3", "E5", "E10", "E7",
                                "E8", "E11"))


def test_skip_classes_rejected(licensing):
    verdict = check_trace(_trace(["E1", "E2", "E5"]), licensing.behavior)
    assert verdict == Rejected(IllegalTransition("E2", "E5"), 2)


def test_illegal_start():
    assert check_trace(_trace(["B", "C"]), ABC) == Rejected(IllegalStart("B"), 0)


def test_empty_trace_is_incomplete(licensing):
    assert check_trace(_trace([]), licensing.behavior) == Incomplete(())


def test_prefix_is_incomplete(licensing):
    verdict = check_trace(_trace(["X", "A"]), licensing.behavior,
                          licensing.mapping)
    assert isinstance(verdict, Incomplete)
    assert verdict.resolution == ("E1", "E2", "E3")


def test_unknown_activity(licensing):
    verdict = check_trace(_trace(["X", "zzz"]), licensing.behavior,
                          licensing.mapping)
    assert verdict == Rejected(UnknownActivity("zzz"), 1)


def test_illegal_end():
    model = _model("ABC", [("A", "B")], ["A"], ["C"])
    verdict = check_trace(_trace(["A", "B"]), model)
    assert verdict == Rejected(IllegalEnd("B"), 1)


def test_ambiguous_mapping_accepts_either_resolution(licensing):
    # Y resolves to the license the path produced
    car = check_trace(_trace(["X", "B", "C", "E", "Y"]),
                      licensing.behavior, licensing.mapping)
    assert car == Accepted(("E1", "E2", "E4", "E5", "E10", "E6", "E9",
                            "E12"))


def test_silent_event_may_still_be_observed(licensing):
    symbols = ["E1", "E2", "E3", "E5", "E10", "E7", "E8", "E11"]
    verdict = check_trace(_trace(symbols), licensing.behavior,
                          licensing.mapping)
    assert verdict == Accepted(tuple(symbols))


def test_check_log_fig6(licensing, licensing_dir):
    log = import_external_log((licensing_dir / "fig6.csv").read_text())
    verdicts, summary = check_log(log, licensing.behavior, licensing.mapping)
    assert summary["accepted"] == 6
    assert summary["rejected"] == 0
    assert [case for case, _ in verdicts] == ["1", "2", "3", "4", "5", "6"]


def test_check_log_rejects_skip_classes(licensing, licensing_dir):
    log = import_external_log((licensing_dir / "skip_classes.csv").read_text())
    _, summary = check_log(log, licensing.behavior, licensing.mapping)
    assert summary == {"accepted": 0, "incomplete": 0, "rejected": 1}


def test_check_log_empty(licensing):
    from tmmine.simulate import EventLog
    verdicts, summary = check_log(EventLog(), licensing.behavior)
    assert verdicts == []
    assert sum(summary.values()) == 0


# ---------------------------------------------------------------------------
# streaming monitor

def _run_monitor(symbols, b, mapping=None):
    state = start_monitor("case")
    deviations = []
    for sym in symbols:
        state, dev = step_monitor(state, sym, b, mapping)
        deviations.append(dev)
    return state, deviations, finalize_monitor(state, b, mapping)


def test_monitor_accepts_fig6(licensing):
    state, deviations, verdict = _run_monitor(
        ["X", "A", "C", "D", "Y"], licensing.behavior, licensing.mapping)
    assert deviations == [None] * 5
    assert isinstance(verdict, Accepted)


def test_monitor_deviation_at_third_step(licensing):
    _, deviations, verdict = _run_monitor(
        ["E1", "E2", "E5"], licensing.behavior)
    assert deviations[:2] == [None, None]
    assert deviations[2] == IllegalTransition("E2", "E5")
    assert verdict == Rejected(IllegalTransition("E2", "E5"), 2)


def test_monitor_finalize_after_start_is_incomplete(licensing):
    _, _, verdict = _run_monitor(["X"], licensing.behavior, licensing.mapping)
    assert isinstance(verdict, Incomplete)


def test_monitor_frontier_empty_iff_rejected(licensing):
    state = start_monitor("case")
    for sym in ["E1", "E2", "E5", "E1"]:
        state, _ = step_monitor(state, sym, licensing.behavior)
    assert state.frontier == frozenset()
    assert state.rejection is not None


def test_streaming_equals_batch_on_corpus(licensing, licensing_dir):
    log = import_external_log((licensing_dir / "fig6.csv").read_text())
    for case_id, steps in log.cases().items():
        symbols = [sym for sym, _ in steps]
        _, _, streaming = _run_monitor(symbols, licensing.behavior,
                                       licensing.mapping)
        batch = check_trace(_trace(symbols, case_id="x"),
                            licensing.behavior, licensing.mapping)
        assert streaming == batch


def test_streaming_equals_batch_random():
    rng = random.Random(2024)
    for _ in range(120):
        b = random_behavior(rng)
        mapping = random_mapping(rng, b)
        for _ in range(5):
            symbols = random_trace_symbols(rng, b, mapping)
            _, _, streaming = _run_monitor(symbols, b, mapping)
            assert streaming == check_trace(_trace(symbols), b, mapping)


# ---------------------------------------------------------------------------
# oracle equivalence and properties

def test_accept_decision_matches_oracle():
    rng = random.Random(4321)
    for _ in range(150):
        b = random_behavior(rng)
        mapping = random_mapping(rng, b)
        for _ in range(4):
            symbols = random_trace_symbols(rng, b, mapping)
            verdict = check_trace(_trace(symbols), b, mapping)
            assert isinstance(verdict, Accepted) == brute_force_accepts(
                symbols, b, mapping), (symbols, b, mapping, verdict)


def test_accepted_resolution_is_an_enumerated_stream(licensing, ed):
    for ws in (licensing, ed):
        b = ws.behavior
        streams = set(enumerate_streams(b, len(b.events)).streams)
        for stream in sorted(streams):
            verdict = check_trace(_trace(list(stream)), b, ws.mapping)
            assert isinstance(verdict, Accepted)
            assert verdict.resolution in streams


def test_acceptance_is_monotone_under_additions():
    rng = random.Random(77)
    for _ in range(60):
        b = random_behavior(rng)
        mapping = random_mapping(rng, b)
        symbols = random_trace_symbols(rng, b, mapping)
        if not isinstance(check_trace(_trace(symbols), b, mapping), Accepted):
            continue
        src, dst = rng.sample(sorted(b.events), 2)
        grown = b.with_additions(edges={(src, dst)},
                                 starts={rng.choice(sorted(b.events))})
        assert isinstance(check_trace(_trace(symbols), grown, mapping),
                          Accepted)
