import collections

import pytest

from tmmine.behavior import BehavioralModel, enumerate_streams
from tmmine.conformance import IllegalStart, check_log
from tmmine.model import ModelError
from tmmine.simulate import (
    EventLog,
    Fault,
    SimConfig,
    inject_faults,
    read_log,
    simulate_log,
    write_log,
)


def test_simulated_cases_are_accepted(licensing):
    log = simulate_log(licensing.behavior, SimConfig(seed=42, cases=10))
    _, summary = check_log(log, licensing.behavior)
    assert summary["accepted"] == 10


def test_same_seed_same_bytes(licensing):
    cfg = SimConfig(seed=42, cases=25)
    first = write_log(simulate_log(licensing.behavior, cfg))
    second = write_log(simulate_log(licensing.behavior, cfg))
    assert first == second


def test_different_seeds_differ(licensing):
    a = write_log(simulate_log(licensing.behavior, SimConfig(seed=1, cases=25)))
    b = write_log(simulate_log(licensing.behavior, SimConfig(seed=2, cases=25)))
    assert a != b


def test_zero_cases_header_only(licensing):
    log = simulate_log(licensing.behavior, SimConfig(seed=1, cases=0))
    assert log.events == []
    text = write_log(log)
    assert text.startswith("#")
    assert "case_id,event_id,seq,timestamp,source" in text


def test_timestamps_strictly_increase(licensing):
    log = simulate_log(licensing.behavior, SimConfig(seed=3, cases=5))
    for steps in log.cases().values():
        stamps = [ts for _, ts in steps]
        assert stamps == sorted(stamps)
        assert len(set(stamps)) == len(stamps)


def test_cyclic_model_without_end_records_error():
    b = BehavioralModel(name="loop", events=frozenset("ABC"),
                        edges=frozenset([("A", "B"), ("B", "A")]),
                        starts=frozenset("A"), ends=frozenset("C"))
    log = simulate_log(b, SimConfig(seed=1, cases=2, max_steps=10))
    assert "errors" in log.header
    assert log.events == []


def test_edge_weights_bias_choice(licensing):
    weights = {("E2", "E3"): 1000.0, ("E2", "E4"): 1.0}
    cfg = SimConfig(seed=5, cases=200, edge_weights=weights)
    log = simulate_log(licensing.behavior, cfg)
    chosen = collections.Counter(
        steps[2][0] for steps in log.cases().values())
    assert chosen["E3"] > 180


def test_stream_distribution_uniform(licensing):
    cfg = SimConfig(seed=7, cases=10_000)
    log = simulate_log(licensing.behavior, cfg)
    counts = collections.Counter(
        tuple(eid for eid, _ in steps) for steps in log.cases().values())
    streams = enumerate_streams(licensing.behavior).streams
    assert set(counts) == set(streams)
    for stream in streams:
        assert abs(counts[stream] / 10_000 - 0.25) <= 0.05


# ---------------------------------------------------------------------------
# fault injection

def test_fault_rate_zero_is_identity(licensing):
    cfg = SimConfig(seed=9, cases=20)
    clean = simulate_log(licensing.behavior, cfg)
    mutated = inject_faults(
        clean, SimConfig(seed=9, cases=20, fault=Fault("drop", 0.0)))
    assert mutated.events == clean.events


def test_illegal_start_fault_all_rejected(licensing):
    cfg = SimConfig(seed=11, cases=50, fault=Fault("illegal-start", 1.0))
    log = simulate_log(licensing.behavior, cfg)
    verdicts, summary = check_log(log, licensing.behavior, licensing.mapping)
    assert summary["rejected"] == 50
    assert all(isinstance(v.reason, IllegalStart) for _, v in verdicts)


def test_drop_fault_shortens_cases(licensing):
    cfg = SimConfig(seed=13, cases=100, fault=Fault("drop", 1.0))
    log = simulate_log(licensing.behavior, cfg)
    clean = simulate_log(licensing.behavior,
                         SimConfig(seed=13, cases=100))
    dropped = clean.cases()
    for case_id, steps in log.cases().items():
        assert len(steps) == len(dropped[case_id]) - 1
    # dropping a silent event is invisible to the monitor, so some cases
    # still pass; dropping an observable one is caught
    _, summary = check_log(log, licensing.behavior, licensing.mapping)
    assert summary["accepted"] > 0
    assert summary["accepted"] < 100


def test_swap_fault_detected(licensing):
    cfg = SimConfig(seed=17, cases=50, fault=Fault("swap-adjacent", 1.0))
    log = simulate_log(licensing.behavior, cfg)
    _, summary = check_log(log, licensing.behavior)
    assert summary["rejected"] > 0


def test_bad_fault_kind():
    with pytest.raises(ModelError, match="fault kind"):
        Fault("explode", 0.5)


def test_bad_rate():
    with pytest.raises(ModelError, match="rate"):
        Fault("drop", 1.5)


# ---------------------------------------------------------------------------
# CSV round trip

def test_round_trip_empty():
    log = EventLog(header={"model": "m"})
    assert read_log(write_log(log)) == log


def test_round_trip_simulated(licensing):
    log = simulate_log(licensing.behavior, SimConfig(seed=21, cases=10))
    again = read_log(write_log(log))
    assert again.events == sorted(log.events,
                                  key=lambda e: (e.case_id, e.seq))
    assert again.header == log.header


def test_seq_gap_names_case():
    text = ("case_id,event_id,seq,timestamp,source\n"
            "c1,E1,0,2020-01-01T00:00:00,simulated\n"
            "c1,E2,2,2020-01-01T00:01:00,simulated\n")
    with pytest.raises(ModelError, match="c1"):
        read_log(text)


def test_malformed_row_reports_line():
    text = ("case_id,event_id,seq,timestamp,source\n"
            "c1,E1,zero,2020-01-01T00:00:00,simulated\n")
    with pytest.raises(ModelError, match="line 2"):
        read_log(text)


def test_bad_header():
    with pytest.raises(ModelError, match="expected header"):
        read_log("a,b,c\n1,2,3\n")
