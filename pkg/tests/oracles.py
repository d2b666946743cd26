"""Independent brute-force oracles and random generators for the tests.

These deliberately avoid the library's frontier machinery: stream counting
is a plain recursive DFS, and trace acceptance enumerates candidate
resolutions with explicit silent insertion.
"""

from __future__ import annotations

import random

from tmmine.behavior import BehavioralModel
from tmmine.conformance import ActivityMapping


def brute_force_streams(events, edges, starts, ends, max_len):
    """All simple start-to-end paths, recursive DFS."""
    succ = {}
    for src, dst in edges:
        succ.setdefault(src, []).append(dst)
    found = []

    def walk(path):
        node = path[-1]
        if node in ends:
            found.append(tuple(path))
        if len(path) >= max_len:
            return
        for nxt in succ.get(node, []):
            if nxt not in path:
                walk(path + [nxt])

    for start in starts:
        if start in events:
            walk([start])
    return sorted(found)


def brute_force_accepts(symbols, b: BehavioralModel,
                        mapping: ActivityMapping | None = None) -> bool:
    """True iff some resolution of the observed symbols, with silent events
    inserted anywhere, forms a simple start-to-end path."""
    if not symbols:
        return False
    mapping = mapping or ActivityMapping.identity(b.events)
    silent = sorted(mapping.effective_silent)
    candidates = []
    for sym in symbols:
        c = mapping.candidates(sym)
        if c is None:
            return False
        candidates.append(sorted(c))

    def legal(path, eid):
        if eid in path:
            return False
        if not path:
            return eid in b.starts
        return (path[-1], eid) in b.edges

    def extend(path, i):
        if i == len(candidates):
            if path and path[-1] in b.ends:
                return True
        else:
            for eid in candidates[i]:
                if legal(path, eid) and extend(path + [eid], i + 1):
                    return True
        for eid in silent:
            if legal(path, eid) and extend(path + [eid], i):
                return True
        return False

    return extend([], 0)


# ---------------------------------------------------------------------------
# random instances

ALPHABET = ["A", "B", "C", "D", "E", "F", "G", "H", "I", "J"]


def random_behavior(rng: random.Random, max_events: int = 8,
                    max_edges: int = 14, acyclic: bool = False,
                    ) -> BehavioralModel:
    n = rng.randint(2, max_events)
    events = ALPHABET[:n]
    edges = set()
    for _ in range(rng.randint(1, max_edges)):
        src, dst = rng.sample(events, 2)
        if acyclic and events.index(src) > events.index(dst):
            src, dst = dst, src
        edges.add((src, dst))
    starts = frozenset(rng.sample(events, rng.randint(1, 2)))
    ends = frozenset(rng.sample(events, rng.randint(1, 2)))
    return BehavioralModel(
        name="random", events=frozenset(events), edges=frozenset(edges),
        starts=starts, ends=ends)


def random_mapping(rng: random.Random, b: BehavioralModel,
                   ) -> ActivityMapping | None:
    """Identity, silent-augmented, or label-mapped, at random."""
    events = sorted(b.events)
    roll = rng.random()
    if roll < 0.3:
        return None
    silent = frozenset(rng.sample(events, min(len(events),
                                              rng.randint(0, 3))))
    if roll < 0.65:
        return ActivityMapping(map={}, silent=silent,
                               alphabet=frozenset(events),
                               effective_silent=silent)
    labels = {}
    for i in range(rng.randint(1, 4)):
        targets = frozenset(rng.sample(events, rng.randint(1, 2)))
        labels[f"act{i}"] = targets
    return ActivityMapping(map=labels, silent=silent,
                           alphabet=frozenset(events),
                           effective_silent=silent)


def random_trace_symbols(rng: random.Random, b: BehavioralModel,
                         mapping: ActivityMapping | None) -> list[str]:
    """Mix of model-following walks and noise, in the mapping's alphabet."""
    symbols = sorted(b.events)
    if mapping and mapping.map:
        symbols = symbols + sorted(mapping.map)
    if rng.random() < 0.5:
        return [rng.choice(symbols) for _ in range(rng.randint(0, 6))]
    # follow edges from a start so some traces are accepted
    succ = b.successors()
    node = rng.choice(sorted(b.starts))
    walk = [node]
    while len(walk) < 6 and succ.get(node) and rng.random() < 0.8:
        node = rng.choice(succ[node])
        walk.append(node)
    out = []
    for eid in walk:
        if mapping and mapping.map and rng.random() < 0.5:
            labels = [l for l, t in mapping.map.items() if eid in t]
            if labels:
                out.append(rng.choice(labels))
                continue
        if mapping and eid in mapping.effective_silent and rng.random() < 0.5:
            continue  # unlogged silent occurrence
        out.append(eid)
    return out[:6]
