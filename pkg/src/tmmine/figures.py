"""Matplotlib renderings that accompany the delimited reports."""

from __future__ import annotations

from collections import Counter
from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt

from .behavior import BehavioralModel, BehaviorDiff, Stream


def _layered_positions(b: BehavioralModel) -> dict[str, tuple[float, float]]:
    """Layer events by BFS depth from the starts; unreachable events go in a
    trailing layer."""
    succ = b.successors()
    depth: dict[str, int] = {}
    frontier = sorted(b.starts)
    for eid in frontier:
        depth[eid] = 0
    while frontier:
        nxt = []
        for eid in frontier:
            for child in succ.get(eid, []):
                if child not in depth:
                    depth[child] = depth[eid] + 1
                    nxt.append(child)
        frontier = sorted(nxt)
    fallback = (max(depth.values()) + 1) if depth else 0
    for eid in sorted(b.events):
        depth.setdefault(eid, fallback)

    layers: dict[int, list[str]] = {}
    for eid in sorted(depth):
        layers.setdefault(depth[eid], []).append(eid)
    positions = {}
    for level, members in layers.items():
        for row, eid in enumerate(members):
            positions[eid] = (float(level), -(row - (len(members) - 1) / 2))
    return positions


def plot_behavior(b: BehavioralModel, path: str | Path,
                  diff: BehaviorDiff | None = None) -> None:
    """Draw the chronology graph; with a diff, b-side additions are red."""
    positions = _layered_positions(b)
    added_edges = diff.edges_only_b if diff else frozenset()

    fig, ax = plt.subplots(figsize=(10, 6))
    for src, dst in sorted(b.edges):
        x0, y0 = positions[src]
        x1, y1 = positions[dst]
        color = "red" if (src, dst) in added_edges else "gray"
        ax.annotate("", xy=(x1, y1), xytext=(x0, y0),
                    arrowprops=dict(arrowstyle="-|>", color=color,
                                    shrinkA=14, shrinkB=14))
    for eid, (x, y) in positions.items():
        if eid in b.starts:
            face = "#c8e6c9"
        elif eid in b.ends:
            face = "#ffe0b2"
        else:
            face = "#e3f2fd"
        ax.scatter([x], [y], s=700, c=face, edgecolors="black", zorder=3)
        ax.annotate(eid, (x, y), ha="center", va="center", zorder=4,
                    fontsize=8)
    ax.set_title(b.name)
    ax.axis("off")
    fig.savefig(path, dpi=120, bbox_inches="tight")
    plt.close(fig)


def plot_verdict_summary(summary: Counter | dict[str, int],
                         path: str | Path, title: str = "verdicts") -> None:
    labels = ["accepted", "incomplete", "rejected"]
    values = [summary.get(k, 0) for k in labels]
    fig, ax = plt.subplots(figsize=(5, 4))
    bars = ax.bar(labels, values, color=["#4caf50", "#ff9800", "#f44336"])
    ax.bar_label(bars)
    ax.set_ylabel("cases")
    ax.set_title(title)
    fig.savefig(path, dpi=120, bbox_inches="tight")
    plt.close(fig)


def plot_stream_lengths(streams: list[Stream], path: str | Path,
                        title: str = "stream lengths") -> None:
    lengths = [len(s) for s in streams]
    fig, ax = plt.subplots(figsize=(5, 4))
    if lengths:
        bins = range(min(lengths), max(lengths) + 2)
        ax.hist(lengths, bins=bins, align="left", rwidth=0.8,
                color="#2196f3")
    ax.set_xlabel("events per stream")
    ax.set_ylabel("stream types")
    ax.set_title(title)
    fig.savefig(path, dpi=120, bbox_inches="tight")
    plt.close(fig)
