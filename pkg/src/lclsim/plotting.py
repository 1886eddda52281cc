"""Static figures for experiment reports (Agg backend, PNG files)."""

from __future__ import annotations

from pathlib import Path
from typing import Sequence

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402


def rounds_vs_n(ns: Sequence[int], rounds: Sequence[int], log_star: Sequence[int], path: Path) -> Path:
    fig, ax = plt.subplots(figsize=(5, 3.2))
    ax.plot(ns, rounds, "o-", label="rounds used")
    ax.plot(ns, log_star, "s--", label="log* n")
    ax.set_xscale("log", base=2)
    ax.set_xlabel("n")
    ax.set_ylabel("rounds")
    ax.legend()
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)
    return path


def radius_histogram(radii: Sequence[int], counts: Sequence[int], path: Path) -> Path:
    fig, ax = plt.subplots(figsize=(5, 3.2))
    ax.bar(radii, counts, width=0.8)
    ax.set_yscale("log")
    ax.set_xlabel("radius used")
    ax.set_ylabel("positions")
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)
    return path


def interval_rules(rules: dict[str, list[list[float]]], path: Path) -> Path:
    """One horizontal bar per alpha, colored by label."""
    palette = {1: "#4c72b0", 2: "#dd8452", 3: "#55a868"}
    fig, ax = plt.subplots(figsize=(6, 0.45 * len(rules) + 1))
    for row, (name, intervals) in enumerate(rules.items()):
        for a, b, lab in intervals:
            ax.barh(row, b - a, left=a, color=palette.get(int(lab), "grey"), edgecolor="white")
    ax.set_yticks(range(len(rules)))
    ax.set_yticklabels([f"{float(k):.4f}" for k in rules])
    ax.set_xlim(0, 1)
    ax.set_xlabel("x in [0, 1)")
    ax.set_ylabel("alpha")
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)
    return path
