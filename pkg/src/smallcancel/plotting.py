"""Figures written next to the text reports (PNG, Agg backend)."""
from __future__ import annotations

from pathlib import Path
from typing import Sequence

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402

from .bounds import BoundResult  # noqa: E402
from .solver import SolverStats  # noqa: E402


def _finish(fig, path) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)
    return path


def plot_bounds(rows: Sequence[BoundResult], path) -> Path:
    """Horizontal bars of log10(L) per formula."""
    names = [r.name for r in rows]
    values = [float(r.log10) for r in rows]
    fig, ax = plt.subplots(figsize=(7, 0.6 * len(rows) + 1.5))
    bars = ax.barh(names, values, color="0.35")
    ax.invert_yaxis()
    ax.set_xlabel("log10(number of labels)")
    for bar, r in zip(bars, rows):
        ax.text(bar.get_width(), bar.get_y() + bar.get_height() / 2, f"  L={r.L_even:.3g}" if r.L_even > 10**6 else f"  L={r.L_even}",
                va="center", fontsize=8)
    ax.set_xlim(0, max(values, default=1) * 1.25)
    ax.spines[["top", "right"]].set_visible(False)
    return _finish(fig, path)


def plot_solver_stats(stats: SolverStats, path) -> Path:
    fig, (left, right) = plt.subplots(1, 2, figsize=(9, 3.5))
    idx = list(range(len(stats.graph_steps)))
    left.bar(idx, stats.graph_steps, color="0.35")
    left.set_xlabel("graph")
    left.set_ylabel("steps")
    left.set_xticks(idx)
    kinds = list(stats.erasures)
    right.bar(range(len(kinds)), [stats.erasures[k] for k in kinds], color="0.6")
    right.set_xticks(range(len(kinds)))
    right.set_xticklabels(kinds, rotation=15, fontsize=8)
    right.set_ylabel("erasures")
    for ax in (left, right):
        ax.spines[["top", "right"]].set_visible(False)
    return _finish(fig, path)
