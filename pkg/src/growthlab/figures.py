"""Matplotlib figure rendering for the CLI report paths.

All figures are written to files (SVG by default) with deterministic
content: fixed hash salt, no embedded timestamps.
"""

from __future__ import annotations

from typing import Sequence

import matplotlib

matplotlib.use("Agg")
matplotlib.rcParams["svg.hashsalt"] = "growthlab"

import matplotlib.pyplot as plt  # noqa: E402


def _save(fig, path: str) -> None:
    fig.savefig(path, metadata={"Date": None})
    plt.close(fig)


def scatter_figure(
    x: Sequence[float],
    y: Sequence[float],
    xlabel: str,
    ylabel: str,
    path: str,
    title: str | None = None,
) -> None:
    fig, ax = plt.subplots(figsize=(7, 5))
    ax.scatter(x, y, s=18, alpha=0.8)
    ax.set_xlabel(xlabel)
    ax.set_ylabel(ylabel)
    if title:
        ax.set_title(title)
    ax.grid(True, alpha=0.3)
    fig.tight_layout()
    _save(fig, path)


def trajectory_figure(trajectory, path: str, breakeven: int | None = None) -> None:
    """Two-track output curves with the break-even period marked."""
    t = [pt.t for pt in trajectory]
    fig, (ax1, ax2) = plt.subplots(2, 1, figsize=(7, 8), sharex=True)
    ax1.plot(t, [pt.y_base for pt in trajectory], label="no research allocation")
    ax1.plot(t, [pt.y_rd for pt in trajectory], label="with research allocation")
    ax1.set_ylabel("output")
    ax1.legend()
    ax1.grid(True, alpha=0.3)
    ax2.plot(t, [pt.effectiveness for pt in trajectory], color="tab:green")
    ax2.axhline(1.0, color="gray", linewidth=0.8)
    if breakeven is not None:
        ax2.axvline(breakeven, color="tab:red", linestyle="--", label=f"break-even t={breakeven}")
        ax2.legend()
    ax2.set_xlabel("period")
    ax2.set_ylabel("effectiveness")
    ax2.grid(True, alpha=0.3)
    fig.tight_layout()
    _save(fig, path)


def cluster_figure(model, outcomes: dict[str, float], path: str) -> None:
    """Countries by cluster, plotted against the outcome variable."""
    fig, ax = plt.subplots(figsize=(8, 5))
    labels = model.matrix.labels
    for j in range(model.k):
        xs = [i for i in range(len(labels)) if model.assignments[i] == j]
        ys = [outcomes[labels[i]] for i in xs]
        ax.scatter(xs, ys, label=f"cluster {j}", s=24)
    ax.set_xlabel("country (row order)")
    ax.set_ylabel("outcome")
    ax.legend()
    ax.grid(True, alpha=0.3)
    fig.tight_layout()
    _save(fig, path)
