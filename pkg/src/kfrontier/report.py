"""Figure rendering for the CLI report paths.

Every renderer takes already-computed columns (the same data written to the
delimited output) and draws to a file; nothing here computes model
quantities.  The Agg backend is forced so rendering works headless.
"""

from __future__ import annotations

from collections.abc import Sequence

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402  (backend must be set first)

__all__ = ["render_lines", "render_panels", "render_frontier", "render_segments"]


def render_segments(
    path: str,
    segments: dict[str, tuple[Sequence[float], Sequence[float]]],
    *,
    xlabel: str,
    ylabel: str,
    title: str | None = None,
) -> None:
    """Lines with per-series x support (curves of different extent)."""
    fig, ax = plt.subplots(figsize=(6.0, 4.0))
    for label, (xs, ys) in segments.items():
        ax.plot(xs, ys, label=label)
    ax.set_xlabel(xlabel)
    ax.set_ylabel(ylabel)
    if title:
        ax.set_title(title)
    ax.legend(frameon=False)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def render_lines(
    path: str,
    x: Sequence[float],
    series: dict[str, Sequence[float]],
    *,
    xlabel: str,
    ylabel: str,
    title: str | None = None,
    hline: float | None = None,
) -> None:
    """One axes, one line per named series."""
    fig, ax = plt.subplots(figsize=(6.0, 4.0))
    for label, ys in series.items():
        ax.plot(x, ys, label=label)
    if hline is not None:
        ax.axhline(hline, color="gray", lw=0.8, ls="--")
    ax.set_xlabel(xlabel)
    ax.set_ylabel(ylabel)
    if title:
        ax.set_title(title)
    if len(series) > 1:
        ax.legend(frameon=False)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def render_panels(
    path: str,
    x: Sequence[float],
    panels: list[tuple[str, Sequence[float], float | None]],
    *,
    xlabel: str,
    title: str | None = None,
) -> None:
    """Side-by-side panels sharing the x axis: (ylabel, values, reference level)."""
    fig, axes = plt.subplots(1, len(panels), figsize=(3.4 * len(panels), 3.4), sharex=True)
    if len(panels) == 1:
        axes = [axes]
    for ax, (ylabel, ys, ref) in zip(axes, panels):
        ax.plot(x, ys)
        if ref is not None:
            ax.axhline(ref, color="gray", lw=0.8, ls="--")
        ax.set_xlabel(xlabel)
        ax.set_ylabel(ylabel)
    if title:
        fig.suptitle(title)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def render_frontier(
    path: str,
    rho: Sequence[float],
    d: Sequence[float],
    markers: dict[str, tuple[float, float]],
    *,
    title: str | None = None,
) -> None:
    """Research-possibility frontier in (output, novelty) space with optima marked."""
    fig, ax = plt.subplots(figsize=(5.0, 4.0))
    ax.plot(rho, d, label="budget line")
    for label, (r, dd) in markers.items():
        ax.plot([r], [dd], marker="o", ls="none", label=label)
    ax.set_xlabel("output probability")
    ax.set_ylabel("novelty d")
    if title:
        ax.set_title(title)
    ax.legend(frameon=False)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
