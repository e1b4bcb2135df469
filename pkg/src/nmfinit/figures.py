"""Render convergence figures next to the delimited outputs.

Figures are an optional convenience on top of the trace/report CSVs,
which stay the primary machine-readable artifacts. The Agg backend is
forced so rendering works headless.
"""

from __future__ import annotations

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402  (backend must be set first)

__all__ = ["save_trace_figure", "save_comparison_figure"]


def save_trace_figure(trace, path, title: str | None = None) -> None:
    """Plot relative error against iteration for a single run."""
    records = getattr(trace, "records", trace)
    iterations = [r.iteration for r in records]
    errors = [r.error for r in records]
    fig, ax = plt.subplots(figsize=(6.4, 4.0))
    ax.plot(iterations, errors, marker="", lw=1.5)
    ax.set_xlabel("iteration")
    ax.set_ylabel("relative error")
    ax.grid(True, alpha=0.3)
    if title:
        ax.set_title(title)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def save_comparison_figure(traces, path, title: str | None = None) -> None:
    """Overlay the error curves of several labelled runs."""
    fig, ax = plt.subplots(figsize=(6.4, 4.0))
    for label, trace in traces.items():
        records = getattr(trace, "records", trace)
        ax.plot(
            [r.iteration for r in records],
            [r.error for r in records],
            lw=1.5,
            label=label,
        )
    ax.set_xlabel("iteration")
    ax.set_ylabel("relative error")
    ax.grid(True, alpha=0.3)
    ax.legend()
    if title:
        ax.set_title(title)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
