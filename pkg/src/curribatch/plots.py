"""Matplotlib renderings of the analysis tables.

Figures are written straight to files next to the delimited output; the
Agg backend keeps this usable on headless machines.
"""

from __future__ import annotations

from typing import Sequence

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt

from .analysis import BinReport, HistogramBucket


def save_histogram_figure(
    buckets: Sequence[HistogramBucket], title: str, path
) -> None:
    """Bar chart of CDF bucket populations."""
    fig, ax = plt.subplots(figsize=(6, 3.5))
    try:
        width = buckets[0].high - buckets[0].low if buckets else 1.0
        ax.bar(
            [b.low for b in buckets],
            [b.count for b in buckets],
            width=width,
            align="edge",
            color="#4878a8",
            edgecolor="white",
            linewidth=0.5,
        )
        ax.set_xlim(0.0, 1.0)
        ax.set_xlabel("normalized difficulty")
        ax.set_ylabel("samples")
        ax.set_title(title)
        fig.tight_layout()
        fig.savefig(path, dpi=120)
    finally:
        plt.close(fig)


def save_bin_report_figure(reports: Sequence[BinReport], path) -> None:
    """Bar chart of distinct-difficulty-level counts per metric/side pair.

    Bin counts span orders of magnitude between count-based and weighted
    metrics, hence the log scale.
    """
    labels = [f"{r.metric.value}:{r.side.value}" for r in reports]
    fig, ax = plt.subplots(figsize=(max(6.0, 0.9 * len(reports)), 3.5))
    try:
        ax.bar(range(len(reports)), [r.num_bins for r in reports], color="#4878a8")
        ax.set_xticks(range(len(reports)))
        ax.set_xticklabels(labels, rotation=45, ha="right")
        if reports and min(r.num_bins for r in reports) > 0:
            ax.set_yscale("log")
        ax.set_ylabel("distinct difficulty levels")
        ax.set_title("difficulty resolution by metric")
        fig.tight_layout()
        fig.savefig(path, dpi=120)
    finally:
        plt.close(fig)
