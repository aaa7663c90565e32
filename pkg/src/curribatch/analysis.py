"""Distributional summaries of difficulty scores.

Two views are computed per metric/side pair. Bin statistics describe the
raw scores: samples sharing a difficulty value form a bin, and the report
carries the bin count, the mean bin size (corpus size over bin count), and
the largest bin. Coarse metrics such as token count put many samples in few
bins; fine-grained weighted metrics spread them out. The second view
bucket-counts the normalized CDF values, which makes the rank ties visible:
a perfectly tie-free metric fills every bucket evenly.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass
from typing import Sequence

from .corpus import Corpus, Side
from .curriculum import CdfTable, cdf_normalize
from .metrics import (
    NEEDS_MODEL,
    DifficultyScore,
    MetricKind,
    score_corpus,
)
from .stats import UnigramModel, fit

# Every metric/side combination score_corpus accepts.
ALL_PAIRS: tuple[tuple[MetricKind, Side], ...] = (
    (MetricKind.LENGTH, Side.DATA),
    (MetricKind.LENGTH, Side.TEXT),
    (MetricKind.LENGTH, Side.JOINT),
    (MetricKind.RARITY, Side.DATA),
    (MetricKind.RARITY, Side.TEXT),
    (MetricKind.RARITY, Side.JOINT),
    (MetricKind.DLD, Side.JOINT),
    (MetricKind.PED, Side.JOINT),
    (MetricKind.SED, Side.JOINT),
)

# Raw scores closer than this are treated as the same difficulty level.
BIN_TOLERANCE = 1e-9


@dataclass(frozen=True)
class BinReport:
    metric: MetricKind
    side: Side
    num_bins: int
    avg_bin_size: float
    max_bin_size: int


@dataclass(frozen=True)
class HistogramBucket:
    low: float
    high: float
    count: int


@dataclass(frozen=True)
class PairAnalysis:
    kind: MetricKind
    side: Side
    scores: tuple[DifficultyScore, ...]
    report: BinReport
    histogram: tuple[HistogramBucket, ...]


def bin_sizes(values: Sequence[float], tolerance: float = BIN_TOLERANCE) -> list[int]:
    """Sizes of the tie groups in ``values``.

    Values are sorted and a new group starts whenever the gap to the previous
    value exceeds ``tolerance``. Integer-valued metrics group exactly since
    distinct counts differ by at least 1.
    """
    if not values:
        return []
    ordered = sorted(values)
    sizes = [1]
    for prev, cur in zip(ordered, ordered[1:]):
        if cur - prev > tolerance:
            sizes.append(1)
        else:
            sizes[-1] += 1
    return sizes


def bin_report(scores: Sequence[DifficultyScore], kind: MetricKind, side: Side) -> BinReport:
    """Bin statistics over raw difficulty values."""
    if not scores:
        raise ValueError("cannot build a bin report from an empty score list")
    sizes = bin_sizes([score.value for score in scores])
    return BinReport(
        metric=kind,
        side=side,
        num_bins=len(sizes),
        avg_bin_size=len(scores) / len(sizes),
        max_bin_size=max(sizes),
    )


def cdf_histogram(table: CdfTable, num_buckets: int) -> list[HistogramBucket]:
    """Count normalized difficulties into right-closed equal-width buckets.

    Bucket k covers (k/B, (k+1)/B], so the value 1.0 lands in the last
    bucket and bucket populations sum to the table size.
    """
    if num_buckets < 1:
        raise ValueError(f"num_buckets must be positive, got {num_buckets}")
    counts = [0] * num_buckets
    for entry in table.entries:
        idx = math.ceil(entry.value * num_buckets) - 1
        if idx >= num_buckets:
            idx = num_buckets - 1
        # the product can round up past an exact boundary (e.g. 0.14 * 50);
        # a value sitting on a bucket's upper edge belongs below
        if idx > 0 and entry.value <= idx / num_buckets:
            idx -= 1
        if idx < 0:
            idx = 0
        counts[idx] += 1
    return [
        HistogramBucket(low=k / num_buckets, high=(k + 1) / num_buckets, count=counts[k])
        for k in range(num_buckets)
    ]


class ModelCache:
    """Lazily fits one unigram model per side of a fixed corpus."""

    def __init__(self, corpus: Corpus) -> None:
        self._corpus = corpus
        self._models: dict[Side, UnigramModel] = {}

    def get(self, side: Side) -> UnigramModel:
        if side not in self._models:
            self._models[side] = fit(self._corpus, side)
        return self._models[side]


def model_side_for(kind: MetricKind, side: Side) -> Side:
    """Which side the weight model is fit on: rarity matches the scored side, sed is joint."""
    return side if kind is MetricKind.RARITY else Side.JOINT


def analyze_pair(
    corpus: Corpus,
    kind: MetricKind,
    side: Side,
    num_buckets: int,
    cache: ModelCache | None = None,
) -> PairAnalysis:
    """Score one metric/side pair and summarize raw bins plus CDF buckets."""
    if cache is None:
        cache = ModelCache(corpus)
    model = cache.get(model_side_for(kind, side)) if kind in NEEDS_MODEL else None
    scores = score_corpus(corpus, kind, side, model=model)
    table = cdf_normalize(scores)
    return PairAnalysis(
        kind=kind,
        side=side,
        scores=tuple(scores),
        report=bin_report(scores, kind, side),
        histogram=tuple(cdf_histogram(table, num_buckets)),
    )


def compare_metrics(
    corpus: Corpus,
    pairs: Sequence[tuple[MetricKind, Side]] = ALL_PAIRS,
    num_buckets: int = 20,
) -> list[PairAnalysis]:
    """Analyze several metric/side pairs over one corpus, sharing fitted models."""
    cache = ModelCache(corpus)
    return [analyze_pair(corpus, kind, side, num_buckets, cache) for kind, side in pairs]


def write_bin_reports(reports: Sequence[BinReport], path) -> None:
    """Write bin reports as CSV (``metric,side,num_bins,avg_bin_size,max_bin_size``)."""
    with open(path, "w", encoding="utf-8", newline="") as handle:
        writer = csv.writer(handle, lineterminator="\n")
        writer.writerow(["metric", "side", "num_bins", "avg_bin_size", "max_bin_size"])
        for report in reports:
            writer.writerow(
                [
                    report.metric.value,
                    report.side.value,
                    report.num_bins,
                    f"{report.avg_bin_size:.9f}",
                    report.max_bin_size,
                ]
            )


def write_histogram(buckets: Sequence[HistogramBucket], path) -> None:
    """Write histogram buckets as CSV (``bucket_low,bucket_high,count``)."""
    with open(path, "w", encoding="utf-8", newline="") as handle:
        writer = csv.writer(handle, lineterminator="\n")
        writer.writerow(["bucket_low", "bucket_high", "count"])
        for bucket in buckets:
            writer.writerow([f"{bucket.low:.9f}", f"{bucket.high:.9f}", bucket.count])
