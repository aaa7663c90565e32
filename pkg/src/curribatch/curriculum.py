"""Competence schedule over difficulty-ranked samples.

Raw difficulty scores are first normalized to empirical CDF values: each
sample gets the fraction of the corpus that is at most as difficult as it
is, so d-bar values live in (0, 1] and only the ordering of the raw scores
matters. A square-root competence curve then maps the training step t to the
fraction of that ranking a batch may draw from, starting at ``initial`` and
reaching exactly 1.0 at ``curriculum_steps``. Batches are sampled uniformly
from the eligible prefix with a seeded ``random.Random``, so a schedule is
reproducible from its header alone.
"""

from __future__ import annotations

import json
import math
import random
from bisect import bisect_right
from dataclasses import dataclass
from typing import Sequence

from .corpus import Side
from .metrics import DifficultyScore, MetricKind


@dataclass(frozen=True)
class CompetenceParams:
    """Square-root growth curve: competence(0) = initial, competence(curriculum_steps) = 1."""

    curriculum_steps: float
    initial: float = 0.1

    def __post_init__(self) -> None:
        if not (0.0 < self.initial <= 1.0):
            raise ValueError(f"initial competence must be in (0, 1], got {self.initial}")
        if not (self.curriculum_steps > 0.0) or math.isinf(self.curriculum_steps):
            raise ValueError(f"curriculum_steps must be finite and positive, got {self.curriculum_steps}")


def competence(t: int, params: CompetenceParams) -> float:
    """Eligible difficulty fraction at step ``t``; exactly 1.0 once t reaches the ramp length."""
    if t < 0:
        raise ValueError(f"step must be non-negative, got {t}")
    if t >= params.curriculum_steps:
        return 1.0
    c0_sq = params.initial * params.initial
    return min(1.0, math.sqrt(t * (1.0 - c0_sq) / params.curriculum_steps + c0_sq))


@dataclass(frozen=True)
class CdfTable:
    """Normalized difficulty per sample, in the order the scores were given."""

    entries: tuple[DifficultyScore, ...]

    def __len__(self) -> int:
        return len(self.entries)

    @property
    def min_value(self) -> float:
        return min(entry.value for entry in self.entries)


def cdf_normalize(scores: Sequence[DifficultyScore]) -> CdfTable:
    """Map raw scores to upper-rank empirical CDF values.

    A sample's normalized difficulty is ``|{j : d_j <= d_i}| / M``. Ties use
    exact float equality and all receive the shared upper rank, so the result
    depends only on the ordering of the raw values.
    """
    if not scores:
        raise ValueError("cannot normalize an empty score list")
    seen: set[int] = set()
    for score in scores:
        if score.sample_id in seen:
            raise ValueError(f"duplicate sample id {score.sample_id}")
        seen.add(score.sample_id)
        if math.isnan(score.value) or math.isinf(score.value):
            raise ValueError(f"sample {score.sample_id}: difficulty must be finite, got {score.value}")
        if score.value < 0:
            raise ValueError(f"sample {score.sample_id}: difficulty must be non-negative, got {score.value}")
    ordered = sorted(score.value for score in scores)
    m = len(ordered)
    entries = tuple(
        DifficultyScore(sample_id=score.sample_id, value=bisect_right(ordered, score.value) / m)
        for score in scores
    )
    return CdfTable(entries=entries)


def eligible_set(table: CdfTable, cutoff: float) -> list[int]:
    """Sample ids whose normalized difficulty is at most ``cutoff``, sorted.

    A cutoff below the easiest rank would leave nothing to sample, so the
    set falls back to the easiest tie group instead of coming back empty.
    """
    ids = sorted(entry.sample_id for entry in table.entries if entry.value <= cutoff)
    if ids:
        return ids
    floor = table.min_value
    return sorted(entry.sample_id for entry in table.entries if entry.value == floor)


def sample_batch(eligible: Sequence[int], batch_size: int, rng: random.Random) -> list[int]:
    """Draw ``batch_size`` ids uniformly from ``eligible``.

    Without replacement when the pool is large enough (partial Fisher-Yates
    over a copy), with replacement otherwise.
    """
    n = len(eligible)
    if n == 0:
        raise ValueError("cannot sample from an empty pool")
    if batch_size < 1:
        raise ValueError(f"batch_size must be positive, got {batch_size}")
    if n >= batch_size:
        pool = list(eligible)
        for k in range(batch_size):
            pick = rng.randrange(k, n)
            pool[k], pool[pick] = pool[pick], pool[k]
        return pool[:batch_size]
    return [eligible[rng.randrange(n)] for _ in range(batch_size)]


@dataclass(frozen=True)
class ScheduleStep:
    t: int
    competence: float
    ids: tuple[int, ...]


@dataclass(frozen=True)
class Schedule:
    seed: int
    batch_size: int
    c0: float
    curriculum_steps: float
    metric: MetricKind
    side: Side
    steps: tuple[ScheduleStep, ...]


def generate_schedule(
    table: CdfTable,
    params: CompetenceParams,
    *,
    num_steps: int,
    batch_size: int,
    seed: int,
    metric: MetricKind,
    side: Side,
) -> Schedule:
    """Batch ids for steps 1..num_steps under the competence curve.

    The eligible pool is recomputed only when the competence value changes;
    once it saturates at 1.0 every batch is a uniform draw from the full
    corpus. ``metric`` and ``side`` are carried along for provenance only.
    """
    if num_steps < 0:
        raise ValueError(f"num_steps must be non-negative, got {num_steps}")
    rng = random.Random(seed)
    steps: list[ScheduleStep] = []
    last_c: float | None = None
    pool: list[int] = []
    for t in range(1, num_steps + 1):
        c = competence(t, params)
        if c != last_c:
            pool = eligible_set(table, c)
            last_c = c
        ids = sample_batch(pool, batch_size, rng)
        steps.append(ScheduleStep(t=t, competence=c, ids=tuple(ids)))
    return Schedule(
        seed=seed,
        batch_size=batch_size,
        c0=params.initial,
        curriculum_steps=params.curriculum_steps,
        metric=metric,
        side=side,
        steps=tuple(steps),
    )


def write_schedule(schedule: Schedule, path) -> None:
    """Write a schedule as JSONL: one header object, then one object per step."""
    with open(path, "w", encoding="utf-8", newline="\n") as handle:
        header = {
            "seed": schedule.seed,
            "batch_size": schedule.batch_size,
            "c0": schedule.c0,
            "lambda": schedule.curriculum_steps,
            "metric": schedule.metric.value,
            "side": schedule.side.value,
        }
        handle.write(json.dumps(header, ensure_ascii=False) + "\n")
        for step in schedule.steps:
            row = {"t": step.t, "competence": step.competence, "ids": list(step.ids)}
            handle.write(json.dumps(row, ensure_ascii=False) + "\n")


def read_schedule(path) -> Schedule:
    """Read a schedule written by :func:`write_schedule`, validating step order."""
    with open(path, encoding="utf-8") as handle:
        lines = [line for line in (raw.strip() for raw in handle) if line]
    if not lines:
        raise ValueError(f"{path}: empty schedule file")
    header = json.loads(lines[0])
    required = {"seed", "batch_size", "c0", "lambda", "metric", "side"}
    if not isinstance(header, dict) or not required.issubset(header):
        raise ValueError(f"{path}: line 1: bad schedule header")
    steps: list[ScheduleStep] = []
    for lineno, line in enumerate(lines[1:], start=2):
        row = json.loads(line)
        if not isinstance(row, dict) or not {"t", "competence", "ids"}.issubset(row):
            raise ValueError(f"{path}: line {lineno}: bad schedule step")
        t = row["t"]
        if t != len(steps) + 1:
            raise ValueError(f"{path}: line {lineno}: expected step {len(steps) + 1}, got {t}")
        ids = row["ids"]
        if not isinstance(ids, list) or not all(isinstance(i, int) for i in ids):
            raise ValueError(f"{path}: line {lineno}: ids must be a list of integers")
        steps.append(ScheduleStep(t=t, competence=float(row["competence"]), ids=tuple(ids)))
    return Schedule(
        seed=int(header["seed"]),
        batch_size=int(header["batch_size"]),
        c0=float(header["c0"]),
        curriculum_steps=float(header["lambda"]),
        metric=MetricKind(header["metric"]),
        side=Side(header["side"]),
        steps=tuple(steps),
    )
