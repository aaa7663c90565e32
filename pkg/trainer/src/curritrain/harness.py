"""Training harness: run one arm (scheduled or random baseline) over a
tokenized corpus and record per-step loss plus the exact batch composition.

The scheduled arm replays a precomputed schedule file verbatim; the baseline
draws uniform random batches of the same size. Runs with equal seeds share
model initialization, so a schedule-vs-baseline pair differs only in which
sample ids each step trains on.

The loss reported for each step is measured on a fixed probe set, not on the
step's own batch: batches differ between arms by design, so batch losses
would track batch difficulty instead of model progress and plateau positions
would be noise. The probe is either a separate held-out corpus file
(``probe_path``, the right choice for convergence comparisons, since loss on
held-out samples levels off at the generalization floor instead of decaying
toward zero) or, by default, a fixed subset of the training corpus. Either
way every arm trained on the same corpus sees the same probe.
"""

from __future__ import annotations

import random
from dataclasses import dataclass

import torch
from torch.nn import functional as F

from .corpusio import read_corpus, read_schedule
from .model import Seq2SeqCopier, Vocabulary, batch_tensors, build_vocabulary

# probe subset: size cap and the fixed sampling seed shared by all arms
PROBE_SIZE = 112
_PROBE_SEED = 727


@dataclass(frozen=True)
class ToyTask:
    """One training arm. ``schedule_path=None`` selects the random baseline;
    ``probe_path`` points at a held-out corpus to measure loss on."""

    corpus_path: str
    schedule_path: str | None = None
    probe_path: str | None = None
    batch_size: int = 28
    embedding_dim: int = 200
    hidden_dim: int = 200
    learning_rate: float = 1e-4
    max_steps: int = 500
    seed: int = 0

    def __post_init__(self):
        if self.max_steps < 1:
            raise ValueError("max_steps must be at least 1")
        if self.schedule_path is None and self.batch_size < 1:
            raise ValueError("batch_size must be at least 1")
        if self.learning_rate <= 0:
            raise ValueError("learning_rate must be positive")
        if self.embedding_dim < 1 or self.hidden_dim < 1:
            raise ValueError("model dims must be positive")


@dataclass(frozen=True)
class TrainResult:
    losses: tuple[float, ...]
    batches: tuple[tuple[int, ...], ...]
    plateau_step: int


def plateau_step(losses, tolerance: float = 0.02) -> int:
    """First 1-based step whose loss is within ``tolerance`` of the run minimum."""
    if not losses:
        raise ValueError("plateau undefined for an empty loss curve")
    cutoff = min(losses) * (1.0 + tolerance)
    for step, value in enumerate(losses, start=1):
        if value <= cutoff:
            return step
    return len(losses)  # only reachable for negative losses


def init_model(vocab_size: int, task: ToyTask) -> Seq2SeqCopier:
    """Seeded model construction; equal seeds give identical parameters."""
    torch.manual_seed(task.seed)
    return Seq2SeqCopier(vocab_size, task.embedding_dim, task.hidden_dim)


def probe_ids(corpus_size: int) -> tuple[int, ...]:
    """Fixed evaluation subset for a corpus of the given size."""
    if corpus_size <= PROBE_SIZE:
        return tuple(range(corpus_size))
    rng = random.Random(_PROBE_SEED)
    return tuple(sorted(rng.sample(range(corpus_size), PROBE_SIZE)))


def _probe_loss(model, probe_batches) -> float:
    """Mean token cross-entropy over the probe set."""
    total = 0.0
    tokens = 0
    with torch.no_grad():
        for source, source_lengths, decoder_input, target in probe_batches:
            logits = model(source, source_lengths, decoder_input)
            total += float(
                F.cross_entropy(
                    logits.reshape(-1, logits.shape[-1]),
                    target.reshape(-1),
                    ignore_index=Vocabulary.pad_index,
                    reduction="sum",
                ).item()
            )
            tokens += int((target != Vocabulary.pad_index).sum())
    return total / tokens


def train(task: ToyTask) -> TrainResult:
    samples = read_corpus(task.corpus_path)
    if task.schedule_path is not None:
        _, steps = read_schedule(task.schedule_path)
        # fail on any dangling id before touching the model
        for step in steps[: task.max_steps]:
            for sample_id in step.ids:
                if sample_id >= len(samples):
                    raise ValueError(
                        f"schedule step {step.t} references id {sample_id} "
                        f"outside the corpus of {len(samples)} samples"
                    )
        if len(steps) < task.max_steps:
            raise ValueError(
                f"schedule supplies {len(steps)} steps, task needs {task.max_steps}"
            )
        batch_ids = [steps[t].ids for t in range(task.max_steps)]
    else:
        if task.batch_size > len(samples):
            raise ValueError(
                f"batch_size {task.batch_size} exceeds corpus size {len(samples)}"
            )
        rng = random.Random(task.seed)
        batch_ids = [
            tuple(rng.sample(range(len(samples)), task.batch_size))
            for _ in range(task.max_steps)
        ]

    if task.probe_path is not None:
        probe_samples = read_corpus(task.probe_path)
    else:
        probe_samples = [samples[i] for i in probe_ids(len(samples))]

    vocab = build_vocabulary(samples)
    torch.set_num_threads(1)  # keeps CPU reductions bit-stable run to run
    model = init_model(len(vocab), task)
    optimizer = torch.optim.Adam(model.parameters(), lr=task.learning_rate)

    probe_batches = [
        batch_tensors(probe_samples[start : start + 56], vocab)
        for start in range(0, len(probe_samples), 56)
    ]

    losses: list[float] = []
    for ids in batch_ids:
        batch = [samples[i] for i in ids]
        source, source_lengths, decoder_input, target = batch_tensors(batch, vocab)
        logits = model(source, source_lengths, decoder_input)
        loss = F.cross_entropy(
            logits.reshape(-1, logits.shape[-1]),
            target.reshape(-1),
            ignore_index=Vocabulary.pad_index,
        )
        optimizer.zero_grad()
        loss.backward()
        optimizer.step()
        losses.append(_probe_loss(model, probe_batches))

    return TrainResult(
        losses=tuple(losses),
        batches=tuple(batch_ids),
        plateau_step=plateau_step(losses),
    )


def write_loss_csv(result: TrainResult, path) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as handle:
        handle.write("step,loss\n")
        for step, loss in enumerate(result.losses, start=1):
            handle.write(f"{step},{loss:.9f}\n")


def write_trace_csv(result: TrainResult, path) -> None:
    """Batch-trace log: step number and the space-joined sample ids."""
    with open(path, "w", encoding="utf-8", newline="\n") as handle:
        handle.write("step,ids\n")
        for step, ids in enumerate(result.batches, start=1):
            handle.write(f"{step},{' '.join(str(i) for i in ids)}\n")
