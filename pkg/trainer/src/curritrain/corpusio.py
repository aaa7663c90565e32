"""Readers for the two files the trainer consumes.

The corpus reader takes the canonical tokenized JSONL the preprocessing CLI
emits (``id``, ``data_tokens``, ``text_tokens`` per line); the schedule reader
takes the schedule JSONL with its parameter header. These files are the whole
contract between the packages, so both readers validate aggressively and
fail with the 1-based line number.
"""

from __future__ import annotations

import json
from dataclasses import dataclass


class CorpusReadError(ValueError):
    """Corpus file rejected; message names the file and line."""


class ScheduleReadError(ValueError):
    """Schedule file rejected; message names the file and line."""


@dataclass(frozen=True)
class TokenizedSample:
    id: int
    data_tokens: tuple[str, ...]
    text_tokens: tuple[str, ...]


@dataclass(frozen=True)
class ScheduleHeader:
    seed: int
    batch_size: int
    c0: float
    curriculum_steps: float
    metric: str
    side: str


@dataclass(frozen=True)
class ScheduleStep:
    t: int
    competence: float
    ids: tuple[int, ...]


def _json_line(path, line_num: int, line: str, error):
    try:
        record = json.loads(line)
    except json.JSONDecodeError as exc:
        raise error(f"{path}: line {line_num}: invalid JSON ({exc})") from exc
    if not isinstance(record, dict):
        raise error(f"{path}: line {line_num}: expected a JSON object")
    return record


def _token_list(record, key, path, line_num: int) -> tuple[str, ...]:
    value = record.get(key)
    if not isinstance(value, list) or not all(isinstance(tok, str) for tok in value):
        raise CorpusReadError(f"{path}: line {line_num}: {key!r} must be a list of strings")
    if not value:
        raise CorpusReadError(f"{path}: line {line_num}: {key!r} is empty")
    return tuple(value)


def read_corpus(path) -> list[TokenizedSample]:
    """Load tokenized samples; ids must be dense 0..M-1 so batches can index."""
    samples: list[TokenizedSample] = []
    with open(path, encoding="utf-8") as handle:
        for line_num, line in enumerate(handle, start=1):
            if not line.strip():
                continue
            record = _json_line(path, line_num, line, CorpusReadError)
            sample_id = record.get("id")
            if not isinstance(sample_id, int) or isinstance(sample_id, bool):
                raise CorpusReadError(f"{path}: line {line_num}: 'id' must be an integer")
            samples.append(
                TokenizedSample(
                    id=sample_id,
                    data_tokens=_token_list(record, "data_tokens", path, line_num),
                    text_tokens=_token_list(record, "text_tokens", path, line_num),
                )
            )
    if not samples:
        raise CorpusReadError(f"{path}: no samples")
    samples.sort(key=lambda sample: sample.id)
    for position, sample in enumerate(samples):
        if sample.id != position:
            raise CorpusReadError(
                f"{path}: sample ids must be exactly 0..{len(samples) - 1}, "
                f"found {sample.id} at position {position}"
            )
    return samples


_HEADER_KEYS = ("seed", "batch_size", "c0", "lambda", "metric", "side")


def read_schedule(path) -> tuple[ScheduleHeader, list[ScheduleStep]]:
    """Load a schedule file: one header line, then one line per step."""
    header: ScheduleHeader | None = None
    steps: list[ScheduleStep] = []
    with open(path, encoding="utf-8") as handle:
        for line_num, line in enumerate(handle, start=1):
            if not line.strip():
                continue
            record = _json_line(path, line_num, line, ScheduleReadError)
            if header is None:
                missing = [key for key in _HEADER_KEYS if key not in record]
                if missing:
                    raise ScheduleReadError(
                        f"{path}: line {line_num}: header missing {missing}"
                    )
                header = ScheduleHeader(
                    seed=int(record["seed"]),
                    batch_size=int(record["batch_size"]),
                    c0=float(record["c0"]),
                    curriculum_steps=float(record["lambda"]),
                    metric=str(record["metric"]),
                    side=str(record["side"]),
                )
                continue
            expected_t = len(steps) + 1
            if record.get("t") != expected_t:
                raise ScheduleReadError(
                    f"{path}: line {line_num}: expected step {expected_t}, got {record.get('t')!r}"
                )
            raw_ids = record.get("ids")
            if not isinstance(raw_ids, list) or not all(
                isinstance(i, int) and not isinstance(i, bool) and i >= 0 for i in raw_ids
            ):
                raise ScheduleReadError(
                    f"{path}: line {line_num}: 'ids' must be a list of non-negative integers"
                )
            competence = record.get("competence")
            if not isinstance(competence, (int, float)) or isinstance(competence, bool):
                raise ScheduleReadError(f"{path}: line {line_num}: 'competence' must be a number")
            steps.append(ScheduleStep(t=expected_t, competence=float(competence), ids=tuple(raw_ids)))
    if header is None:
        raise ScheduleReadError(f"{path}: empty schedule file")
    return header, steps
