"""Corpus ingestion and the Sample/Corpus data model.

Two input formats are supported: the E2E restaurant CSV (``mr,ref`` columns,
meaning representations like ``name[The Vaults], eatType[pub]``) and a
flattened JSONL format with ``data`` (list of ``[slot, value]`` string pairs)
and ``text`` keys, used for pre-flattened WebNLG-style corpora and for the
canonical corpus files this package writes.

Both sides of every sample are tokenized with the same deterministic
rule-based tokenizer so that downstream token-level metrics are comparable
across datasets. Loaded corpora are immutable and can be shared freely
between threads.
"""

from __future__ import annotations

import csv
import json
from dataclasses import dataclass
from enum import Enum

# Punctuation detached from the edges of whitespace-separated chunks.
_EDGE_PUNCT = frozenset('.,!?;:()[]"\'')


class Side(str, Enum):
    """Which token stream of a sample an operation works on."""

    DATA = "data"
    TEXT = "text"
    JOINT = "joint"


class MRParseError(ValueError):
    """Malformed meaning representation; ``offset`` is the byte position."""

    def __init__(self, message: str, offset: int):
        super().__init__(f"offset {offset}: {message}")
        self.offset = offset


class CorpusFormatError(ValueError):
    """Corpus file rejected; the message names the offending row or line."""


@dataclass(frozen=True)
class SlotValue:
    """One slot-value pair of the structured side.

    ``slot`` keeps the surface form from the source (it may contain spaces,
    e.g. E2E's ``customer rating``); ``value_tokens`` is the tokenized value
    and is never empty.
    """

    slot: str
    value_tokens: tuple[str, ...]


@dataclass(frozen=True)
class Sample:
    """One data-text training pair.

    ``data_tokens`` is always the deterministic linearization of ``data``
    and ``text_tokens`` the tokenization of ``raw_text``; build instances
    through :func:`make_sample` to keep that true.
    """

    id: int
    data: tuple[SlotValue, ...]
    data_tokens: tuple[str, ...]
    text_tokens: tuple[str, ...]
    raw_text: str


@dataclass(frozen=True)
class Corpus:
    samples: tuple[Sample, ...]

    def __post_init__(self):
        for position, sample in enumerate(self.samples):
            if sample.id != position:
                raise ValueError(
                    f"sample ids must be 0..{len(self.samples) - 1}; "
                    f"found id {sample.id} at position {position}"
                )

    def __len__(self) -> int:
        return len(self.samples)

    def __iter__(self):
        return iter(self.samples)

    def __getitem__(self, sample_id: int) -> Sample:
        return self.samples[sample_id]


def tokenize(text: str) -> list[str]:
    """Split ``text`` into tokens.

    Splits on whitespace, then peels leading and trailing punctuation
    characters (``.,!?;:()[]"'``) off each chunk as separate tokens.
    Internal punctuation (``Gino's``, ``£20-25``, ``e.g``) stays attached
    and case is preserved. Joining the result with single spaces and
    re-tokenizing reproduces it exactly.
    """
    tokens: list[str] = []
    for chunk in text.split():
        start = 0
        end = len(chunk)
        while start < end and chunk[start] in _EDGE_PUNCT:
            tokens.append(chunk[start])
            start += 1
        trailing: list[str] = []
        while end > start and chunk[end - 1] in _EDGE_PUNCT:
            trailing.append(chunk[end - 1])
            end -= 1
        if start < end:
            tokens.append(chunk[start:end])
        tokens.extend(reversed(trailing))
    return tokens


def parse_e2e_mr(mr: str) -> list[SlotValue]:
    """Parse an E2E meaning representation ``slot[value](, slot[value])*``.

    Slots keep their surface form (including internal spaces); values are
    tokenized. Raises :class:`MRParseError` with the byte offset of the
    problem for unbalanced brackets, empty slots, or empty values.
    """
    pairs: list[SlotValue] = []
    i = 0
    n = len(mr)
    while True:
        while i < n and mr[i].isspace():
            i += 1
        if i == n:
            if pairs:
                raise MRParseError("trailing comma with no slot-value pair", i)
            raise MRParseError("empty meaning representation", i)
        slot_start = i
        bracket = mr.find("[", i)
        if bracket == -1:
            raise MRParseError("expected '[' after slot name", n)
        slot = mr[slot_start:bracket].strip()
        if not slot:
            raise MRParseError("empty slot name", slot_start)
        if "]" in slot or "," in slot:
            bad = min(
                idx for idx in (mr.find("]", slot_start), mr.find(",", slot_start)) if idx != -1
            )
            raise MRParseError(f"unexpected {mr[bad]!r} in slot name", bad)
        close = mr.find("]", bracket + 1)
        if close == -1:
            raise MRParseError("unbalanced '['", bracket)
        value = mr[bracket + 1 : close]
        if "[" in value:
            raise MRParseError("nested '['", bracket + 1 + value.index("["))
        value_tokens = tokenize(value)
        if not value_tokens:
            raise MRParseError("empty value", bracket + 1)
        pairs.append(SlotValue(slot=slot, value_tokens=tuple(value_tokens)))
        i = close + 1
        while i < n and mr[i].isspace():
            i += 1
        if i == n:
            return pairs
        if mr[i] != ",":
            raise MRParseError(f"expected ',' between pairs, found {mr[i]!r}", i)
        i += 1


def slot_token(slot: str) -> str:
    """Single-token form of a slot name; internal whitespace becomes ``_``."""
    return "_".join(slot.split())


def linearize_data(data: list[SlotValue] | tuple[SlotValue, ...]) -> list[str]:
    """Flatten slot-value pairs to one token sequence.

    Each pair contributes its slot name as one token followed by its value
    tokens, in original order.
    """
    tokens: list[str] = []
    for pair in data:
        tokens.append(slot_token(pair.slot))
        tokens.extend(pair.value_tokens)
    return tokens


def make_sample(sample_id: int, data: list[SlotValue] | tuple[SlotValue, ...], raw_text: str) -> Sample:
    """Build a Sample with both token sequences derived in the standard way."""
    if sample_id < 0:
        raise ValueError(f"sample id must be non-negative, got {sample_id}")
    return Sample(
        id=sample_id,
        data=tuple(data),
        data_tokens=tuple(linearize_data(data)),
        text_tokens=tuple(tokenize(raw_text)),
        raw_text=raw_text,
    )


def side_tokens(sample: Sample, side: Side) -> tuple[str, ...]:
    """Token stream of ``sample`` for ``side`` (joint = data then text)."""
    if side is Side.DATA:
        return sample.data_tokens
    if side is Side.TEXT:
        return sample.text_tokens
    return sample.data_tokens + sample.text_tokens


def load_e2e(path) -> Corpus:
    """Load an E2E-format CSV (``mr,ref`` header) into a Corpus.

    Samples get ids in row order starting at 0. Malformed rows raise
    :class:`CorpusFormatError` naming the 1-based data row.
    """
    samples: list[Sample] = []
    with open(path, encoding="utf-8", newline="") as handle:
        reader = csv.reader(handle)
        try:
            header = next(reader)
        except StopIteration:
            raise CorpusFormatError(f"{path}: empty file, expected an 'mr,ref' header") from None
        try:
            mr_col = header.index("mr")
            ref_col = header.index("ref")
        except ValueError:
            raise CorpusFormatError(
                f"{path}: header must contain 'mr' and 'ref' columns, got {header!r}"
            ) from None
        for row_num, row in enumerate(reader, start=1):
            if not row:
                continue
            if len(row) <= max(mr_col, ref_col):
                raise CorpusFormatError(f"{path}: row {row_num}: missing mr/ref fields")
            try:
                data = parse_e2e_mr(row[mr_col])
            except MRParseError as exc:
                raise CorpusFormatError(f"{path}: row {row_num}: {exc}") from exc
            samples.append(make_sample(len(samples), data, row[ref_col]))
    return Corpus(samples=tuple(samples))


def load_jsonl(path) -> Corpus:
    """Load a flattened corpus JSONL file into a Corpus.

    Each line must be a JSON object with ``data`` (list of ``[slot, value]``
    string pairs) and ``text`` (string); extra keys are ignored, so the
    canonical files written by :func:`write_corpus` load back unchanged.
    Errors raise :class:`CorpusFormatError` naming the 1-based line.
    """
    samples: list[Sample] = []
    with open(path, encoding="utf-8") as handle:
        for line_num, line in enumerate(handle, start=1):
            if not line.strip():
                continue
            try:
                record = json.loads(line)
            except json.JSONDecodeError as exc:
                raise CorpusFormatError(f"{path}: line {line_num}: invalid JSON ({exc})") from exc
            if not isinstance(record, dict) or "data" not in record or "text" not in record:
                raise CorpusFormatError(
                    f"{path}: line {line_num}: expected an object with 'data' and 'text' keys"
                )
            text = record["text"]
            if not isinstance(text, str):
                raise CorpusFormatError(f"{path}: line {line_num}: 'text' must be a string")
            raw_pairs = record["data"]
            if not isinstance(raw_pairs, list):
                raise CorpusFormatError(f"{path}: line {line_num}: 'data' must be a list")
            data: list[SlotValue] = []
            for pair in raw_pairs:
                if (
                    not isinstance(pair, (list, tuple))
                    or len(pair) != 2
                    or not all(isinstance(part, str) for part in pair)
                ):
                    raise CorpusFormatError(
                        f"{path}: line {line_num}: each data entry must be a [slot, value] string pair"
                    )
                slot, value = pair
                if not slot.strip():
                    raise CorpusFormatError(f"{path}: line {line_num}: empty slot name")
                value_tokens = tokenize(value)
                if not value_tokens:
                    raise CorpusFormatError(
                        f"{path}: line {line_num}: value for slot {slot!r} has no tokens"
                    )
                data.append(SlotValue(slot=slot.strip(), value_tokens=tuple(value_tokens)))
            samples.append(make_sample(len(samples), data, text))
    return Corpus(samples=tuple(samples))


def write_corpus(corpus: Corpus, path) -> None:
    """Write the canonical corpus JSONL (ids and tokenized sides included)."""
    with open(path, "w", encoding="utf-8", newline="\n") as handle:
        for sample in corpus:
            record = {
                "id": sample.id,
                "data": [[pair.slot, " ".join(pair.value_tokens)] for pair in sample.data],
                "text": sample.raw_text,
                "data_tokens": list(sample.data_tokens),
                "text_tokens": list(sample.text_tokens),
            }
            handle.write(json.dumps(record, ensure_ascii=False) + "\n")
