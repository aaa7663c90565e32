"""Difficulty metrics over data-text token sequences.

Five metrics are provided: token count (``length``), summed ``-ln p(w)``
unigram weights (``rarity``), restricted Damerau-Levenshtein distance
(``dld``), insert/delete-only edit distance (``ped``), and its
rarity-weighted variant (``sed``). Length and rarity apply to a single
side or to the concatenation of both; the three edit metrics always align
the data tokens against the text tokens.

All edit metrics run a Wagner-Fischer table over the two sequences; matches
require exact (case-sensitive) token equality. ``dld`` is the optimal string
alignment variant: unit-cost substitute/insert/delete plus adjacent
transposition, with each aligned region edited at most once. ``ped`` drops
substitution and transposition, leaving unit-cost insert/delete only, which
makes it ``len(a) + len(b) - 2 * LCS(a, b)``. ``sed`` keeps the insert/delete
moves but charges ``-ln p(w)`` for the token being inserted or deleted, so a
rare token is more expensive to edit than a frequent one; costs are in nats
and matches are free.

Weight-taking functions only require an object with a ``neg_log_prob(token)``
method, which :class:`curribatch.stats.UnigramModel` provides.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass
from enum import Enum
from typing import Protocol, Sequence

from .corpus import Corpus, Side, side_tokens


class MetricKind(str, Enum):
    LENGTH = "length"
    RARITY = "rarity"
    DLD = "dld"
    PED = "ped"
    SED = "sed"


# Edit metrics align data against text; a single side makes no sense for them.
JOINT_ONLY = frozenset({MetricKind.DLD, MetricKind.PED, MetricKind.SED})
NEEDS_MODEL = frozenset({MetricKind.RARITY, MetricKind.SED})


class TokenWeights(Protocol):
    def neg_log_prob(self, token: str) -> float: ...


class MetricConfigError(ValueError):
    """Invalid metric/side/model combination."""


@dataclass(frozen=True)
class DifficultyScore:
    sample_id: int
    value: float


def d_length(seq: Sequence[str]) -> int:
    """Token count of ``seq``."""
    return len(seq)


def d_rarity(seq: Sequence[str], model: TokenWeights) -> float:
    """Sum of ``-ln p(w)`` over ``seq``; 0 for the empty sequence."""
    return sum(model.neg_log_prob(token) for token in seq)


def d_dld(data: Sequence[str], text: Sequence[str]) -> int:
    """Restricted Damerau-Levenshtein distance between token sequences.

    Unit-cost substitution, insertion, deletion, and adjacent transposition,
    with the optimal-string-alignment restriction (no region is edited
    twice, so e.g. ``c a -> a b c`` costs 3, not 2).
    """
    m, n = len(data), len(text)
    if m == 0:
        return n
    if n == 0:
        return m
    two_ago = [0] * (n + 1)
    prev = list(range(n + 1))
    cur = [0] * (n + 1)
    for i in range(1, m + 1):
        cur[0] = i
        a_i = data[i - 1]
        for j in range(1, n + 1):
            b_j = text[j - 1]
            cost = prev[j - 1] + (a_i != b_j)
            deletion = prev[j] + 1
            if deletion < cost:
                cost = deletion
            insertion = cur[j - 1] + 1
            if insertion < cost:
                cost = insertion
            if i > 1 and j > 1 and a_i == text[j - 2] and data[i - 2] == b_j:
                transposition = two_ago[j - 2] + 1
                if transposition < cost:
                    cost = transposition
            cur[j] = cost
        two_ago, prev, cur = prev, cur, two_ago
    return prev[n]


def d_ped(data: Sequence[str], text: Sequence[str]) -> int:
    """Insert/delete-only edit distance at unit cost."""
    m, n = len(data), len(text)
    if m == 0:
        return n
    if n == 0:
        return m
    prev = list(range(n + 1))
    cur = [0] * (n + 1)
    for i in range(1, m + 1):
        cur[0] = i
        a_i = data[i - 1]
        for j in range(1, n + 1):
            if a_i == text[j - 1]:
                cost = prev[j - 1]
                deletion = prev[j] + 1
                if deletion < cost:
                    cost = deletion
                insertion = cur[j - 1] + 1
                if insertion < cost:
                    cost = insertion
            else:
                cost = prev[j] + 1
                insertion = cur[j - 1] + 1
                if insertion < cost:
                    cost = insertion
            cur[j] = cost
        prev, cur = cur, prev
    return prev[n]


def d_sed(data: Sequence[str], text: Sequence[str], model: TokenWeights) -> float:
    """Weighted insert/delete edit distance.

    Deleting a data token or inserting a text token costs its ``-ln p(w)``
    weight; exact matches cost nothing. Reduces to :func:`d_rarity` of the
    other sequence when either side is empty.
    """
    m, n = len(data), len(text)
    del_costs = [model.neg_log_prob(token) for token in data]
    ins_costs = [model.neg_log_prob(token) for token in text]
    if m == 0:
        return sum(ins_costs)
    if n == 0:
        return sum(del_costs)
    prev = [0.0] * (n + 1)
    for j in range(1, n + 1):
        prev[j] = prev[j - 1] + ins_costs[j - 1]
    cur = [0.0] * (n + 1)
    for i in range(1, m + 1):
        delete = del_costs[i - 1]
        a_i = data[i - 1]
        cur[0] = prev[0] + delete
        for j in range(1, n + 1):
            cost = prev[j] + delete
            insertion = cur[j - 1] + ins_costs[j - 1]
            if insertion < cost:
                cost = insertion
            if a_i == text[j - 1] and prev[j - 1] < cost:
                cost = prev[j - 1]
            cur[j] = cost
        prev, cur = cur, prev
    return prev[n]


def score_corpus(
    corpus: Corpus,
    kind: MetricKind,
    side: Side = Side.JOINT,
    model: TokenWeights | None = None,
) -> list[DifficultyScore]:
    """Score every sample of ``corpus`` with one metric.

    ``model`` must be given exactly for the metrics that use token weights
    (rarity, sed); the edit metrics require ``side=JOINT``. Scores come back
    in sample-id order.
    """
    if kind in JOINT_ONLY and side is not Side.JOINT:
        raise MetricConfigError(f"metric {kind.value!r} is joint-only, got side {side.value!r}")
    if kind in NEEDS_MODEL and model is None:
        raise MetricConfigError(f"metric {kind.value!r} requires a unigram model")
    if kind not in NEEDS_MODEL and model is not None:
        raise MetricConfigError(f"metric {kind.value!r} does not take a unigram model")

    scores: list[DifficultyScore] = []
    for sample in corpus:
        if kind is MetricKind.LENGTH:
            value = float(d_length(side_tokens(sample, side)))
        elif kind is MetricKind.RARITY:
            value = d_rarity(side_tokens(sample, side), model)
        elif kind is MetricKind.DLD:
            value = float(d_dld(sample.data_tokens, sample.text_tokens))
        elif kind is MetricKind.PED:
            value = float(d_ped(sample.data_tokens, sample.text_tokens))
        else:
            value = d_sed(sample.data_tokens, sample.text_tokens, model)
        scores.append(DifficultyScore(sample_id=sample.id, value=value))
    return scores


def write_scores(scores: Sequence[DifficultyScore], kind: MetricKind, side: Side, path) -> None:
    """Write scores as CSV (``sample_id,metric,side,value``, 9 decimals)."""
    with open(path, "w", encoding="utf-8", newline="") as handle:
        writer = csv.writer(handle, lineterminator="\n")
        writer.writerow(["sample_id", "metric", "side", "value"])
        for score in scores:
            writer.writerow([score.sample_id, kind.value, side.value, f"{score.value:.9f}"])


def read_scores(path) -> tuple[list[DifficultyScore], MetricKind, Side]:
    """Read a scores CSV back; the file must hold a single metric/side."""
    scores: list[DifficultyScore] = []
    kinds: set[str] = set()
    sides: set[str] = set()
    with open(path, encoding="utf-8", newline="") as handle:
        reader = csv.reader(handle)
        header = next(reader, None)
        if header != ["sample_id", "metric", "side", "value"]:
            raise ValueError(f"{path}: expected header sample_id,metric,side,value, got {header}")
        for row in reader:
            if not row:
                continue
            sample_id, kind, side, value = row
            scores.append(DifficultyScore(sample_id=int(sample_id), value=float(value)))
            kinds.add(kind)
            sides.add(side)
    if not scores:
        raise ValueError(f"{path}: no score rows")
    if len(kinds) > 1 or len(sides) > 1:
        raise ValueError(f"{path}: mixed metrics/sides in one file: {sorted(kinds)}, {sorted(sides)}")
    return scores, MetricKind(kinds.pop()), Side(sides.pop())
