"""Smoothed unigram statistics over corpus sides.

A fitted :class:`UnigramModel` turns tokens into add-one-smoothed
probabilities and the derived ``-ln p(w)`` weights used by the rarity and
weighted edit-distance metrics. Smoothing reserves one denominator slot for
unseen tokens, so every weight is finite and strictly positive even when a
model is reused on a side or split it was not fitted on.
"""

from __future__ import annotations

import json
import math
from collections import Counter
from dataclasses import dataclass, field

from .corpus import Corpus, Side, side_tokens


@dataclass(frozen=True)
class UnigramModel:
    """Token counts plus add-one smoothing for one corpus side.

    ``prob(w) = (count(w) + 1) / (total + vocab_size + 1)``; a token never
    seen in fitting gets ``1 / (total + vocab_size + 1)``.
    """

    side: Side
    counts: dict[str, int] = field(repr=False)
    total: int = 0

    @property
    def vocab_size(self) -> int:
        return len(self.counts)

    def probability(self, token: str) -> float:
        return (self.counts.get(token, 0) + 1) / (self.total + self.vocab_size + 1)

    def neg_log_prob(self, token: str) -> float:
        """Weight of ``token`` in nats; finite and > 0 for every token."""
        return -math.log(self.probability(token))

    def to_json(self) -> str:
        payload = {"side": self.side.value, "total": self.total, "counts": self.counts}
        return json.dumps(payload, ensure_ascii=False, sort_keys=True)

    @classmethod
    def from_json(cls, text: str) -> "UnigramModel":
        payload = json.loads(text)
        counts = {token: int(count) for token, count in payload["counts"].items()}
        return cls(side=Side(payload["side"]), counts=counts, total=int(payload["total"]))


def fit(corpus: Corpus, side: Side) -> UnigramModel:
    """Count tokens on one side of ``corpus`` and return the smoothed model.

    ``Side.JOINT`` counts each sample's data tokens and text tokens once
    each. Raises ``ValueError`` on an empty corpus or an empty token stream.
    """
    if len(corpus) == 0:
        raise ValueError("cannot fit a unigram model on an empty corpus")
    counts: Counter[str] = Counter()
    for sample in corpus:
        counts.update(side_tokens(sample, side))
    if not counts:
        raise ValueError(f"corpus has no tokens on side {side.value!r}")
    return UnigramModel(side=side, counts=dict(counts), total=sum(counts.values()))


def save_model(model: UnigramModel, path) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as handle:
        handle.write(model.to_json() + "\n")


def load_model(path) -> UnigramModel:
    with open(path, encoding="utf-8") as handle:
        return UnigramModel.from_json(handle.read())
