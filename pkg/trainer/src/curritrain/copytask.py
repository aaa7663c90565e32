"""Synthetic copy-and-reorder corpus generator.

Each sample carries L value tokens under positional slots ``w0`` .. ``w{L-1}``
and a reference text that is exactly those values in sorted order, so the
target is a deterministic function of the input that a small encoder-decoder
can learn. The corpus spreads out under every difficulty lens: lengths vary
(the first three samples are pinned to lengths 1, 2, 3), token frequencies
follow a 1/rank curve, and the edit distance between the sides grows with
both length and how shuffled the values were drawn.

The output is plain JSONL with ``data`` and ``text`` keys per line, the
format the preprocessing CLI ingests directly.
"""

from __future__ import annotations

import itertools
import json
import random

_CONSONANTS = "bdfgklmnprst"
_VOWELS = "aeiou"


def token_inventory(size: int) -> list[str]:
    """First ``size`` pronounceable tokens, one syllable then two."""
    if size < 1:
        raise ValueError("vocabulary size must be at least 1")
    syllables = [c + v for c, v in itertools.product(_CONSONANTS, _VOWELS)]
    pool = itertools.chain(
        syllables,
        ("".join(pair) for pair in itertools.product(syllables, repeat=2)),
    )
    return list(itertools.islice(pool, size))


def make_copy_task(num_samples: int, vocab: int, max_len: int, seed: int) -> str:
    """Render a copy-task corpus as JSONL text, one sample per line.

    Deterministic in ``seed``: equal arguments produce byte-identical output.
    """
    if num_samples < 1:
        raise ValueError("num_samples must be at least 1")
    if max_len < 3:
        # lengths 1..max_len must cover at least three distinct values
        raise ValueError("max_len must be at least 3")
    tokens = token_inventory(vocab)
    weights = [1.0 / (rank + 1) for rank in range(len(tokens))]
    rng = random.Random(seed)
    lines = []
    for index in range(num_samples):
        length = index + 1 if index < 3 else rng.randint(1, max_len)
        values = rng.choices(tokens, weights=weights, k=length)
        record = {
            "data": [[f"w{pos}", value] for pos, value in enumerate(values)],
            "text": " ".join(sorted(values)),
        }
        lines.append(json.dumps(record, ensure_ascii=False))
    return "\n".join(lines) + "\n"
