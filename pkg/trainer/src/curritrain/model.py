"""Single-layer GRU encoder-decoder, the smallest model that can consume a
batch schedule: no attention, shared embedding table, teacher forcing."""

from __future__ import annotations

from collections.abc import Iterable, Sequence

import torch
from torch import nn

from .corpusio import TokenizedSample

PAD, BOS, EOS, UNK = "<pad>", "<bos>", "<eos>", "<unk>"
_SPECIALS = (PAD, BOS, EOS, UNK)


class Vocabulary:
    """Token-to-index table with fixed special slots at 0..3."""

    def __init__(self, tokens: Iterable[str]):
        self._index = {token: position for position, token in enumerate(_SPECIALS)}
        for token in tokens:
            if token not in self._index:
                self._index[token] = len(self._index)

    def __len__(self) -> int:
        return len(self._index)

    def index(self, token: str) -> int:
        return self._index.get(token, self._index[UNK])

    pad_index = 0
    bos_index = 1
    eos_index = 2


def build_vocabulary(samples: Iterable[TokenizedSample]) -> Vocabulary:
    seen: set[str] = set()
    for sample in samples:
        seen.update(sample.data_tokens)
        seen.update(sample.text_tokens)
    return Vocabulary(sorted(seen))


class Seq2SeqCopier(nn.Module):
    def __init__(self, vocab_size: int, embedding_dim: int = 200, hidden_dim: int = 200):
        super().__init__()
        self.embed = nn.Embedding(vocab_size, embedding_dim, padding_idx=Vocabulary.pad_index)
        self.encoder = nn.GRU(embedding_dim, hidden_dim, batch_first=True)
        self.decoder = nn.GRU(embedding_dim, hidden_dim, batch_first=True)
        self.project = nn.Linear(hidden_dim, vocab_size)

    def forward(
        self,
        source: torch.Tensor,
        source_lengths: torch.Tensor,
        decoder_input: torch.Tensor,
    ) -> torch.Tensor:
        packed = nn.utils.rnn.pack_padded_sequence(
            self.embed(source), source_lengths, batch_first=True, enforce_sorted=False
        )
        _, state = self.encoder(packed)
        output, _ = self.decoder(self.embed(decoder_input), state)
        return self.project(output)


def batch_tensors(
    batch: Sequence[TokenizedSample], vocab: Vocabulary
) -> tuple[torch.Tensor, torch.Tensor, torch.Tensor, torch.Tensor]:
    """Pad a batch into (source, source_lengths, decoder_input, target).

    The decoder is teacher-forced: input is BOS + text tokens, target is the
    text tokens + EOS, both padded to the longest text in the batch.
    """
    if not batch:
        raise ValueError("empty batch")
    source_lengths = torch.tensor([len(s.data_tokens) for s in batch], dtype=torch.int64)
    max_source = int(source_lengths.max())
    max_target = max(len(s.text_tokens) for s in batch) + 1
    pad = Vocabulary.pad_index
    source = torch.full((len(batch), max_source), pad, dtype=torch.int64)
    decoder_input = torch.full((len(batch), max_target), pad, dtype=torch.int64)
    target = torch.full((len(batch), max_target), pad, dtype=torch.int64)
    for row, sample in enumerate(batch):
        for col, token in enumerate(sample.data_tokens):
            source[row, col] = vocab.index(token)
        decoder_input[row, 0] = Vocabulary.bos_index
        for col, token in enumerate(sample.text_tokens):
            decoder_input[row, col + 1] = vocab.index(token)
            target[row, col] = vocab.index(token)
        target[row, len(sample.text_tokens)] = Vocabulary.eos_index
    # pack_padded_sequence wants lengths on the CPU regardless of device
    return source, source_lengths, decoder_input, target
