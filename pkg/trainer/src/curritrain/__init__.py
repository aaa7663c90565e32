"""Toy encoder-decoder trainer driven by precomputed batch schedules."""

from .copytask import make_copy_task, token_inventory
from .corpusio import (
    CorpusReadError,
    ScheduleHeader,
    ScheduleReadError,
    ScheduleStep,
    TokenizedSample,
    read_corpus,
    read_schedule,
)
from .harness import (
    PROBE_SIZE,
    ToyTask,
    TrainResult,
    init_model,
    plateau_step,
    probe_ids,
    train,
    write_loss_csv,
    write_trace_csv,
)
from .model import (
    BOS,
    EOS,
    PAD,
    UNK,
    Seq2SeqCopier,
    Vocabulary,
    batch_tensors,
    build_vocabulary,
)

__version__ = "0.1.0"

__all__ = [
    "BOS",
    "CorpusReadError",
    "EOS",
    "PAD",
    "PROBE_SIZE",
    "ScheduleHeader",
    "ScheduleReadError",
    "ScheduleStep",
    "Seq2SeqCopier",
    "TokenizedSample",
    "ToyTask",
    "TrainResult",
    "UNK",
    "Vocabulary",
    "batch_tensors",
    "build_vocabulary",
    "init_model",
    "make_copy_task",
    "plateau_step",
    "probe_ids",
    "read_corpus",
    "read_schedule",
    "token_inventory",
    "train",
    "write_loss_csv",
    "write_trace_csv",
    "__version__",
]
