"""Corpus difficulty scoring and competence-based batch scheduling."""

from .corpus import (
    Corpus,
    CorpusFormatError,
    MRParseError,
    Sample,
    Side,
    SlotValue,
    linearize_data,
    load_e2e,
    load_jsonl,
    make_sample,
    parse_e2e_mr,
    side_tokens,
    tokenize,
    write_corpus,
)
from .curriculum import (
    CdfTable,
    CompetenceParams,
    Schedule,
    ScheduleStep,
    cdf_normalize,
    competence,
    eligible_set,
    generate_schedule,
    read_schedule,
    sample_batch,
    write_schedule,
)
from .metrics import (
    DifficultyScore,
    MetricConfigError,
    MetricKind,
    d_dld,
    d_length,
    d_ped,
    d_rarity,
    d_sed,
    read_scores,
    score_corpus,
    write_scores,
)
from .stats import UnigramModel, fit, load_model, save_model

__version__ = "0.1.0"

__all__ = [
    "CdfTable",
    "CompetenceParams",
    "Corpus",
    "CorpusFormatError",
    "DifficultyScore",
    "MRParseError",
    "MetricConfigError",
    "MetricKind",
    "Sample",
    "Schedule",
    "ScheduleStep",
    "Side",
    "SlotValue",
    "UnigramModel",
    "cdf_normalize",
    "competence",
    "d_dld",
    "d_length",
    "d_ped",
    "d_rarity",
    "d_sed",
    "eligible_set",
    "fit",
    "generate_schedule",
    "linearize_data",
    "load_e2e",
    "load_jsonl",
    "load_model",
    "make_sample",
    "parse_e2e_mr",
    "read_schedule",
    "read_scores",
    "sample_batch",
    "save_model",
    "score_corpus",
    "side_tokens",
    "tokenize",
    "write_corpus",
    "write_schedule",
    "write_scores",
]
