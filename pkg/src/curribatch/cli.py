"""Command-line pipeline over the library: ingest, score, schedule, analyze.

Stages communicate through files only (corpus JSONL, scores CSV, schedule
JSONL), so downstream consumers in any ecosystem can pick the artifacts up
without bindings. Every run echoes its effective configuration into the
output directory as ``config.<command>.json``; option precedence is
command-line flags, then ``--config`` file entries, then built-in defaults.
A command exits 0 only if all of its outputs were written, and removes
partially written files on failure.
"""

from __future__ import annotations

import argparse
import contextlib
import json
import os
import sys
from pathlib import Path

from .analysis import (
    ALL_PAIRS,
    ModelCache,
    analyze_pair,
    model_side_for,
    write_bin_reports,
    write_histogram,
)
from .corpus import Side, load_e2e, load_jsonl, write_corpus
from .curriculum import CompetenceParams, cdf_normalize, generate_schedule, write_schedule
from .metrics import NEEDS_MODEL, MetricKind, read_scores, score_corpus, write_scores
from .plots import save_bin_report_figure, save_histogram_figure
from .stats import fit, save_model

_DEFAULTS = {
    "input": None,
    "output": None,
    "format": None,
    "metric": None,
    "side": "joint",
    "c0": 0.1,
    "lambda": 1000.0,
    "batch_size": 28,
    "steps": None,
    "seed": 0,
    "buckets": 20,
}

# External option name -> argparse dest ("lambda" is a keyword, "batch-size" has a dash).
_DESTS = {"lambda": "curriculum_steps", "batch_size": "batch_size"}

_COMMAND_KEYS = {
    "ingest": ("input", "output", "format"),
    "score": ("input", "output", "metric", "side"),
    "schedule": ("input", "output", "c0", "lambda", "batch_size", "steps", "seed"),
    "analyze": ("input", "output", "metric", "buckets"),
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="curribatch",
        description="Corpus difficulty scoring and competence-based batch scheduling.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p: argparse.ArgumentParser) -> None:
        p.add_argument("--config", help="JSON file supplying option defaults")
        p.add_argument("--input", help="input path")
        p.add_argument("--output", help="output path")

    p_ingest = sub.add_parser("ingest", help="normalize a raw corpus into canonical JSONL")
    add_common(p_ingest)
    p_ingest.add_argument("--format", choices=["e2e-csv", "jsonl"], help="input format")

    p_score = sub.add_parser("score", help="score every sample with one difficulty metric")
    add_common(p_score)
    p_score.add_argument("--metric", choices=[k.value for k in MetricKind], help="difficulty metric")
    p_score.add_argument("--side", choices=[s.value for s in Side], help="token side (default joint)")

    p_schedule = sub.add_parser("schedule", help="generate curriculum batches from a scores file")
    add_common(p_schedule)
    p_schedule.add_argument("--c0", type=float, help="initial competence (default 0.1)")
    p_schedule.add_argument(
        "--lambda", dest="curriculum_steps", type=float,
        help="steps until full competence (default 1000)",
    )
    p_schedule.add_argument("--batch-size", type=int, help="ids per step (default 28)")
    p_schedule.add_argument("--steps", type=int, help="number of schedule steps")
    p_schedule.add_argument("--seed", type=int, help="sampling seed (default 0)")

    p_analyze = sub.add_parser("analyze", help="bin statistics and CDF histograms per metric")
    add_common(p_analyze)
    p_analyze.add_argument(
        "--metric", action="append",
        help="metric:side pair, repeatable or comma-separated (default: all valid pairs)",
    )
    p_analyze.add_argument("--buckets", type=int, help="histogram buckets (default 20)")

    return parser


def _load_config_file(path: str) -> dict:
    with open(path, encoding="utf-8") as handle:
        data = json.load(handle)
    if not isinstance(data, dict):
        raise ValueError(f"{path}: config file must hold a JSON object")
    normalized = {}
    for key, value in data.items():
        canon = key.replace("-", "_")
        if canon not in _DEFAULTS:
            raise ValueError(f"{path}: unknown config key {key!r}")
        normalized[canon] = value
    return normalized


def effective_config(args: argparse.Namespace) -> dict:
    """Merge flags over config-file entries over defaults for one command."""
    from_file = _load_config_file(args.config) if getattr(args, "config", None) else {}
    cfg = {}
    for key in _COMMAND_KEYS[args.command]:
        flag = getattr(args, _DESTS.get(key, key), None)
        if flag is not None:
            cfg[key] = flag
        elif key in from_file:
            cfg[key] = from_file[key]
        else:
            cfg[key] = _DEFAULTS[key]
    return cfg


def _require(cfg: dict, key: str, command: str):
    if cfg.get(key) is None:
        flag = key.replace("_", "-")
        raise ValueError(f"{command}: --{flag} is required")
    return cfg[key]


def _check_input(path: str) -> str:
    if not os.path.isfile(path):
        raise ValueError(f"input file not found: {path}")
    return path


@contextlib.contextmanager
def _removed_on_error(paths: list):
    """Delete every claimed output if the block fails, then re-raise."""
    try:
        yield
    except BaseException:
        for path in paths:
            with contextlib.suppress(OSError):
                if os.path.isfile(path):
                    os.remove(path)
        raise


def _echo_config(outdir: str, command: str, cfg: dict, claimed: list) -> None:
    path = os.path.join(outdir or ".", f"config.{command}.json")
    claimed.append(path)
    payload = {"command": command, **cfg}
    with open(path, "w", encoding="utf-8", newline="\n") as handle:
        json.dump(payload, handle, ensure_ascii=False, indent=2, sort_keys=True)
        handle.write("\n")


def _prepare_file_output(path: str) -> str:
    """Create the parent directory; return it for the config echo."""
    outdir = os.path.dirname(os.path.abspath(path))
    os.makedirs(outdir, exist_ok=True)
    return outdir


def cmd_ingest(cfg: dict) -> None:
    src = _check_input(_require(cfg, "input", "ingest"))
    out = _require(cfg, "output", "ingest")
    fmt = _require(cfg, "format", "ingest")
    if fmt not in ("e2e-csv", "jsonl"):
        raise ValueError(f"ingest: unknown format {fmt!r} (expected e2e-csv or jsonl)")
    corpus = load_e2e(src) if fmt == "e2e-csv" else load_jsonl(src)
    outdir = _prepare_file_output(out)
    claimed: list = []
    with _removed_on_error(claimed):
        claimed.append(out)
        write_corpus(corpus, out)
        _echo_config(outdir, "ingest", cfg, claimed)
    print(len(corpus))


def cmd_score(cfg: dict) -> None:
    src = _check_input(_require(cfg, "input", "score"))
    out = _require(cfg, "output", "score")
    kind = MetricKind(_require(cfg, "metric", "score"))
    side = Side(cfg["side"])
    corpus = load_jsonl(src)
    model = fit(corpus, model_side_for(kind, side)) if kind in NEEDS_MODEL else None
    scores = score_corpus(corpus, kind, side, model=model)
    outdir = _prepare_file_output(out)
    claimed: list = []
    with _removed_on_error(claimed):
        claimed.append(out)
        write_scores(scores, kind, side, out)
        if model is not None:
            model_path = str(Path(out).with_suffix("")) + ".model.json"
            claimed.append(model_path)
            save_model(model, model_path)
        _echo_config(outdir, "score", cfg, claimed)


def cmd_schedule(cfg: dict) -> None:
    src = _check_input(_require(cfg, "input", "schedule"))
    out = _require(cfg, "output", "schedule")
    steps = _require(cfg, "steps", "schedule")
    num_steps = int(steps)
    if num_steps < 1:
        raise ValueError(f"schedule: --steps must be positive, got {num_steps}")
    params = CompetenceParams(curriculum_steps=float(cfg["lambda"]), initial=float(cfg["c0"]))
    scores, kind, side = read_scores(src)
    table = cdf_normalize(scores)
    schedule = generate_schedule(
        table,
        params,
        num_steps=num_steps,
        batch_size=int(cfg["batch_size"]),
        seed=int(cfg["seed"]),
        metric=kind,
        side=side,
    )
    outdir = _prepare_file_output(out)
    claimed: list = []
    with _removed_on_error(claimed):
        claimed.append(out)
        write_schedule(schedule, out)
        _echo_config(outdir, "schedule", cfg, claimed)


def _parse_pairs(specs) -> list:
    """Parse metric:side pair specs; a bare metric name means joint."""
    if not specs:
        return list(ALL_PAIRS)
    pairs = []
    for spec in specs:
        for item in str(spec).split(","):
            item = item.strip()
            if not item:
                continue
            name, _, side_name = item.partition(":")
            try:
                kind = MetricKind(name)
            except ValueError:
                raise ValueError(f"analyze: unknown metric {name!r}") from None
            try:
                side = Side(side_name) if side_name else Side.JOINT
            except ValueError:
                raise ValueError(f"analyze: unknown side {side_name!r}") from None
            pairs.append((kind, side))
    if not pairs:
        raise ValueError("analyze: no metric pairs requested")
    return pairs


def cmd_analyze(cfg: dict) -> None:
    src = _check_input(_require(cfg, "input", "analyze"))
    outdir = _require(cfg, "output", "analyze")
    buckets = int(cfg["buckets"])
    if buckets < 1:
        raise ValueError(f"analyze: --buckets must be positive, got {buckets}")
    pairs = _parse_pairs(cfg.get("metric"))
    corpus = load_jsonl(src)
    cache = ModelCache(corpus)
    analyses = [analyze_pair(corpus, kind, side, buckets, cache) for kind, side in pairs]
    os.makedirs(outdir, exist_ok=True)
    claimed: list = []
    with _removed_on_error(claimed):
        report_csv = os.path.join(outdir, "bin_report.csv")
        claimed.append(report_csv)
        write_bin_reports([a.report for a in analyses], report_csv)
        report_png = os.path.join(outdir, "bin_report.png")
        claimed.append(report_png)
        save_bin_report_figure([a.report for a in analyses], report_png)
        for analysis in analyses:
            stem = f"histogram.{analysis.kind.value}.{analysis.side.value}"
            hist_csv = os.path.join(outdir, stem + ".csv")
            claimed.append(hist_csv)
            write_histogram(analysis.histogram, hist_csv)
            hist_png = os.path.join(outdir, stem + ".png")
            claimed.append(hist_png)
            save_histogram_figure(
                analysis.histogram,
                f"{analysis.kind.value} ({analysis.side.value})",
                hist_png,
            )
        _echo_config(outdir, "analyze", cfg, claimed)


_HANDLERS = {
    "ingest": cmd_ingest,
    "score": cmd_score,
    "schedule": cmd_schedule,
    "analyze": cmd_analyze,
}


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = effective_config(args)
        _HANDLERS[args.command](cfg)
    except (OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
