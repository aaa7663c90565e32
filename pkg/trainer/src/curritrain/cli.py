"""Command line front end: generate a copy-task corpus or run one training arm.

``make-corpus`` writes raw JSONL for the preprocessing CLI to ingest.
``train`` runs a single arm and writes the loss curve and batch trace;
it prints the plateau step (first step within 2% of the run's minimum loss).
"""

from __future__ import annotations

import argparse
import sys

from .copytask import make_copy_task
from .harness import ToyTask, train, write_loss_csv, write_trace_csv


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="curritrain")
    sub = parser.add_subparsers(dest="command", required=True)

    make = sub.add_parser("make-corpus", help="write a synthetic copy-task corpus")
    make.add_argument("--samples", type=int, required=True)
    make.add_argument("--vocab", type=int, default=16, help="distinct value tokens")
    make.add_argument("--max-len", type=int, default=8)
    make.add_argument("--seed", type=int, default=0)
    make.add_argument("--output", required=True)

    tr = sub.add_parser("train", help="train one arm and write loss/trace CSVs")
    tr.add_argument("--corpus", required=True, help="tokenized corpus JSONL")
    arm = tr.add_mutually_exclusive_group(required=True)
    arm.add_argument("--schedule", help="schedule JSONL driving the batches")
    arm.add_argument("--baseline", action="store_true", help="uniform random batches")
    tr.add_argument("--probe", help="held-out corpus JSONL to measure loss on")
    tr.add_argument("--steps", type=int, required=True)
    tr.add_argument("--batch-size", type=int, default=28, help="baseline arm only")
    tr.add_argument("--seed", type=int, default=0)
    tr.add_argument("--embedding-dim", type=int, default=200)
    tr.add_argument("--hidden-dim", type=int, default=200)
    tr.add_argument("--lr", type=float, default=1e-4)
    tr.add_argument("--loss-out", required=True)
    tr.add_argument("--trace-out", required=True)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.command == "make-corpus":
            text = make_copy_task(args.samples, args.vocab, args.max_len, args.seed)
            with open(args.output, "w", encoding="utf-8", newline="\n") as handle:
                handle.write(text)
            print(text.count("\n"))
        else:
            task = ToyTask(
                corpus_path=args.corpus,
                schedule_path=args.schedule,
                probe_path=args.probe,
                batch_size=args.batch_size,
                embedding_dim=args.embedding_dim,
                hidden_dim=args.hidden_dim,
                learning_rate=args.lr,
                max_steps=args.steps,
                seed=args.seed,
            )
            result = train(task)
            write_loss_csv(result, args.loss_out)
            write_trace_csv(result, args.trace_out)
            print(result.plateau_step)
    except (OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
