"""Command line: ``titlegen train`` and ``titlegen infer``."""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from .train import TrainConfig, train


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="titlegen",
        description="Pointer-generator title model (generator line protocol).",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("train", help="train on a pair file, checkpointing by interval")
    p.add_argument("--train-file", required=True)
    p.add_argument("--out-dir", required=True)
    p.add_argument("--layers", type=int, default=1, choices=(1, 2))
    p.add_argument("--emb-dim", type=int, default=64)
    p.add_argument("--hidden-size", type=int, default=128)
    p.add_argument("--epochs", type=int, default=10)
    p.add_argument("--batch-size", type=int, default=32)
    p.add_argument("--learning-rate", type=float, default=3e-3)
    p.add_argument("--checkpoint-interval", type=int, default=4)
    p.add_argument("--seed", type=int, default=0)

    p = sub.add_parser("infer", help="read source lines on stdin, write hypotheses")
    p.add_argument("--checkpoint", required=True)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    if args.command == "train":
        config = TrainConfig(
            train_file=args.train_file,
            out_dir=args.out_dir,
            num_layers=args.layers,
            emb_dim=args.emb_dim,
            hidden_size=args.hidden_size,
            epochs=args.epochs,
            batch_size=args.batch_size,
            learning_rate=args.learning_rate,
            checkpoint_interval=args.checkpoint_interval,
            seed=args.seed,
        )
        try:
            written = train(config)
        except ValueError as exc:
            print(f"error: {exc}", file=sys.stderr)
            return 2
        print("\n".join(str(p) for p in written))
        return 0

    if not Path(args.checkpoint).exists():
        print(f"error: checkpoint not found: {args.checkpoint}", file=sys.stderr)
        return 2
    from .infer import run

    return run(args.checkpoint, sys.stdin, sys.stdout)


if __name__ == "__main__":
    sys.exit(main())
