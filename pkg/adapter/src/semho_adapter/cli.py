"""Command line for the fine-tuning adapter."""

from __future__ import annotations

import argparse
import json
import sys

from .contract import ContractError
from .training import FinetuneConfig, finetune


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="semho-adapter",
        description="Fine-tune the text backbone on a generated handover dataset",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    p = sub.add_parser("finetune", help="train and export test-split logits")
    p.add_argument("--train", required=True)
    p.add_argument("--test", required=True)
    p.add_argument("--schema", required=True, help="label schema exported by the toolkit CLI")
    p.add_argument("--out-dir", required=True)
    p.add_argument("--backbone", default=FinetuneConfig.backbone)
    p.add_argument("--layers", type=int, default=0, help="override layer count (offline backbones)")
    p.add_argument("--epochs", type=int, default=FinetuneConfig.epochs)
    p.add_argument("--batch-size", type=int, default=FinetuneConfig.batch_size)
    p.add_argument("--lr", type=float, default=FinetuneConfig.learning_rate)
    p.add_argument("--lora-rank", type=int, default=FinetuneConfig.lora_rank)
    p.add_argument("--lora-alpha", type=float, default=FinetuneConfig.lora_alpha)
    p.add_argument("--lora-dropout", type=float, default=FinetuneConfig.lora_dropout)
    p.add_argument("--weight-decay", type=float, default=FinetuneConfig.weight_decay)
    p.add_argument("--warmup-ratio", type=float, default=FinetuneConfig.warmup_ratio)
    p.add_argument("--max-length", type=int, default=FinetuneConfig.max_length)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_finetune)
    return parser


def cmd_finetune(args) -> int:
    config = FinetuneConfig(
        lora_rank=args.lora_rank,
        lora_alpha=args.lora_alpha,
        lora_dropout=args.lora_dropout,
        learning_rate=args.lr,
        batch_size=args.batch_size,
        epochs=args.epochs,
        weight_decay=args.weight_decay,
        warmup_ratio=args.warmup_ratio,
        seed=args.seed,
        max_length=args.max_length,
        backbone=args.backbone,
        num_hidden_layers=args.layers,
    )
    report = finetune(args.train, args.test, args.schema, args.out_dir, config)
    print(json.dumps(report, indent=2))
    return 0


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except ContractError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 5
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


def entrypoint() -> None:
    sys.exit(main())


if __name__ == "__main__":
    entrypoint()
