"""Fine-tuning loop: frozen backbone + low-rank adapters + multi-label head.

Trains with binary cross-entropy over the 41 logits (AdamW, linear
schedule with warmup), logs per-epoch metrics, and exports test-split
logits for the toolkit's ``import-logits`` evaluation path, which owns all
post-processing.  The per-epoch metrics here are training telemetry only:
argmax accuracy over the four decision logits and raw sigmoid-threshold
micro-F1s.
"""

from __future__ import annotations

import json
from dataclasses import asdict, dataclass
from pathlib import Path

import numpy as np
import torch
from torch import nn

from .contract import LabelContract, Sample, load_schema, read_dataset, write_logits
from .lora import inject_lora, parameter_counts, trainable_state_dict, unfreeze_head
from .tokenizers import DigitLevelTokenizer, HfTokenizerWrapper

PRETRAINED_NAME = "google/mobilebert-uncased"


@dataclass
class FinetuneConfig:
    lora_rank: int = 16
    lora_alpha: float = 32.0
    lora_dropout: float = 0.1
    learning_rate: float = 2e-5
    batch_size: int = 16
    epochs: int = 40
    weight_decay: float = 0.01
    warmup_ratio: float = 0.1
    seed: int = 0
    max_length: int = 192
    backbone: str = PRETRAINED_NAME  # or "offline-small" / "offline-full"
    num_hidden_layers: int = 0  # >0 overrides the config (offline backbones)

    def to_json(self) -> dict:
        return asdict(self)


def _build_model(config: FinetuneConfig, vocab_size: int, num_labels: int):
    from transformers import MobileBertConfig, MobileBertForSequenceClassification

    if config.backbone.startswith("offline"):
        model_config = MobileBertConfig(
            vocab_size=max(vocab_size, 64),
            num_labels=num_labels,
            problem_type="multi_label_classification",
        )
        if config.backbone == "offline-small":
            model_config.num_hidden_layers = config.num_hidden_layers or 2
        elif config.num_hidden_layers:
            model_config.num_hidden_layers = config.num_hidden_layers
        return MobileBertForSequenceClassification(model_config)
    from transformers import AutoModelForSequenceClassification

    return AutoModelForSequenceClassification.from_pretrained(
        config.backbone,
        num_labels=num_labels,
        problem_type="multi_label_classification",
    )


def _build_tokenizer(config: FinetuneConfig, train_samples: list[Sample]):
    if config.backbone.startswith("offline"):
        return DigitLevelTokenizer.build(
            [s.text for s in train_samples], max_length=config.max_length
        )
    return HfTokenizerWrapper(config.backbone, max_length=config.max_length)


def _encode(samples: list[Sample], tokenizer) -> tuple[torch.Tensor, torch.Tensor, torch.Tensor]:
    ids, masks = [], []
    for s in samples:
        i, m = tokenizer.encode(s.text)
        ids.append(i)
        masks.append(m)
    labels = torch.tensor([s.labels for s in samples], dtype=torch.float32)
    return torch.tensor(ids), torch.tensor(masks), labels


def _epoch_metrics(logits: np.ndarray, labels: np.ndarray, main_count: int = 4) -> dict:
    main_acc = float(
        np.mean(np.argmax(logits[:, :main_count], 1) == np.argmax(labels[:, :main_count], 1))
    )

    def micro_f1(truth, pred):
        tp = int(np.sum((truth > 0) & (pred > 0)))
        fp = int(np.sum((truth == 0) & (pred > 0)))
        fn = int(np.sum((truth > 0) & (pred == 0)))
        p = tp / (tp + fp) if tp + fp else 0.0
        r = tp / (tp + fn) if tp + fn else 0.0
        return 2 * p * r / (p + r) if p + r else 0.0

    raw = (1.0 / (1.0 + np.exp(-logits)) > 0.5).astype(int)
    return {
        "main_accuracy_argmax": main_acc,
        "overall_f1_raw": micro_f1(labels, raw),
        "reason_f1_raw": micro_f1(labels[:, main_count:], raw[:, main_count:]),
    }


@torch.no_grad()
def _predict_logits(model, ids, masks, batch_size: int = 64) -> np.ndarray:
    model.eval()
    chunks = []
    for start in range(0, ids.shape[0], batch_size):
        out = model(
            input_ids=ids[start : start + batch_size],
            attention_mask=masks[start : start + batch_size],
        )
        chunks.append(out.logits.double().cpu().numpy())
    return np.concatenate(chunks, axis=0)


def finetune(
    train_path,
    test_path,
    schema_path,
    out_dir,
    config: FinetuneConfig = None,
) -> dict:
    """Run the fine-tune and write artifacts into ``out_dir``.

    Artifacts: ``logits.jsonl`` (test split, canonical label order),
    ``metrics.jsonl`` (one line per epoch), ``adapter_state.pt`` (adapters
    plus head), ``report.json`` (config echo, parameter counts, final
    telemetry), and ``vocab.json`` for the offline tokenizer.
    """
    config = config or FinetuneConfig()
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    torch.manual_seed(config.seed)
    np.random.seed(config.seed)

    contract: LabelContract = load_schema(schema_path)
    train_samples = read_dataset(train_path, contract)
    test_samples = read_dataset(test_path, contract)

    tokenizer = _build_tokenizer(config, train_samples)
    if isinstance(tokenizer, DigitLevelTokenizer):
        tokenizer.save(out_dir / "vocab.json")
    model = _build_model(config, tokenizer.vocab_size, contract.num_labels)
    wrapped = inject_lora(model, config.lora_rank, config.lora_alpha, config.lora_dropout)
    unfreeze_head(model)
    counts = parameter_counts(model)

    train_ids, train_masks, train_labels = _encode(train_samples, tokenizer)
    test_ids, test_masks, test_labels = _encode(test_samples, tokenizer)

    trainable = [p for p in model.parameters() if p.requires_grad]
    optimizer = torch.optim.AdamW(
        trainable, lr=config.learning_rate, weight_decay=config.weight_decay
    )
    steps_per_epoch = (len(train_samples) + config.batch_size - 1) // config.batch_size
    total_steps = steps_per_epoch * config.epochs
    from transformers import get_linear_schedule_with_warmup

    scheduler = get_linear_schedule_with_warmup(
        optimizer,
        num_warmup_steps=int(config.warmup_ratio * total_steps),
        num_training_steps=total_steps,
    )
    loss_fn = nn.BCEWithLogitsLoss()
    generator = torch.Generator().manual_seed(config.seed)

    history = []
    best = (-1.0, None, -1)
    with open(out_dir / "metrics.jsonl", "w", encoding="utf-8") as log:
        for epoch in range(config.epochs):
            model.train()
            order = torch.randperm(len(train_samples), generator=generator)
            epoch_losses = []
            for start in range(0, len(train_samples), config.batch_size):
                rows = order[start : start + config.batch_size]
                optimizer.zero_grad()
                out = model(input_ids=train_ids[rows], attention_mask=train_masks[rows])
                loss = loss_fn(out.logits, train_labels[rows])
                loss.backward()
                optimizer.step()
                scheduler.step()
                epoch_losses.append(float(loss.detach()))
            test_logits = _predict_logits(model, test_ids, test_masks)
            entry = {
                "epoch": epoch,
                "train_loss": float(np.mean(epoch_losses)),
                **_epoch_metrics(test_logits, test_labels.numpy(), contract.main_count),
            }
            history.append(entry)
            log.write(json.dumps(entry) + "\n")
            if entry["main_accuracy_argmax"] > best[0]:
                snapshot = {k: v.clone() for k, v in trainable_state_dict(model).items()}
                best = (entry["main_accuracy_argmax"], snapshot, epoch)

    # keep the checkpoint with the best validation accuracy
    if best[1] is not None:
        model.load_state_dict(best[1], strict=False)
    test_logits = _predict_logits(model, test_ids, test_masks)
    write_logits(out_dir / "logits.jsonl", [s.id for s in test_samples], test_logits)
    torch.save(trainable_state_dict(model), out_dir / "adapter_state.pt")

    report = {
        "config": config.to_json(),
        "adapted_modules": len(wrapped),
        "parameters": counts,
        "final": history[-1] if history else None,
        "best_epoch": best[2],
        "best_main_accuracy_argmax": best[0],
        "train_samples": len(train_samples),
        "test_samples": len(test_samples),
        "logits_file": "logits.jsonl",
    }
    with open(out_dir / "report.json", "w", encoding="utf-8") as fh:
        json.dump(report, fh, indent=2)
    return report
