"""Low-rank adapters injected into a frozen backbone.

Wraps selected ``nn.Linear`` modules as ``base(x) + (alpha/r) * B(A(drop(x)))``
with the base weights frozen; only A/B (and whatever the caller leaves
unfrozen, normally the classification head) train.
"""

from __future__ import annotations

import math

import torch
from torch import nn

# module-name suffixes adapted in the backbone: attention query/key/value,
# attention output dense, and feedforward intermediate/output dense layers
TARGET_SUFFIXES = (
    ".attention.self.query",
    ".attention.self.key",
    ".attention.self.value",
    ".attention.output.dense",
    ".intermediate.dense",
    ".output.dense",
)


class LoraLinear(nn.Module):
    def __init__(self, base: nn.Linear, rank: int, alpha: float, dropout: float):
        super().__init__()
        self.base = base
        self.rank = rank
        self.scaling = alpha / rank
        self.dropout = nn.Dropout(dropout) if dropout > 0 else nn.Identity()
        self.lora_a = nn.Parameter(torch.empty(rank, base.in_features))
        self.lora_b = nn.Parameter(torch.zeros(base.out_features, rank))
        nn.init.kaiming_uniform_(self.lora_a, a=math.sqrt(5))
        for p in self.base.parameters():
            p.requires_grad_(False)

    def forward(self, x):
        delta = self.dropout(x) @ self.lora_a.T @ self.lora_b.T
        return self.base(x) + self.scaling * delta


def is_target(name: str) -> bool:
    return name.endswith(TARGET_SUFFIXES)


def inject_lora(model: nn.Module, rank: int, alpha: float, dropout: float) -> list[str]:
    """Freeze the model and wrap every target Linear; returns wrapped names."""
    for p in model.parameters():
        p.requires_grad_(False)
    wrapped = []
    targets = [
        name
        for name, module in model.named_modules()
        if isinstance(module, nn.Linear) and is_target(name)
    ]
    for name in targets:
        parent_name, _, leaf = name.rpartition(".")
        parent = model.get_submodule(parent_name) if parent_name else model
        base = getattr(parent, leaf)
        setattr(parent, leaf, LoraLinear(base, rank, alpha, dropout))
        wrapped.append(name)
    return wrapped


def unfreeze_head(model: nn.Module, head_name: str = "classifier") -> None:
    for p in model.get_submodule(head_name).parameters():
        p.requires_grad_(True)


def parameter_counts(model: nn.Module) -> dict:
    total = sum(p.numel() for p in model.parameters())
    trainable = sum(p.numel() for p in model.parameters() if p.requires_grad)
    adapters = sum(
        p.numel()
        for name, p in model.named_parameters()
        if "lora_a" in name or "lora_b" in name
    )
    head = sum(
        p.numel() for name, p in model.named_parameters() if name.startswith("classifier")
    )
    return {
        "total": total,
        "trainable": trainable,
        "adapter": adapters,
        "head": head,
        "trainable_fraction": trainable / total,
    }


def trainable_state_dict(model: nn.Module) -> dict:
    return {
        name: tensor
        for name, tensor in model.state_dict().items()
        if "lora_a" in name or "lora_b" in name or name.startswith("classifier")
    }
