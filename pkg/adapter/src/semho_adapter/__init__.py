"""Fine-tuning adapter: pretrained text backbone + low-rank adapters.

Consumes the assessment toolkit only through files (dataset JSON-lines,
exported label schema, logits JSON-lines).
"""

from .contract import ContractError, LabelContract, load_schema, read_dataset, write_logits
from .lora import LoraLinear, inject_lora, parameter_counts, unfreeze_head
from .tokenizers import DigitLevelTokenizer
from .training import PRETRAINED_NAME, FinetuneConfig, finetune

__version__ = "0.1.0"

__all__ = [
    "ContractError",
    "DigitLevelTokenizer",
    "FinetuneConfig",
    "LabelContract",
    "LoraLinear",
    "PRETRAINED_NAME",
    "finetune",
    "inject_lora",
    "load_schema",
    "parameter_counts",
    "read_dataset",
    "unfreeze_head",
    "write_logits",
]
