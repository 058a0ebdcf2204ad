"""Tokenization for scenario text.

Preferred path: the pretrained uncased WordPiece tokenizer that matches
the published backbone (needs the downloaded vocabulary).  Offline
fallback: a deterministic word + single-digit tokenizer whose vocabulary
is built from the training texts; digits are split one per token so every
numeric threshold stays visible at full granularity.
"""

from __future__ import annotations

import json
import re

PAD, UNK, CLS, SEP = "[PAD]", "[UNK]", "[CLS]", "[SEP]"
_TOKEN_RE = re.compile(r"[a-z]+|\d|[^\sa-z\d]")


def basic_tokens(text: str) -> list[str]:
    return _TOKEN_RE.findall(text.lower())


class DigitLevelTokenizer:
    """Deterministic closed-vocabulary tokenizer for canonical scenario text."""

    def __init__(self, vocab: dict[str, int], max_length: int = 192):
        self.vocab = dict(vocab)
        self.max_length = max_length
        for special in (PAD, UNK, CLS, SEP):
            if special not in self.vocab:
                raise ValueError(f"vocabulary misses {special}")

    @classmethod
    def build(cls, texts, max_length: int = 192) -> "DigitLevelTokenizer":
        tokens = sorted({t for text in texts for t in basic_tokens(text)})
        vocab = {PAD: 0, UNK: 1, CLS: 2, SEP: 3}
        for token in tokens:
            vocab[token] = len(vocab)
        return cls(vocab, max_length)

    @property
    def vocab_size(self) -> int:
        return len(self.vocab)

    @property
    def pad_id(self) -> int:
        return self.vocab[PAD]

    def encode(self, text: str) -> tuple[list[int], list[int]]:
        unk = self.vocab[UNK]
        ids = [self.vocab[CLS]]
        ids.extend(self.vocab.get(t, unk) for t in basic_tokens(text))
        ids.append(self.vocab[SEP])
        ids = ids[: self.max_length]
        mask = [1] * len(ids)
        pad = self.max_length - len(ids)
        ids.extend([self.pad_id] * pad)
        mask.extend([0] * pad)
        return ids, mask

    def save(self, path) -> None:
        with open(path, "w", encoding="utf-8") as fh:
            json.dump({"max_length": self.max_length, "vocab": self.vocab}, fh)

    @classmethod
    def load(cls, path) -> "DigitLevelTokenizer":
        with open(path, "r", encoding="utf-8") as fh:
            doc = json.load(fh)
        return cls(doc["vocab"], doc["max_length"])


class HfTokenizerWrapper:
    """Pretrained tokenizer behind the same encode() surface."""

    def __init__(self, name: str, max_length: int = 192):
        from transformers import AutoTokenizer

        self.inner = AutoTokenizer.from_pretrained(name)
        self.max_length = max_length

    @property
    def vocab_size(self) -> int:
        return self.inner.vocab_size

    def encode(self, text: str) -> tuple[list[int], list[int]]:
        out = self.inner(
            text, truncation=True, max_length=self.max_length, padding="max_length"
        )
        return out["input_ids"], out["attention_mask"]
