"""Post-processing of raw 41-label scores into structurally valid assessments.

The decision and the nine group tags come from argmax over their index
ranges (ties break toward the lowest index), so the output always
satisfies the one-hot constraints regardless of the scores.  Independent
tags activate when their sigmoid strictly exceeds the threshold.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

from .errors import ConfigError
from .labels import Decision, LabelSchema, canonical_schema, validate


def sigmoid(x):
    x = np.asarray(x, dtype=float)
    out = np.empty_like(x)
    pos = x >= 0
    out[pos] = 1.0 / (1.0 + np.exp(-x[pos]))
    ex = np.exp(x[~pos])
    out[~pos] = ex / (1.0 + ex)
    return out


@dataclass(frozen=True)
class Assessment:
    """Structurally valid post-processed output.

    ``group_tags`` holds one global label index per exclusive group, in
    schema group order; ``independent_tags`` holds global label indices.
    ``probabilities`` (per-label sigmoids) is informational only and is
    excluded from equality.
    """

    decision: Decision
    group_tags: tuple[int, ...]
    independent_tags: frozenset[int]
    probabilities: Optional[tuple[float, ...]] = field(default=None, compare=False)


def decide(
    logits: Sequence[float],
    schema: Optional[LabelSchema] = None,
    threshold: float = 0.5,
) -> Assessment:
    """Convert one 41-entry logit vector into an assessment."""
    schema = schema or canonical_schema()
    if not 0.0 < threshold < 1.0:
        raise ConfigError(f"threshold must lie in (0, 1), got {threshold}")
    x = np.asarray(logits, dtype=float).reshape(-1)
    if x.shape[0] != len(schema.labels):
        raise ValueError(f"expected {len(schema.labels)} logits, got {x.shape[0]}")
    if not np.all(np.isfinite(x)):
        bad = int(np.flatnonzero(~np.isfinite(x))[0])
        raise ValueError(f"non-finite logit at index {bad}")

    decision = Decision(int(np.argmax(x[: schema.main_count])))
    group_tags = tuple(
        g.start + int(np.argmax(x[g.start : g.stop])) for g in schema.groups
    )
    probs = sigmoid(x)
    independents = frozenset(
        i for i in schema.independents if probs[i] > threshold
    )
    return Assessment(decision, group_tags, independents, tuple(float(p) for p in probs))


def as_label_vector(a: Assessment, schema: Optional[LabelSchema] = None) -> np.ndarray:
    """Multi-hot 41-flag view of an assessment (always passes validate)."""
    schema = schema or canonical_schema()
    vec = np.zeros(len(schema.labels), dtype=np.int8)
    vec[int(a.decision)] = 1
    for i in a.group_tags:
        vec[i] = 1
    for i in a.independent_tags:
        vec[i] = 1
    return vec


def from_label_vector(bits, schema: Optional[LabelSchema] = None) -> Assessment:
    """Inverse of :func:`as_label_vector`; requires a valid vector."""
    schema = schema or canonical_schema()
    problem = validate(bits, schema)
    if problem is not None:
        raise ValueError(f"invalid label vector: {problem}")
    decision = Decision(next(i for i in range(schema.main_count) if bits[i]))
    group_tags = tuple(next(i for i in g if bits[i]) for g in schema.groups)
    independents = frozenset(i for i in schema.independents if bits[i])
    return Assessment(decision, group_tags, independents)


def decide_matrix(
    logit_matrix,
    schema: Optional[LabelSchema] = None,
    threshold: float = 0.5,
) -> np.ndarray:
    """Post-process a batch of logit rows into a multi-hot label matrix.

    Vectorized equivalent of mapping :func:`decide` + :func:`as_label_vector`
    over the rows (the tests assert the equivalence).
    """
    schema = schema or canonical_schema()
    if not 0.0 < threshold < 1.0:
        raise ConfigError(f"threshold must lie in (0, 1), got {threshold}")
    x = np.asarray(logit_matrix, dtype=float)
    if x.ndim != 2 or x.shape[1] != len(schema.labels):
        raise ValueError(f"expected (n, {len(schema.labels)}) logits, got {x.shape}")
    if not np.all(np.isfinite(x)):
        raise ValueError("non-finite logit in batch")
    n = x.shape[0]
    out = np.zeros_like(x, dtype=np.int8)
    rows = np.arange(n)
    out[rows, np.argmax(x[:, : schema.main_count], axis=1)] = 1
    for g in schema.groups:
        out[rows, g.start + np.argmax(x[:, g.start : g.stop], axis=1)] = 1
    ind = schema.independents
    probs = sigmoid(x[:, ind.start : ind.stop])
    out[:, ind.start : ind.stop] = (probs > threshold).astype(np.int8)
    return out
