"""File contracts with the assessment toolkit.

This package talks to the toolkit only through files: the exported label
schema (JSON), dataset JSON-lines (header line plus records), and the
logits JSON-lines it writes back.  Nothing here imports the toolkit.
"""

from __future__ import annotations

import json
from dataclasses import dataclass


class ContractError(Exception):
    """The schema or dataset disagrees with the expected cross-file contract."""


@dataclass(frozen=True)
class LabelContract:
    labels: tuple[str, ...]
    main_count: int
    groups: tuple[tuple[int, int], ...]
    independents: tuple[int, int]

    @property
    def num_labels(self) -> int:
        return len(self.labels)


def load_schema(path) -> LabelContract:
    with open(path, "r", encoding="utf-8") as fh:
        doc = json.load(fh)
    try:
        contract = LabelContract(
            labels=tuple(doc["labels"]),
            main_count=int(doc["main_count"]),
            groups=tuple((int(a), int(b)) for a, b in doc["groups"]),
            independents=tuple(doc["independents"]),
        )
    except (KeyError, TypeError, ValueError) as exc:
        raise ContractError(f"malformed schema document: {exc}") from exc
    if len(contract.labels) != 41 or contract.main_count != 4:
        raise ContractError(
            f"unexpected label universe: {len(contract.labels)} labels,"
            f" {contract.main_count} main decisions"
        )
    return contract


@dataclass(frozen=True)
class Sample:
    id: int
    text: str
    labels: tuple[int, ...]


def read_dataset(path, contract: LabelContract) -> list[Sample]:
    """Read a dataset file and verify records against the label contract.

    Each record's ``decision`` and ``tags`` name the active labels; they
    must match the multi-hot ``labels`` under the schema's canonical
    ordering, otherwise the two sides disagree about label order.
    """
    samples = []
    with open(path, "r", encoding="utf-8") as fh:
        header = json.loads(fh.readline())
        if not isinstance(header, dict) or "format" not in header:
            raise ContractError("missing dataset header line")
        for line_no, line in enumerate(fh, start=2):
            if not line.strip():
                continue
            try:
                doc = json.loads(line)
                sample = Sample(
                    id=int(doc["id"]),
                    text=doc["text"],
                    labels=tuple(int(b) for b in doc["labels"]),
                )
                named = {doc["decision"], *doc["tags"]}
            except (KeyError, TypeError, ValueError) as exc:
                raise ContractError(f"line {line_no}: malformed record: {exc}") from exc
            if len(sample.labels) != contract.num_labels:
                raise ContractError(
                    f"line {line_no}: {len(sample.labels)} flags,"
                    f" schema has {contract.num_labels} labels"
                )
            active = {contract.labels[i] for i, bit in enumerate(sample.labels) if bit}
            if active != named:
                raise ContractError(
                    f"line {line_no}: record names {sorted(named)} but flags select"
                    f" {sorted(active)}; label order disagrees with the schema"
                )
            samples.append(sample)
    if not samples:
        raise ContractError("dataset contains no records")
    return samples


def write_logits(path, ids, logits) -> None:
    """One ``{"id", "logits"}`` object per line, canonical label order."""
    with open(path, "w", encoding="utf-8") as fh:
        for record_id, row in zip(ids, logits):
            fh.write(
                json.dumps({"id": int(record_id), "logits": [float(v) for v in row]})
                + "\n"
            )
