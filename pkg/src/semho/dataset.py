"""JSON-lines dataset persistence, stratified splitting, logits interchange.

A dataset file is UTF-8 JSON-lines: line 1 is a header object carrying the
generation metadata (enough to regenerate the file bit-for-bit), every
following line is one record.  The logits file is plain JSON-lines of
``{"id": ..., "logits": [41 floats]}``, the only contract the external
classifier component has to honor besides canonical label order.
"""

from __future__ import annotations

import json
import random
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .errors import (
    ConfigError,
    DatasetFormatError,
    DuplicateIdError,
    IntegrityError,
    LogitCountError,
    LogitsFormatError,
    MissingIdError,
    StratificationError,
    UnknownIdError,
)
from .labels import LabelSchema, MAIN_DECISIONS, canonical_schema, validate
from .oracle import ORACLE_VERSION, BandThresholds, active_tag_names, label
from .scenario import BsMeasurement, GenConfig, Mission, ParamRanges, Scenario
from .textcodec import render

DATASET_FORMAT = "uav-handover-dataset-v1"


def scenario_to_json(s: Scenario) -> dict:
    def bs(m: BsMeasurement) -> dict:
        return {"bs_id": m.bs_id, "rsrp": m.rsrp, "rsrq": m.rsrq, "cqi": m.cqi}

    return {
        "speed": s.speed,
        "buffer": s.buffer,
        "mission": s.mission.value,
        "serving": bs(s.serving),
        "target": bs(s.target),
        "neighbor": bs(s.neighbor),
    }


def scenario_from_json(d: dict) -> Scenario:
    def bs(b: dict) -> BsMeasurement:
        return BsMeasurement(int(b["bs_id"]), float(b["rsrp"]), float(b["rsrq"]), int(b["cqi"]))

    return Scenario(
        speed=int(d["speed"]),
        buffer=int(d["buffer"]),
        mission=Mission(d["mission"]),
        serving=bs(d["serving"]),
        target=bs(d["target"]),
        neighbor=bs(d["neighbor"]),
    )


@dataclass(frozen=True)
class DatasetRecord:
    id: int
    scenario: Scenario
    text: str
    labels: tuple[int, ...]
    decision: str
    tags: tuple[str, ...]


@dataclass
class DatasetHeader:
    seed: int
    count: int
    class_mix: tuple[float, ...] = (0.25, 0.25, 0.25, 0.25)
    ranges: ParamRanges = field(default_factory=ParamRanges)
    thresholds: BandThresholds = field(default_factory=BandThresholds)
    oracle_version: str = ORACLE_VERSION
    distributions: str = "uniform"
    split: Optional[dict] = None

    def to_json(self) -> dict:
        d = {
            "format": DATASET_FORMAT,
            "seed": self.seed,
            "count": self.count,
            "class_mix": list(self.class_mix),
            "ranges": self.ranges.to_json(),
            "thresholds": self.thresholds.to_json(),
            "oracle_version": self.oracle_version,
            "distributions": self.distributions,
        }
        if self.split is not None:
            d["split"] = self.split
        return d

    @classmethod
    def from_json(cls, d: dict) -> "DatasetHeader":
        return cls(
            seed=d["seed"],
            count=d["count"],
            class_mix=tuple(d["class_mix"]),
            ranges=ParamRanges.from_json(d["ranges"]),
            thresholds=BandThresholds.from_json(d["thresholds"]),
            oracle_version=d["oracle_version"],
            distributions=d["distributions"],
            split=d.get("split"),
        )

    @classmethod
    def for_config(cls, config: GenConfig) -> "DatasetHeader":
        return cls(
            seed=config.seed,
            count=config.count,
            class_mix=config.class_mix,
            ranges=config.ranges,
        )


def make_records(pairs, schema: Optional[LabelSchema] = None) -> list[DatasetRecord]:
    """Turn (scenario, label-vector) pairs into full records with ids 0..n-1."""
    schema = schema or canonical_schema()
    records = []
    for i, (scenario, vec) in enumerate(pairs):
        records.append(
            DatasetRecord(
                id=i,
                scenario=scenario,
                text=render(scenario),
                labels=tuple(int(b) for b in vec),
                decision=MAIN_DECISIONS[int(np.argmax(vec[: schema.main_count]))],
                tags=active_tag_names(vec, schema),
            )
        )
    return records


def _record_to_json(r: DatasetRecord) -> dict:
    return {
        "id": r.id,
        "scenario": scenario_to_json(r.scenario),
        "text": r.text,
        "labels": list(r.labels),
        "decision": r.decision,
        "tags": list(r.tags),
    }


def write_dataset(path, header: DatasetHeader, records) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(json.dumps(header.to_json()) + "\n")
        for r in records:
            fh.write(json.dumps(_record_to_json(r)) + "\n")


def _check_record(r: DatasetRecord, header: DatasetHeader, schema: LabelSchema) -> None:
    problem = validate(r.labels, schema)
    if problem is not None:
        raise IntegrityError(f"record {r.id}: {problem}")
    if r.text != render(r.scenario):
        raise IntegrityError(f"record {r.id}: text disagrees with scenario rendering")
    expected = label(r.scenario, header.thresholds, schema)
    if tuple(int(b) for b in expected) != r.labels:
        raise IntegrityError(f"record {r.id}: labels disagree with rule labeling")
    if r.decision != MAIN_DECISIONS[int(np.argmax(expected[: schema.main_count]))]:
        raise IntegrityError(f"record {r.id}: decision name disagrees with labels")
    if r.tags != active_tag_names(expected, schema):
        raise IntegrityError(f"record {r.id}: tag names disagree with labels")


def read_dataset(
    path, validate_records: bool = True, schema: Optional[LabelSchema] = None
) -> tuple[DatasetHeader, list[DatasetRecord]]:
    """Read a dataset file, checking every record invariant by default."""
    schema = schema or canonical_schema()
    records = []
    with open(path, "r", encoding="utf-8") as fh:
        first = fh.readline()
        try:
            head = json.loads(first)
        except json.JSONDecodeError as exc:
            raise DatasetFormatError(1, f"bad header: {exc}") from exc
        if not isinstance(head, dict) or head.get("format") != DATASET_FORMAT:
            raise DatasetFormatError(1, "missing or unknown format marker")
        header = DatasetHeader.from_json(head)
        for line_no, line in enumerate(fh, start=2):
            if not line.strip():
                continue
            try:
                d = json.loads(line)
            except json.JSONDecodeError as exc:
                raise DatasetFormatError(line_no, str(exc)) from exc
            try:
                record = DatasetRecord(
                    id=int(d["id"]),
                    scenario=scenario_from_json(d["scenario"]),
                    text=d["text"],
                    labels=tuple(int(b) for b in d["labels"]),
                    decision=d["decision"],
                    tags=tuple(d["tags"]),
                )
            except (KeyError, TypeError, ValueError) as exc:
                raise DatasetFormatError(line_no, f"bad record: {exc}") from exc
            records.append(record)
    if validate_records:
        for r in records:
            _check_record(r, header, schema)
    return header, records


def split_stratified(records, ratio: float, seed: int):
    """Partition records per decision class at ``ratio``; disjoint, exhaustive.

    Every class lands within ±1 sample of the exact ratio (and keeps at
    least one sample on each side).  Output order is shuffled by ``seed``.
    """
    if not 0.0 < ratio < 1.0:
        raise ConfigError(f"split ratio must lie in (0, 1), got {ratio}")
    by_class: dict[str, list] = {name: [] for name in MAIN_DECISIONS}
    for r in records:
        by_class.setdefault(r.decision, []).append(r)
    rnd = random.Random(seed)
    train: list = []
    test: list = []
    for name in sorted(by_class):
        members = by_class[name]
        if not members:
            continue
        if len(members) < 2:
            raise StratificationError(
                f"class {name!r} has {len(members)} sample(s); need at least 2"
            )
        rnd.shuffle(members)
        n_train = min(max(round(ratio * len(members)), 1), len(members) - 1)
        train.extend(members[:n_train])
        test.extend(members[n_train:])
    rnd.shuffle(train)
    rnd.shuffle(test)
    return train, test


@dataclass(frozen=True)
class LogitsRecord:
    id: int
    logits: tuple[float, ...]


def write_logits(path, ids, logit_matrix) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        for record_id, row in zip(ids, logit_matrix):
            fh.write(
                json.dumps({"id": int(record_id), "logits": [float(v) for v in row]})
                + "\n"
            )


def read_logits(path, records, schema: Optional[LabelSchema] = None) -> list[LogitsRecord]:
    """Read a logits file and align it to ``records`` order.

    Every record id must appear exactly once with one finite logit per
    label; violations raise the matching ``Logits*``/``*IdError``.
    """
    schema = schema or canonical_schema()
    wanted = {r.id for r in records}
    by_id: dict[int, LogitsRecord] = {}
    with open(path, "r", encoding="utf-8") as fh:
        for line_no, line in enumerate(fh, start=1):
            if not line.strip():
                continue
            try:
                d = json.loads(line)
            except json.JSONDecodeError as exc:
                raise LogitsFormatError(line_no, str(exc)) from exc
            if not isinstance(d, dict) or "id" not in d or "logits" not in d:
                raise LogitsFormatError(line_no, "record needs 'id' and 'logits'")
            record_id = int(d["id"])
            logits = d["logits"]
            if len(logits) != len(schema.labels):
                raise LogitCountError(
                    f"id {record_id}: expected {len(schema.labels)} logits,"
                    f" got {len(logits)}"
                )
            values = tuple(float(v) for v in logits)
            if not all(np.isfinite(values)):
                raise LogitsFormatError(line_no, f"id {record_id}: non-finite logit")
            if record_id in by_id:
                raise DuplicateIdError(f"id {record_id} appears more than once")
            if record_id not in wanted:
                raise UnknownIdError(f"id {record_id} is not in the dataset")
            by_id[record_id] = LogitsRecord(record_id, values)
    missing = wanted - set(by_id)
    if missing:
        raise MissingIdError(f"no logits for {len(missing)} dataset id(s), e.g. {min(missing)}")
    return [by_id[r.id] for r in records]


def truth_matrix(records) -> np.ndarray:
    return np.array([r.labels for r in records], dtype=np.int8)


def logits_matrix(aligned: list[LogitsRecord]) -> np.ndarray:
    return np.array([rec.logits for rec in aligned], dtype=np.float64)
