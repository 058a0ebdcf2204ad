"""Canonical 41-label universe for handover assessments.

The label space is fixed: 4 mutually exclusive main decisions, nine
mutually exclusive reason-tag groups (one tag active per group), and four
independent tags that may be active in any combination.  The ordering below
is a wire/file contract shared with external consumers, so it never changes
at runtime.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import IntEnum
from functools import lru_cache
from typing import Optional, Sequence

from .errors import UnknownLabelError, VectorLengthError

MAIN_DECISIONS = (
    "Execute_Handover_Optimal",
    "Reject_Handover_Current_BS_Better",
    "Reject_Handover_Target_Signal_Too_Weak",
    "Question_Handover_Conflicting_Data",
)

RSRP_LEVELS = ("Excellent", "Good", "Mediocre", "Poor", "VeryPoor")
CQI_LEVELS = ("High", "Medium", "Low")

ADVANTAGE_TAGS = (
    "RT_Clear_Target_Advantage_RSRP",
    "RT_Similar_RSRP",
    "RT_Clear_Current_Advantage_RSRP",
)
SPEED_TAGS = ("RT_High_Speed_UAV", "RT_Medium_Speed_UAV", "RT_Low_Speed_UAV")
BUFFER_TAGS = ("RT_Buffer_Critical_Low", "RT_Buffer_Sufficient", "RT_Buffer_High")
MISSION_TAGS = (
    "RT_Mission_Low_Latency",
    "RT_Mission_Standard",
    "RT_Mission_High_Throughput",
)
INDEPENDENT_TAGS = (
    "RT_Neighbor_Is_Stronger_Alternative",
    "RT_Conflicting_CQI_RSRP_Target",
    "RT_Conflicting_CQI_RSRP_Current",
    "RT_Unclear_Benefit_Due_To_Buffer_Mission",
)

GROUP_NAMES = (
    "target_rsrp",
    "current_rsrp",
    "target_cqi",
    "current_cqi",
    "advantage",
    "speed",
    "buffer",
    "mission",
    "neighbor_rsrp",
)


class Decision(IntEnum):
    """Main decision classes, index-aligned with the first four labels."""

    EXECUTE = 0
    REJECT_CURRENT_BETTER = 1
    REJECT_TARGET_WEAK = 2
    QUESTION_CONFLICT = 3

    @property
    def label(self) -> str:
        return MAIN_DECISIONS[self]


@dataclass(frozen=True)
class LabelSchema:
    """Ordered label names plus the index ranges that partition them.

    Invariants (checked at construction): the main decisions occupy the
    leading indices, the groups tile the middle contiguously, and the
    independents close out the tail.
    """

    labels: tuple[str, ...]
    main_count: int
    groups: tuple[range, ...]
    group_names: tuple[str, ...]
    independents: range
    _index: dict = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        cursor = self.main_count
        for g in self.groups:
            if g.start != cursor:
                raise ValueError(f"group ranges not contiguous at index {cursor}")
            cursor = g.stop
        if self.independents.start != cursor or self.independents.stop != len(self.labels):
            raise ValueError("independent range does not close out the label list")
        if len(set(self.labels)) != len(self.labels):
            raise ValueError("duplicate label names")
        object.__setattr__(self, "_index", {name: i for i, name in enumerate(self.labels)})

    def __len__(self) -> int:
        return len(self.labels)

    def index_of(self, name: str) -> int:
        try:
            return self._index[name]
        except KeyError:
            raise UnknownLabelError(f"unknown label {name!r}") from None

    @property
    def reason_range(self) -> range:
        """All reason-tag indices (grouped plus independent)."""
        return range(self.main_count, len(self.labels))

    def group_range(self, name: str) -> range:
        return self.groups[self.group_names.index(name)]


@lru_cache(maxsize=1)
def canonical_schema() -> LabelSchema:
    """The fixed 41-label schema; deterministic across runs."""
    labels = list(MAIN_DECISIONS)
    for level in RSRP_LEVELS:
        labels.append(f"RT_Target_{level}_Signal_RSRP")
    for level in RSRP_LEVELS:
        labels.append(f"RT_Current_{level}_Signal_RSRP")
    for level in CQI_LEVELS:
        labels.append(f"RT_Target_CQI_{level}")
    for level in CQI_LEVELS:
        labels.append(f"RT_Current_CQI_{level}")
    labels.extend(ADVANTAGE_TAGS)
    labels.extend(SPEED_TAGS)
    labels.extend(BUFFER_TAGS)
    labels.extend(MISSION_TAGS)
    for level in RSRP_LEVELS:
        labels.append(f"RT_Neighbor_Signal_{level}")
    labels.extend(INDEPENDENT_TAGS)

    sizes = (5, 5, 3, 3, 3, 3, 3, 3, 5)
    groups = []
    start = len(MAIN_DECISIONS)
    for size in sizes:
        groups.append(range(start, start + size))
        start += size
    return LabelSchema(
        labels=tuple(labels),
        main_count=len(MAIN_DECISIONS),
        groups=tuple(groups),
        group_names=GROUP_NAMES,
        independents=range(start, len(labels)),
    )


def validate(bits: Sequence[int], schema: Optional[LabelSchema] = None) -> Optional[str]:
    """Check the one-hot constraints of a 41-flag vector.

    Returns ``None`` when the vector is valid, otherwise a description of
    the first violated constraint.  A vector of the wrong length raises
    :class:`VectorLengthError` instead, since no verdict applies.
    """
    schema = schema or canonical_schema()
    if len(bits) != len(schema.labels):
        raise VectorLengthError(
            f"expected {len(schema.labels)} flags, got {len(bits)}"
        )
    active_main = sum(1 for i in range(schema.main_count) if bits[i])
    if active_main != 1:
        return f"main decision: {active_main} flags active (expected exactly 1)"
    for name, group in zip(schema.group_names, schema.groups):
        active = sum(1 for i in group if bits[i])
        if active != 1:
            return f"group {name}: {active} flags active (expected exactly 1)"
    return None


def is_valid(bits: Sequence[int], schema: Optional[LabelSchema] = None) -> bool:
    return validate(bits, schema) is None


def schema_to_json(schema: Optional[LabelSchema] = None) -> dict:
    """JSON-serializable view of the schema (the cross-component contract)."""
    schema = schema or canonical_schema()
    return {
        "format": "uav-handover-labels-v1",
        "labels": list(schema.labels),
        "main_count": schema.main_count,
        "groups": [[g.start, g.stop] for g in schema.groups],
        "group_names": list(schema.group_names),
        "independents": [schema.independents.start, schema.independents.stop],
    }
