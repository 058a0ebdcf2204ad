"""Deterministic rule labeler: scenario -> band tags, independent tags, decision.

All functions here are pure; the thresholds object is the single knob.
The default thresholds are versioned ("oracle-v1") and embedded in dataset
headers so files stay self-describing.
"""

from __future__ import annotations

from dataclasses import asdict, dataclass
from typing import Optional

import numpy as np

from .errors import ConfigError
from .labels import (
    ADVANTAGE_TAGS,
    BUFFER_TAGS,
    Decision,
    LabelSchema,
    MISSION_TAGS,
    SPEED_TAGS,
    canonical_schema,
)
from .scenario import Mission, Scenario

ORACLE_VERSION = "oracle-v1"

# advantage band tokens, index-aligned with ADVANTAGE_TAGS
CLEAR_TARGET, SIMILAR, CLEAR_CURRENT = "Clear_Target", "Similar", "Clear_Current"


@dataclass(frozen=True)
class BandThresholds:
    """Band edges and rule margins; edges are inclusive lower bounds."""

    rsrp_excellent: float = -70.0
    rsrp_good: float = -85.0
    rsrp_mediocre: float = -95.0
    rsrp_poor: float = -110.0
    cqi_high: int = 12
    cqi_medium: int = 7
    advantage_margin: float = 10.0
    speed_high: int = 25
    speed_medium: int = 15
    buffer_high: int = 40
    buffer_sufficient: int = 20
    weak_target_rsrp: float = -100.0
    weak_target_cqi: int = 4
    neighbor_margin: float = 10.0

    def __post_init__(self):
        if not (self.rsrp_excellent > self.rsrp_good > self.rsrp_mediocre > self.rsrp_poor):
            raise ConfigError("rsrp band edges must be strictly decreasing")
        if not self.cqi_high > self.cqi_medium:
            raise ConfigError("cqi band edges must be strictly decreasing")
        if not self.speed_high > self.speed_medium:
            raise ConfigError("speed band edges must be strictly decreasing")
        if not self.buffer_high > self.buffer_sufficient:
            raise ConfigError("buffer band edges must be strictly decreasing")

    def to_json(self) -> dict:
        return asdict(self)

    @classmethod
    def from_json(cls, d: dict) -> "BandThresholds":
        return cls(**d)


def rsrp_level(rsrp: float, t: BandThresholds) -> str:
    if rsrp >= t.rsrp_excellent:
        return "Excellent"
    if rsrp >= t.rsrp_good:
        return "Good"
    if rsrp >= t.rsrp_mediocre:
        return "Mediocre"
    if rsrp >= t.rsrp_poor:
        return "Poor"
    return "VeryPoor"


def cqi_level(cqi: int, t: BandThresholds) -> str:
    if cqi >= t.cqi_high:
        return "High"
    if cqi >= t.cqi_medium:
        return "Medium"
    return "Low"


def speed_level(speed: int, t: BandThresholds) -> str:
    if speed >= t.speed_high:
        return "High"
    if speed >= t.speed_medium:
        return "Medium"
    return "Low"


def buffer_level(buffer: int, t: BandThresholds) -> str:
    if buffer >= t.buffer_high:
        return "High"
    if buffer >= t.buffer_sufficient:
        return "Sufficient"
    return "Critical_Low"


def advantage_band(delta: float, t: BandThresholds) -> str:
    if delta > t.advantage_margin:
        return CLEAR_TARGET
    if delta < -t.advantage_margin:
        return CLEAR_CURRENT
    return SIMILAR


@dataclass(frozen=True)
class GroupTags:
    """One band level per exclusive group, in schema group order."""

    target_rsrp: str
    current_rsrp: str
    target_cqi: str
    current_cqi: str
    advantage: str
    speed: str
    buffer: str
    mission: Mission
    neighbor_rsrp: str

    def names(self) -> tuple[str, ...]:
        """The nine active label names, in schema group order."""
        return (
            f"RT_Target_{self.target_rsrp}_Signal_RSRP",
            f"RT_Current_{self.current_rsrp}_Signal_RSRP",
            f"RT_Target_CQI_{self.target_cqi}",
            f"RT_Current_CQI_{self.current_cqi}",
            ADVANTAGE_TAGS[(CLEAR_TARGET, SIMILAR, CLEAR_CURRENT).index(self.advantage)],
            SPEED_TAGS[("High", "Medium", "Low").index(self.speed)],
            BUFFER_TAGS[("Critical_Low", "Sufficient", "High").index(self.buffer)],
            MISSION_TAGS[tuple(Mission).index(self.mission)],
            f"RT_Neighbor_Signal_{self.neighbor_rsrp}",
        )


def band_tags(s: Scenario, t: Optional[BandThresholds] = None) -> GroupTags:
    """Assign one tag per mutually exclusive group."""
    t = t or BandThresholds()
    return GroupTags(
        target_rsrp=rsrp_level(s.target.rsrp, t),
        current_rsrp=rsrp_level(s.serving.rsrp, t),
        target_cqi=cqi_level(s.target.cqi, t),
        current_cqi=cqi_level(s.serving.cqi, t),
        advantage=advantage_band(s.target.rsrp - s.serving.rsrp, t),
        speed=speed_level(s.speed, t),
        buffer=buffer_level(s.buffer, t),
        mission=s.mission,
        neighbor_rsrp=rsrp_level(s.neighbor.rsrp, t),
    )


def _rsrp_cqi_conflict(rsrp_band: str, cqi_band: str) -> bool:
    strong_weak = rsrp_band in ("Excellent", "Good") and cqi_band == "Low"
    weak_strong = rsrp_band in ("Poor", "VeryPoor") and cqi_band == "High"
    return strong_weak or weak_strong


def independent_tags(
    s: Scenario, bands: GroupTags, t: Optional[BandThresholds] = None
) -> frozenset[str]:
    """Independent tags active for this scenario."""
    t = t or BandThresholds()
    tags = set()
    if (
        s.neighbor.rsrp >= s.serving.rsrp + t.neighbor_margin
        and s.neighbor.rsrp >= s.target.rsrp + t.neighbor_margin
    ):
        tags.add("RT_Neighbor_Is_Stronger_Alternative")
    if _rsrp_cqi_conflict(bands.target_rsrp, bands.target_cqi):
        tags.add("RT_Conflicting_CQI_RSRP_Target")
    if _rsrp_cqi_conflict(bands.current_rsrp, bands.current_cqi):
        tags.add("RT_Conflicting_CQI_RSRP_Current")
    if (bands.buffer == "Critical_Low" and s.mission is Mission.HIGH_THROUGHPUT) or (
        s.mission is Mission.LOW_LATENCY
        and bands.speed == "High"
        and bands.advantage == SIMILAR
    ):
        tags.add("RT_Unclear_Benefit_Due_To_Buffer_Mission")
    return frozenset(tags)


def main_decision(
    s: Scenario,
    bands: GroupTags,
    independents: frozenset[str],
    t: Optional[BandThresholds] = None,
) -> Decision:
    """First matching rule wins; the final rule is the catch-all."""
    t = t or BandThresholds()
    if s.target.rsrp < t.weak_target_rsrp and s.target.cqi <= t.weak_target_cqi:
        return Decision.REJECT_TARGET_WEAK
    if (
        "RT_Conflicting_CQI_RSRP_Target" in independents
        or "RT_Unclear_Benefit_Due_To_Buffer_Mission" in independents
    ):
        return Decision.QUESTION_CONFLICT
    if bands.advantage == CLEAR_TARGET:
        return Decision.EXECUTE
    return Decision.REJECT_CURRENT_BETTER


def label(
    s: Scenario,
    t: Optional[BandThresholds] = None,
    schema: Optional[LabelSchema] = None,
) -> np.ndarray:
    """Full 41-flag multi-hot vector for a scenario."""
    t = t or BandThresholds()
    schema = schema or canonical_schema()
    bands = band_tags(s, t)
    independents = independent_tags(s, bands, t)
    decision = main_decision(s, bands, independents, t)
    vec = np.zeros(len(schema.labels), dtype=np.int8)
    vec[int(decision)] = 1
    for name in bands.names():
        vec[schema.index_of(name)] = 1
    for name in independents:
        vec[schema.index_of(name)] = 1
    return vec


def active_tag_names(vec, schema: Optional[LabelSchema] = None) -> tuple[str, ...]:
    """Names of active reason tags (grouped + independent), in index order."""
    schema = schema or canonical_schema()
    return tuple(
        schema.labels[i] for i in schema.reason_range if vec[i]
    )
