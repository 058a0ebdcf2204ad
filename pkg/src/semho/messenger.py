"""Semantic message composition and the 16-byte wire codec.

The message is the interpretation-bearing report the UAV sends instead of
raw measurements.  The wire frame carries the same decision/tag content
plus a scenario digest in a fixed 16-byte layout:

    byte  0      version (0x01)
    byte  1      bits 0-1 decision, bits 2-7 reserved (zero)
    bytes 2-4    group tag indices, bit widths 3,3,2,2,2,2,2,2,3 in group
                 order, packed least-significant-bit first; top 3 bits zero
    byte  5      bits 0-3 independent-tag mask, bits 4-7 reserved (zero)
    byte  6      speed (m/s, unsigned)
    byte  7      buffer (percent, unsigned)
    bytes 8-10   serving / target / neighbor BS id
    bytes 11-12  serving rsrp, round((rsrp+130)/0.25), uint16 little-endian
    bytes 13-14  target rsrp, same quantization
    byte  15     checksum: xor of bytes 0-14
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import reduce
from operator import xor
from typing import Optional

from .errors import (
    ChecksumError,
    EncodingError,
    ReservedBitError,
    WireLengthError,
    WireVersionError,
)
from .labels import Decision, LabelSchema, canonical_schema
from .postprocess import Assessment
from .scenario import Scenario
from .textcodec import render

WIRE_VERSION = 0x01
WIRE_SIZE = 16
GROUP_BIT_WIDTHS = (3, 3, 2, 2, 2, 2, 2, 2, 3)
RSRP_FLOOR = -130.0
RSRP_CEIL = -50.0
RSRP_STEP = 0.25

_DECISION_SENTENCES = {
    Decision.EXECUTE: "Proposing handover to Target BS BS{target}.",
    Decision.REJECT_CURRENT_BETTER: "Maintaining current connection with BS BS{serving}.",
    Decision.REJECT_TARGET_WEAK: "Rejecting handover to Target BS BS{target} due to weak signal.",
    Decision.QUESTION_CONFLICT: (
        "Handover to Target BS BS{target} requires review due to conflicting/unclear data."
    ),
}


def _split_camel(word: str) -> str:
    # "VeryPoor" -> "very poor", but acronyms stay whole ("UAV" -> "uav")
    out = []
    for i, ch in enumerate(word):
        if ch.isupper() and i > 0 and word[i - 1].islower():
            out.append(" ")
        out.append(ch.lower())
    return "".join(out)


def tag_phrase(name: str) -> str:
    """Human phrase for a tag name: scaffolding stripped, lowercased.

    "RT_Target_VeryPoor_Signal_RSRP" -> "very poor",
    "RT_Similar_RSRP" -> "similar",
    "RT_Medium_Speed_UAV" -> "medium speed uav".
    """
    body = name.removeprefix("RT_")
    for prefix in ("Target_", "Current_", "Neighbor_Signal_", "Neighbor_"):
        body = body.removeprefix(prefix)
    for suffix in ("_Signal_RSRP", "_RSRP"):
        body = body.removesuffix(suffix)
    body = body.removeprefix("CQI_")
    return " ".join(_split_camel(token) for token in body.split("_"))


def compose(a: Assessment, s: Scenario, schema: Optional[LabelSchema] = None) -> str:
    """Render the one-line semantic message for an assessment."""
    schema = schema or canonical_schema()
    names = [schema.labels[i] for i in a.group_tags]
    advantage, target_rsrp, target_cqi, speed = names[4], names[0], names[2], names[5]

    text = "UAV Assessment: " + _DECISION_SENTENCES[a.decision].format(
        target=s.target.bs_id, serving=s.serving.bs_id
    )
    text += (
        f" Key Factors: RSRP Relation: {tag_phrase(advantage)};"
        f" Target Signal (RSRP {tag_phrase(target_rsrp)}, CQI {tag_phrase(target_cqi)})"
    )
    if schema.index_of("RT_Conflicting_CQI_RSRP_Target") in a.independent_tags:
        text += "; target RSRP/CQI conflicting"
    if schema.index_of("RT_Unclear_Benefit_Due_To_Buffer_Mission") in a.independent_tags:
        text += "; unclear benefit (buffer/mission constraint)"
    text += (
        f". UAV Context: Speed {s.speed}m/s"
        f" (Interpreted as: {tag_phrase(speed)}), Buffer {s.buffer}"
    )
    return text


def _quantize_rsrp(rsrp: float) -> int:
    return int(round((rsrp - RSRP_FLOOR) / RSRP_STEP))


def encode(a: Assessment, s: Scenario, schema: Optional[LabelSchema] = None) -> bytes:
    """Pack an assessment plus scenario digest into the 16-byte frame."""
    schema = schema or canonical_schema()
    if not 0 <= s.speed <= 255:
        raise EncodingError(f"speed {s.speed} not encodable in one byte")
    if not 0 <= s.buffer <= 100:
        raise EncodingError(f"buffer {s.buffer} outside [0, 100]")
    for role, m in (("serving", s.serving), ("target", s.target), ("neighbor", s.neighbor)):
        if not 1 <= m.bs_id <= 255:
            raise EncodingError(f"{role} bs_id {m.bs_id} outside [1, 255]")
    for role, rsrp in (("serving", s.serving.rsrp), ("target", s.target.rsrp)):
        if not RSRP_FLOOR <= rsrp <= RSRP_CEIL:
            raise EncodingError(f"{role} rsrp {rsrp} outside [{RSRP_FLOOR}, {RSRP_CEIL}]")

    frame = bytearray(WIRE_SIZE)
    frame[0] = WIRE_VERSION
    frame[1] = int(a.decision)
    packed = 0
    offset = 0
    for index, group, width in zip(a.group_tags, schema.groups, GROUP_BIT_WIDTHS):
        packed |= (index - group.start) << offset
        offset += width
    frame[2:5] = packed.to_bytes(3, "little")
    mask = 0
    for bit, label_index in enumerate(schema.independents):
        if label_index in a.independent_tags:
            mask |= 1 << bit
    frame[5] = mask
    frame[6] = s.speed
    frame[7] = s.buffer
    frame[8] = s.serving.bs_id
    frame[9] = s.target.bs_id
    frame[10] = s.neighbor.bs_id
    frame[11:13] = _quantize_rsrp(s.serving.rsrp).to_bytes(2, "little")
    frame[13:15] = _quantize_rsrp(s.target.rsrp).to_bytes(2, "little")
    frame[15] = reduce(xor, frame[:15])
    return bytes(frame)


@dataclass(frozen=True)
class WireDigest:
    """Scenario fields recovered from a frame (rsrp is quantized)."""

    speed: int
    buffer: int
    serving_id: int
    target_id: int
    neighbor_id: int
    serving_rsrp: float
    target_rsrp: float


def decode(wire: bytes, schema: Optional[LabelSchema] = None) -> tuple[Assessment, WireDigest]:
    """Unpack a frame; rejects bad length/version/checksum/reserved bits."""
    schema = schema or canonical_schema()
    if len(wire) != WIRE_SIZE:
        raise WireLengthError(f"expected {WIRE_SIZE} bytes, got {len(wire)}")
    if wire[0] != WIRE_VERSION:
        raise WireVersionError(f"unsupported version 0x{wire[0]:02x}")
    if reduce(xor, wire[:15]) != wire[15]:
        raise ChecksumError("checksum mismatch")
    if wire[1] & 0xFC:
        raise ReservedBitError("reserved bits set in decision byte")
    if wire[5] & 0xF0:
        raise ReservedBitError("reserved bits set in independent-mask byte")
    packed = int.from_bytes(wire[2:5], "little")
    if packed >> sum(GROUP_BIT_WIDTHS):
        raise ReservedBitError("reserved bits set in group-index field")

    group_tags = []
    offset = 0
    for group, width in zip(schema.groups, GROUP_BIT_WIDTHS):
        index = (packed >> offset) & ((1 << width) - 1)
        if index >= len(group):
            raise ReservedBitError(
                f"group index {index} out of range for a {len(group)}-tag group"
            )
        group_tags.append(group.start + index)
        offset += width
    independents = frozenset(
        label_index
        for bit, label_index in enumerate(schema.independents)
        if wire[5] & (1 << bit)
    )
    assessment = Assessment(Decision(wire[1] & 0x03), tuple(group_tags), independents)
    digest = WireDigest(
        speed=wire[6],
        buffer=wire[7],
        serving_id=wire[8],
        target_id=wire[9],
        neighbor_id=wire[10],
        serving_rsrp=RSRP_FLOOR + RSRP_STEP * int.from_bytes(wire[11:13], "little"),
        target_rsrp=RSRP_FLOOR + RSRP_STEP * int.from_bytes(wire[13:15], "little"),
    )
    return assessment, digest


@dataclass(frozen=True)
class OverheadReport:
    """Byte sizes of the three representations of one assessment."""

    scenario_text_bytes: int
    message_text_bytes: int
    wire_bytes: int

    @property
    def text_to_wire(self) -> float:
        return self.scenario_text_bytes / self.wire_bytes

    @property
    def message_to_wire(self) -> float:
        return self.message_text_bytes / self.wire_bytes

    def to_json(self) -> dict:
        return {
            "scenario_text_bytes": self.scenario_text_bytes,
            "message_text_bytes": self.message_text_bytes,
            "wire_bytes": self.wire_bytes,
            "text_to_wire": self.text_to_wire,
            "message_to_wire": self.message_to_wire,
        }


def overhead_report(
    s: Scenario, a: Assessment, schema: Optional[LabelSchema] = None
) -> OverheadReport:
    """Compare raw-text, message-text and wire sizes for one scenario."""
    schema = schema or canonical_schema()
    return OverheadReport(
        scenario_text_bytes=len(render(s).encode("utf-8")),
        message_text_bytes=len(compose(a, s, schema).encode("utf-8")),
        wire_bytes=len(encode(a, s, schema)),
    )
