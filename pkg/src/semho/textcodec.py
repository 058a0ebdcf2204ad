"""Canonical six-line scenario text: exact renderer and strict parser.

The rendered block is the classifier input and the ``text`` field of
dataset records, so it is bit-exact: fixed phrases, two forced decimals
for rsrp/rsrq, "." as the decimal point, no locale interference.
"""

from __future__ import annotations

import re

from .errors import ConsistencyError, ParseError
from .scenario import BsMeasurement, Mission, Scenario, check_scenario

MISSION_WORDS = {
    Mission.LOW_LATENCY: "Low-Latency",
    Mission.STANDARD: "Standard",
    Mission.HIGH_THROUGHPUT: "High-Throughput",
}
_WORD_TO_MISSION = {w: m for m, w in MISSION_WORDS.items()}


def render(s: Scenario) -> str:
    """Render the canonical six-line assessment text (no trailing newline)."""
    return "\n".join(
        (
            "UAV Handover Assessment:",
            f"UAV State: Speed {s.speed} m/s, Buffer {s.buffer},"
            f" Mission {MISSION_WORDS[s.mission]}",
            f"Serving BS: ID BS{s.serving.bs_id}, RSRP {s.serving.rsrp:.2f} dBm,"
            f" RSRQ {s.serving.rsrq:.2f} dB, CQI {s.serving.cqi}.",
            f"Handover Command: Handover to BS{s.target.bs_id}.",
            f"Target BS (ID BS{s.target.bs_id}): Local RSRP {s.target.rsrp:.2f} dBm,"
            f" Local RSRQ {s.target.rsrq:.2f} dB, Local CQI {s.target.cqi}.",
            f"Strongest Neighbor BS (ID BS{s.neighbor.bs_id}): Local RSRP"
            f" {s.neighbor.rsrp:.2f} dBm, Local RSRQ {s.neighbor.rsrq:.2f} dB,"
            f" Local CQI {s.neighbor.cqi}.",
        )
    )


_NUM = r"(-?\d+\.\d{2})"
_LINE_RES = (
    re.compile(r"^UAV Handover Assessment:$"),
    re.compile(
        r"^UAV State: Speed (\d+) m/s, Buffer (\d+),"
        r" Mission (Low-Latency|Standard|High-Throughput)$"
    ),
    re.compile(
        rf"^Serving BS: ID BS(\d+), RSRP {_NUM} dBm, RSRQ {_NUM} dB, CQI (\d+)\.$"
    ),
    re.compile(r"^Handover Command: Handover to BS(\d+)\.$"),
    re.compile(
        rf"^Target BS \(ID BS(\d+)\): Local RSRP {_NUM} dBm,"
        rf" Local RSRQ {_NUM} dB, Local CQI (\d+)\.$"
    ),
    re.compile(
        rf"^Strongest Neighbor BS \(ID BS(\d+)\): Local RSRP {_NUM} dBm,"
        rf" Local RSRQ {_NUM} dB, Local CQI (\d+)\.$"
    ),
)


def _measurement(groups) -> BsMeasurement:
    bs_id, rsrp, rsrq, cqi = groups
    return BsMeasurement(int(bs_id), float(rsrp), float(rsrq), int(cqi))


def parse(text: str) -> Scenario:
    """Parse canonical assessment text back into a scenario.

    Tolerates trailing whitespace per line and trailing blank lines.
    Raises :class:`ParseError` (with the offending line number),
    :class:`ConsistencyError` when the command and target lines disagree
    on the target BS id, and :class:`~semho.errors.RangeError` when a
    parsed field is out of range.
    """
    lines = [ln.rstrip() for ln in text.split("\n")]
    while lines and lines[-1] == "":
        lines.pop()
    if len(lines) != len(_LINE_RES):
        raise ParseError(
            min(len(lines), len(_LINE_RES)) + 1,
            f"expected {len(_LINE_RES)} lines, got {len(lines)}",
        )
    matches = []
    for i, (pattern, line) in enumerate(zip(_LINE_RES, lines), start=1):
        m = pattern.match(line)
        if m is None:
            raise ParseError(i, f"malformed line: {line!r}")
        matches.append(m)

    speed, buffer, mission_word = matches[1].groups()
    command_target = int(matches[3].group(1))
    target = _measurement(matches[4].groups())
    if command_target != target.bs_id:
        raise ConsistencyError(
            f"handover command names BS{command_target}"
            f" but target line names BS{target.bs_id}"
        )
    scenario = Scenario(
        speed=int(speed),
        buffer=int(buffer),
        mission=_WORD_TO_MISSION[mission_word],
        serving=_measurement(matches[2].groups()),
        target=target,
        neighbor=_measurement(matches[5].groups()),
    )
    check_scenario(scenario)
    return scenario
