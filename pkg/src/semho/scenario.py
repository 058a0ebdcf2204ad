"""Scenario domain model and seeded random generation.

Scenarios are drawn uniformly within configured parameter ranges and
labeled by the rule oracle.  Generation is deterministic for a given
config: candidates come from numbered rng substreams derived from the
seed and are reduced in substream order, so serial and threaded runs
produce identical datasets.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from enum import Enum
from typing import Iterable

import numpy as np

from .errors import ConfigError, GenerationExhaustedError, RangeError
from .labels import MAIN_DECISIONS

RSRP_LEGAL = (-130.0, -50.0)
RSRQ_LEGAL = (-25.0, -3.0)
CQI_LEGAL = (1, 15)
SPEED_LEGAL = (0, 40)
BUFFER_LEGAL = (0, 100)
BS_ID_LEGAL = (1, 10)


class Mission(Enum):
    LOW_LATENCY = "LowLatency"
    STANDARD = "Standard"
    HIGH_THROUGHPUT = "HighThroughput"


MISSIONS = tuple(Mission)


@dataclass(frozen=True)
class BsMeasurement:
    """One base station's radio measurements."""

    bs_id: int
    rsrp: float  # dBm
    rsrq: float  # dB
    cqi: int


@dataclass(frozen=True)
class Scenario:
    """One handover assessment instance: UAV state plus three BS reports."""

    speed: int  # m/s
    buffer: int  # percent
    mission: Mission
    serving: BsMeasurement
    target: BsMeasurement
    neighbor: BsMeasurement

    def field_tuple(self) -> tuple:
        """Hashable full-field view, used for uniqueness checks."""
        parts = [self.speed, self.buffer, self.mission.value]
        for m in (self.serving, self.target, self.neighbor):
            parts.extend((m.bs_id, m.rsrp, m.rsrq, m.cqi))
        return tuple(parts)


def check_measurement(m: BsMeasurement, role: str = "bs") -> None:
    if not RSRP_LEGAL[0] <= m.rsrp <= RSRP_LEGAL[1]:
        raise RangeError(f"{role} rsrp {m.rsrp} outside {RSRP_LEGAL}")
    if not RSRQ_LEGAL[0] <= m.rsrq <= RSRQ_LEGAL[1]:
        raise RangeError(f"{role} rsrq {m.rsrq} outside {RSRQ_LEGAL}")
    if not CQI_LEGAL[0] <= m.cqi <= CQI_LEGAL[1]:
        raise RangeError(f"{role} cqi {m.cqi} outside {CQI_LEGAL}")
    if not BS_ID_LEGAL[0] <= m.bs_id <= BS_ID_LEGAL[1]:
        raise RangeError(f"{role} bs_id {m.bs_id} outside {BS_ID_LEGAL}")


def check_scenario(s: Scenario) -> None:
    """Raise :class:`RangeError` if any field lies outside its legal range."""
    if not SPEED_LEGAL[0] <= s.speed <= SPEED_LEGAL[1]:
        raise RangeError(f"speed {s.speed} outside {SPEED_LEGAL}")
    if not BUFFER_LEGAL[0] <= s.buffer <= BUFFER_LEGAL[1]:
        raise RangeError(f"buffer {s.buffer} outside {BUFFER_LEGAL}")
    for role, m in (("serving", s.serving), ("target", s.target), ("neighbor", s.neighbor)):
        check_measurement(m, role)
    ids = (s.serving.bs_id, s.target.bs_id, s.neighbor.bs_id)
    if len(set(ids)) != 3:
        raise RangeError(f"bs ids not pairwise distinct: {ids}")


@dataclass(frozen=True)
class ParamRanges:
    """Sampling ranges; defaults bracket every value the golden cases use."""

    rsrp: tuple[float, float] = (-120.0, -60.0)
    rsrq: tuple[float, float] = (-20.0, -5.0)
    cqi: tuple[int, int] = (1, 15)
    speed: tuple[int, int] = (0, 40)
    buffer: tuple[int, int] = (0, 100)
    num_bs: int = 10

    def to_json(self) -> dict:
        return {
            "rsrp": list(self.rsrp),
            "rsrq": list(self.rsrq),
            "cqi": list(self.cqi),
            "speed": list(self.speed),
            "buffer": list(self.buffer),
            "num_bs": self.num_bs,
        }

    @classmethod
    def from_json(cls, d: dict) -> "ParamRanges":
        return cls(
            rsrp=tuple(d["rsrp"]),
            rsrq=tuple(d["rsrq"]),
            cqi=tuple(d["cqi"]),
            speed=tuple(d["speed"]),
            buffer=tuple(d["buffer"]),
            num_bs=d["num_bs"],
        )


@dataclass(frozen=True)
class GenConfig:
    seed: int
    count: int
    class_mix: tuple[float, float, float, float] = (0.25, 0.25, 0.25, 0.25)
    ranges: ParamRanges = field(default_factory=ParamRanges)


def check_config(config: GenConfig) -> None:
    if config.count <= 0:
        raise ConfigError(f"count must be positive, got {config.count}")
    if len(config.class_mix) != len(MAIN_DECISIONS):
        raise ConfigError("class_mix must have one weight per decision class")
    if any(w < 0 for w in config.class_mix):
        raise ConfigError("class_mix weights must be nonnegative")
    if abs(sum(config.class_mix) - 1.0) > 1e-9:
        raise ConfigError(f"class_mix must sum to 1, got {sum(config.class_mix)}")
    r = config.ranges
    for name in ("rsrp", "rsrq", "cqi", "speed", "buffer"):
        lo, hi = getattr(r, name)
        if lo > hi:
            raise ConfigError(f"degenerate {name} range ({lo}, {hi})")
    if r.num_bs < 3:
        raise ConfigError("need at least 3 distinct BS ids")
    if not (RSRP_LEGAL[0] <= r.rsrp[0] and r.rsrp[1] <= RSRP_LEGAL[1]):
        raise ConfigError(f"rsrp sampling range {r.rsrp} outside legal {RSRP_LEGAL}")
    if not (RSRQ_LEGAL[0] <= r.rsrq[0] and r.rsrq[1] <= RSRQ_LEGAL[1]):
        raise ConfigError(f"rsrq sampling range {r.rsrq} outside legal {RSRQ_LEGAL}")


def sample_scenario(rng: np.random.Generator, config: GenConfig) -> Scenario:
    """Draw one scenario uniformly within the configured ranges.

    The draw order is fixed (UAV state, BS ids, then serving/target/neighbor
    measurements) so a given rng state always yields the same scenario.
    rsrp/rsrq are rounded to two decimals, matching the text rendering.
    """
    r = config.ranges
    speed = int(rng.integers(r.speed[0], r.speed[1] + 1))
    buffer = int(rng.integers(r.buffer[0], r.buffer[1] + 1))
    mission = MISSIONS[int(rng.integers(0, len(MISSIONS)))]
    ids = rng.choice(np.arange(1, r.num_bs + 1), size=3, replace=False)

    def measurement(i: int) -> BsMeasurement:
        rsrp = round(float(rng.uniform(r.rsrp[0], r.rsrp[1])), 2)
        rsrq = round(float(rng.uniform(r.rsrq[0], r.rsrq[1])), 2)
        cqi = int(rng.integers(r.cqi[0], r.cqi[1] + 1))
        return BsMeasurement(int(ids[i]), rsrp, rsrq, cqi)

    return Scenario(speed, buffer, mission, measurement(0), measurement(1), measurement(2))


def class_quotas(count: int, class_mix: Iterable[float]) -> list[int]:
    """Integer per-class targets summing to count (largest-remainder rounding)."""
    mix = list(class_mix)
    base = [math.floor(count * w) for w in mix]
    remainder = count - sum(base)
    fractions = sorted(
        range(len(mix)), key=lambda i: (-(count * mix[i] - base[i]), i)
    )
    for i in fractions[:remainder]:
        base[i] += 1
    return base

_CHUNK = 2048
MAX_DRAWS = 10_000_000


def _candidate_chunk(seed: int, index: int, config: GenConfig, thresholds) -> list:
    from .oracle import label  # deferred: oracle depends on this module's types

    rng = np.random.default_rng([seed, index])
    out = []
    for _ in range(_CHUNK):
        s = sample_scenario(rng, config)
        out.append((s, label(s, thresholds)))
    return out


def generate_dataset(
    config: GenConfig,
    thresholds=None,
    threads: int = 1,
    max_draws: int = MAX_DRAWS,
) -> list:
    """Generate ``config.count`` unique labeled scenarios.

    Rejection sampling draws candidates until every decision class meets
    its quota (count * class_mix, largest-remainder rounded, which keeps
    the realized mix within the quota's resolution of the target).
    Duplicate scenarios (identical field tuples) are discarded.  Raises
    :class:`GenerationExhaustedError` when the draw budget runs out,
    naming the most starved class.
    """
    from .oracle import BandThresholds

    check_config(config)
    thresholds = thresholds or BandThresholds()
    quotas = class_quotas(config.count, config.class_mix)
    remaining = list(quotas)
    seen: set = set()
    accepted: list = []
    drawn = 0
    next_chunk = 0

    def consume(chunk) -> bool:
        nonlocal drawn
        for s, vec in chunk:
            drawn += 1
            if len(accepted) >= config.count or drawn > max_draws:
                return False
            key = s.field_tuple()
            if key in seen:
                continue
            cls = int(np.argmax(vec[: len(MAIN_DECISIONS)]))
            if remaining[cls] <= 0:
                continue
            seen.add(key)
            remaining[cls] -= 1
            accepted.append((s, vec))
        return len(accepted) < config.count and drawn < max_draws

    if threads <= 1:
        while consume(_candidate_chunk(config.seed, next_chunk, config, thresholds)):
            next_chunk += 1
    else:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            window: list = []
            keep_going = True
            while keep_going:
                while len(window) < threads:
                    window.append(
                        pool.submit(_candidate_chunk, config.seed, next_chunk, config, thresholds)
                    )
                    next_chunk += 1
                keep_going = consume(window.pop(0).result())
            for f in window:
                f.cancel()

    if len(accepted) < config.count:
        starved = MAIN_DECISIONS[max(range(len(remaining)), key=lambda i: remaining[i])]
        raise GenerationExhaustedError(starved, drawn)
    return accepted
