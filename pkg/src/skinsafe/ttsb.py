"""Time-to-skin-burn engine.

Estimates the minutes of sun exposure before burn onset from the UV index,
skin type, reflective/attenuating environment, altitude, and sunscreen SPF,
and schedules the corresponding alarm time.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, fields
from datetime import datetime, timedelta
from typing import Optional, Union

UV_INDEX_MAX = 14.0
ALTITUDE_MAX_FT = 30000.0

# Per-foot altitude multiplier on UV; validated by the 300 ft example
# (UV=10, skin 3, SPF 15 -> ~30 min).
ALTITUDE_COEFF_PER_FT = 0.00487804

# Fractional UV contribution of each environment flag.  Water adds exposure,
# shade and cloud attenuate it; the rest are reflective surfaces.
ENV_COEFFS = {
    "snow": 0.85,
    "sand": 0.2,
    "wet_sand": 0.4,
    "grass": 0.2,
    "wet_grass": 0.4,
    "building": 0.15,
    "water": 0.5,
    "shade": -0.5,
    "cloud": -0.2,
}


class UnknownSpfLevel(ValueError):
    """Raised for an SPF label outside the supported ladder."""


@dataclass(frozen=True)
class SkinType:
    rank: int
    name: str
    ts_minutes: float  # minutes to burn at UV index 1, unprotected
    description: str


SKIN_TYPES = (
    SkinType(1, "Fair Light Skin", 67,
             "Very fair; highly UV sensitive, always burns, never tans."),
    SkinType(2, "Light Skin", 100,
             "Fair; burns easily, tans minimally."),
    SkinType(3, "Medium Light Skin", 200,
             "Light olive; sometimes burns, tans gradually."),
    SkinType(4, "Medium Dark Skin", 300,
             "Olive to light brown; burns rarely, tans well."),
    SkinType(5, "Dark Skin", 400,
             "Brown; very rarely burns, tans deeply."),
    SkinType(6, "Deep Dark Skin", 500,
             "Deeply pigmented; lowest burn tendency."),
)

# SPF ladder and its burn-time weights, in increasing order.
SPF_WEIGHTS = (
    ("0", 1.0),
    ("5", 1.3),
    ("10", 2.4),
    ("15", 3.7),
    ("20", 4.5),
    ("25", 4.8),
    ("30", 7.5),
    ("35", 8.2),
    ("40", 9.5),
    ("45", 11.3),
    ("50", 12.4),
    ("50+", 13.7),
)
_SPF_BY_LABEL = dict(SPF_WEIGHTS)


def skin_type_catalog() -> list[SkinType]:
    """All six skin types, ordered by rank."""
    return list(SKIN_TYPES)


def skin_type_for_rank(rank: int) -> SkinType:
    if not 1 <= rank <= 6:
        raise ValueError(f"skin type rank must be 1..6, got {rank!r}")
    return SKIN_TYPES[rank - 1]


def spfw_for(level: Union[int, str]) -> float:
    """Burn-time weight for an SPF label; anything above 50 maps to the 50+ row."""
    label = str(level).strip()
    if label in _SPF_BY_LABEL:
        return _SPF_BY_LABEL[label]
    numeric = label[:-1] if label.endswith("+") else label
    try:
        value = int(numeric)
    except ValueError:
        raise UnknownSpfLevel(f"unknown SPF level {level!r}") from None
    if value > 50:
        return _SPF_BY_LABEL["50+"]
    raise UnknownSpfLevel(f"unknown SPF level {level!r}")


@dataclass(frozen=True)
class SpfLevel:
    label: str
    weight: float

    @classmethod
    def of(cls, level: Union[int, str]) -> "SpfLevel":
        weight = spfw_for(level)
        label = str(level).strip()
        if label not in _SPF_BY_LABEL:
            label = "50+"  # above-ladder values collapse onto the top row
        return cls(label=label, weight=weight)


@dataclass(frozen=True)
class EnvironmentFlags:
    snow: bool = False
    cloud: bool = False
    sand: bool = False
    wet_sand: bool = False
    grass: bool = False
    wet_grass: bool = False
    building: bool = False
    water: bool = False
    shade: bool = False

    @classmethod
    def none(cls) -> "EnvironmentFlags":
        return cls()

    @classmethod
    def one_of(cls, name: str) -> "EnvironmentFlags":
        """Single-selection constructor mirroring the environment gallery."""
        key = name.strip().lower().replace(" ", "_").replace("-", "_")
        if key not in ENV_COEFFS:
            raise ValueError(f"unknown environment {name!r}")
        return cls(**{key: True})

    def active(self) -> tuple[str, ...]:
        return tuple(f.name for f in fields(self) if getattr(self, f.name))


@dataclass(frozen=True)
class TtsbInput:
    uv_index: float
    skin: SkinType
    spf: SpfLevel
    env: EnvironmentFlags = EnvironmentFlags()
    altitude_ft: float = 0.0

    def __post_init__(self):
        for field_name in ("uv_index", "altitude_ft"):
            value = float(getattr(self, field_name))
            if not math.isfinite(value):
                raise ValueError(f"{field_name} must be finite, got {value!r}")
        object.__setattr__(self, "uv_index",
                           min(max(float(self.uv_index), 0.0), UV_INDEX_MAX))
        object.__setattr__(self, "altitude_ft",
                           min(max(float(self.altitude_ft), 0.0), ALTITUDE_MAX_FT))


class BurnRisk(enum.Enum):
    BURN_IN = "burn_in"
    NO_BURN_RISK = "no_burn_risk"


@dataclass(frozen=True)
class TtsbOutcome:
    kind: BurnRisk
    minutes: Optional[float]
    denominator: float


def effective_uv_denominator(inp: TtsbInput) -> float:
    """Bracketed effective-UV term: base UV scaled by environment and altitude."""
    env = inp.env
    factor = 1.0
    factor += ENV_COEFFS["snow"] * env.snow
    factor += ALTITUDE_COEFF_PER_FT * inp.altitude_ft
    factor += ENV_COEFFS["sand"] * env.sand
    factor += ENV_COEFFS["wet_sand"] * env.wet_sand
    factor += ENV_COEFFS["grass"] * env.grass
    factor += ENV_COEFFS["wet_grass"] * env.wet_grass
    factor += ENV_COEFFS["building"] * env.building
    factor += ENV_COEFFS["water"] * env.water
    factor += ENV_COEFFS["shade"] * env.shade
    factor += ENV_COEFFS["cloud"] * env.cloud
    return inp.uv_index * factor


def compute_ttsb(inp: TtsbInput) -> TtsbOutcome:
    """Minutes to burn onset; zero UV carries no burn risk at all."""
    if inp.uv_index == 0.0:
        return TtsbOutcome(BurnRisk.NO_BURN_RISK, None, 0.0)
    denominator = effective_uv_denominator(inp)
    minutes = inp.skin.ts_minutes / denominator * inp.spf.weight
    return TtsbOutcome(BurnRisk.BURN_IN, minutes, denominator)


def schedule_burn_alarm(now: datetime, outcome: TtsbOutcome) -> Optional[datetime]:
    """Alarm timestamp for a burn-in outcome, floored to whole seconds."""
    if outcome.kind is BurnRisk.NO_BURN_RISK:
        return None
    return now + timedelta(seconds=math.floor(outcome.minutes * 60.0))
