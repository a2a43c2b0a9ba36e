"""Domain types and reward/scoring arithmetic shared by every decision-maker.

All value objects are immutable so they can be used as dict keys inside the
planner's search tree and memo caches.
"""
from __future__ import annotations

from dataclasses import dataclass, field, replace
from enum import Enum


class RoadType(Enum):
    MAIN_ROAD = "main_road"
    OVERPASS = "overpass"
    FREEWAY = "freeway"
    INTERSECTION = "intersection"
    LANE_CHANGE = "lane_change"
    ROUNDABOUT = "roundabout"
    TUNNEL = "tunnel"


class TrafficLevel(Enum):
    LOW = "low"
    MEDIUM = "medium"
    HIGH = "high"

    @property
    def index(self) -> int:
        return _TRAFFIC_ORDER[self]


_TRAFFIC_ORDER = {TrafficLevel.LOW: 0, TrafficLevel.MEDIUM: 1, TrafficLevel.HIGH: 2}


class ControllerId(Enum):
    PERFORMANT = "performant"
    SAFETY = "safety"

    def other(self) -> "ControllerId":
        return ControllerId.SAFETY if self is ControllerId.PERFORMANT else ControllerId.PERFORMANT


class Action(Enum):
    KEEP_CURRENT = 0
    SWITCH_CONTROLLER = 1


ACTIONS = (Action.KEEP_CURRENT, Action.SWITCH_CONTROLLER)

# Curvature buckets for the structural label: straight, gentle, tight.
CURVATURE_GENTLE_MAX = 0.1


def curvature_bucket(curvature: float) -> str:
    if curvature == 0.0:
        return "c0"
    if curvature <= CURVATURE_GENTLE_MAX:
        return "c1"
    return "c2"


@dataclass(frozen=True, slots=True)
class SceneFeatures:
    """Static description of one track segment."""

    road_type: RoadType
    curvature: float
    has_traffic_sign: bool
    segment_length: float

    def __post_init__(self) -> None:
        if self.curvature < 0.0:
            raise ValueError(f"curvature must be >= 0, got {self.curvature}")
        if self.segment_length <= 0.0:
            raise ValueError(f"segment_length must be > 0, got {self.segment_length}")

    @property
    def structural_label(self) -> str:
        sign = "s" if self.has_traffic_sign else "n"
        return f"{self.road_type.value}|{curvature_bucket(self.curvature)}|{sign}"


@dataclass(frozen=True, slots=True)
class Track:
    track_id: str
    segments: tuple[SceneFeatures, ...]

    def __post_init__(self) -> None:
        if not self.segments:
            raise ValueError("a track needs at least one segment")

    @property
    def total_length(self) -> float:
        return sum(s.segment_length for s in self.segments)


def _clamp(x: float, lo: float, hi: float) -> float:
    return lo if x < lo else hi if x > hi else x


@dataclass(frozen=True, slots=True)
class Weather:
    """Cloudiness / precipitation / deposit channels, each clamped to [0, 100]."""

    cloudiness: float
    precipitation: float
    deposit: float

    def __post_init__(self) -> None:
        object.__setattr__(self, "cloudiness", _clamp(self.cloudiness, 0.0, 100.0))
        object.__setattr__(self, "precipitation", _clamp(self.precipitation, 0.0, 100.0))
        object.__setattr__(self, "deposit", _clamp(self.deposit, 0.0, 100.0))

    def channels(self) -> tuple[float, float, float]:
        return (self.cloudiness, self.precipitation, self.deposit)


@dataclass(frozen=True, slots=True)
class MonitorState:
    ood_alarm: bool = False
    occlusion_flags: tuple[bool, ...] = (False, False, False)

    @property
    def any_occlusion(self) -> bool:
        return any(self.occlusion_flags)


@dataclass(frozen=True, slots=True)
class SystemState:
    """Snapshot of everything the switching logic conditions on."""

    v: float
    segment_index: int
    weather: Weather
    traffic_density: TrafficLevel
    controller: ControllerId
    failures: tuple[bool, ...] = (False, False, False)
    monitor: MonitorState = field(default_factory=MonitorState)
    switch_count: int = 0
    clock: float = 0.0

    def __post_init__(self) -> None:
        if self.v < 0.0:
            raise ValueError(f"speed must be >= 0, got {self.v}")
        if self.segment_index < 0:
            raise ValueError(f"segment_index must be >= 0, got {self.segment_index}")
        if self.switch_count < 0:
            raise ValueError(f"switch_count must be >= 0, got {self.switch_count}")

    @property
    def any_failure(self) -> bool:
        return any(self.failures)

    def evolve(self, **changes) -> "SystemState":
        return replace(self, **changes)


@dataclass(frozen=True, slots=True)
class RewardWeights:
    alpha1: float = 1.0
    alpha2: float = 1.0
    alpha3: float = 0.5
    m_s: int = 6

    def __post_init__(self) -> None:
        for name in ("alpha1", "alpha2", "alpha3"):
            if getattr(self, name) < 0.0:
                raise ValueError(f"{name} must be >= 0")
        if self.m_s < 1:
            raise ValueError(f"m_s must be >= 1, got {self.m_s}")


@dataclass(frozen=True, slots=True)
class Belief:
    """Surrogate estimate for one controller in one situation.

    perf_score is the speed estimate normalized to [0, 1]; safety_score the
    estimated per-segment collision probability; raw_speed the unnormalized
    mean neighbor speed in m/s.
    """

    perf_score: float
    safety_score: float
    raw_speed: float

    def __post_init__(self) -> None:
        if not 0.0 <= self.perf_score <= 1.0:
            raise ValueError(f"perf_score must be in [0, 1], got {self.perf_score}")
        if not 0.0 <= self.safety_score <= 1.0:
            raise ValueError(f"safety_score must be in [0, 1], got {self.safety_score}")
        if self.raw_speed < 0.0:
            raise ValueError(f"raw_speed must be >= 0, got {self.raw_speed}")


def normalize_speed(raw_speed: float, v_max: float) -> float:
    """Map a raw speed onto [0, 1] against the configured track speed limit."""
    if v_max <= 0.0:
        raise ValueError(f"v_max must be > 0, got {v_max}")
    return _clamp(raw_speed / v_max, 0.0, 1.0)


def switch_cost(omega: int, m_s: int) -> float:
    """Cost of oscillation: free for the first transition, then omega/m_s, saturating at 1."""
    if m_s == 0:
        raise ValueError("m_s must be nonzero")
    if m_s < 0:
        raise ValueError(f"m_s must be positive, got {m_s}")
    if omega < 0:
        raise ValueError(f"omega must be >= 0, got {omega}")
    if omega <= 1:
        return 0.0
    return min(omega / m_s, 1.0)


def forward_reward(belief: Belief, weights: RewardWeights) -> float:
    """One-step reward used by the myopic selector: performance minus failure risk."""
    return weights.alpha1 * belief.perf_score - weights.alpha2 * belief.safety_score


def reverse_reward(belief: Belief, omega: int, weights: RewardWeights) -> float:
    """Planner reward: forward reward minus the oscillation penalty."""
    return forward_reward(belief, weights) - weights.alpha3 * switch_cost(omega, weights.m_s)


def infraction_score(route_completion: float, vehicle_collision: bool, object_collision: bool) -> float:
    """Composite episode score in [0, 1]; higher is better."""
    if not 0.0 <= route_completion <= 1.0:
        raise ValueError(f"route_completion must be in [0, 1], got {route_completion}")
    return (
        0.5 * route_completion
        + 0.25 * (0.0 if vehicle_collision else 1.0)
        + 0.25 * (0.0 if object_collision else 1.0)
    )
