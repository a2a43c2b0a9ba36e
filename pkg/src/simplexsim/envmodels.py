"""Generative models for weather, traffic, sensor failures, and monitor alarms.

The simulator uses these as ground truth; the planner uses the same samplers
inside its search tree. Every sampler takes an explicit rng handle so callers
own determinism. Parameter structs are immutable; numeric defaults live in the
experiment config, not here.
"""
from __future__ import annotations

import math
import random
from dataclasses import dataclass
from typing import Callable, Mapping

from .core import RoadType, SceneFeatures, SystemState, TrafficLevel, Weather

TRAFFIC_LEVELS = (TrafficLevel.LOW, TrafficLevel.MEDIUM, TrafficLevel.HIGH)

_ROW_SUM_TOL = 1e-9


class MissingCell(KeyError):
    """No alarm parameters configured for the state's (weather, scene, density) cell."""


def weather_severity(w: Weather) -> float:
    """Proxy for how hostile the weather is to camera perception, in [0, 1].

    Heavy precipitation or a dark sky (low cloudiness channel here encodes low
    ambient light) both degrade the image. Replaceable via the severity_fn
    arguments below.
    """
    return max(w.precipitation, 100.0 - w.cloudiness) / 100.0


def weather_bucket(w: Weather) -> str:
    s = weather_severity(w)
    if s < 1.0 / 3.0:
        return "calm"
    if s < 2.0 / 3.0:
        return "moderate"
    return "severe"


def step_weather(w: Weather, delta_max: float, rng: random.Random) -> Weather:
    """One temporal-query step: each channel moves by an independent uniform
    perturbation in [-delta_max, +delta_max], clamped to [0, 100]."""
    if delta_max < 0.0:
        raise ValueError(f"delta_max must be >= 0, got {delta_max}")
    return Weather(
        w.cloudiness + rng.uniform(-delta_max, delta_max),
        w.precipitation + rng.uniform(-delta_max, delta_max),
        w.deposit + rng.uniform(-delta_max, delta_max),
    )


TrafficMatrix = tuple[tuple[float, float, float], ...]


def validate_traffic_matrix(matrix: TrafficMatrix) -> None:
    if len(matrix) != len(TRAFFIC_LEVELS):
        raise ValueError(f"traffic matrix must have {len(TRAFFIC_LEVELS)} rows")
    for row in matrix:
        if len(row) != len(TRAFFIC_LEVELS):
            raise ValueError("traffic matrix must be square")
        if any(p < 0.0 for p in row):
            raise ValueError(f"transition probabilities must be >= 0, got {row}")
        if abs(sum(row) - 1.0) > _ROW_SUM_TOL:
            raise ValueError(f"traffic matrix row must sum to 1, got {sum(row)!r}")


def step_traffic(level: TrafficLevel, matrix: TrafficMatrix, rng: random.Random) -> TrafficLevel:
    """Markov step over the three density levels."""
    validate_traffic_matrix(matrix)
    row = matrix[level.index]
    u = rng.random()
    acc = 0.0
    for nxt, p in zip(TRAFFIC_LEVELS, row):
        acc += p
        if u < acc:
            return nxt
    return TRAFFIC_LEVELS[-1]  # guard against float round-off at u ~ 1


@dataclass(frozen=True, slots=True)
class WeibullParams:
    shape: float
    scale: float

    def __post_init__(self) -> None:
        if self.shape <= 0.0 or self.scale <= 0.0:
            raise ValueError(f"Weibull shape and scale must be > 0, got {self.shape}, {self.scale}")

    @property
    def mean(self) -> float:
        return self.scale * math.gamma(1.0 + 1.0 / self.shape)


def sample_permanent_failure(params: WeibullParams, window: float, rng: random.Random) -> float | None:
    """Sample a permanent-failure onset time; None if it falls outside the window."""
    if window <= 0.0:
        return None
    t = rng.weibullvariate(params.scale, params.shape)
    return t if t <= window else None


@dataclass(frozen=True, slots=True)
class IntermittentParams:
    base_rate: float
    growth: float
    tunnel_suppression: float

    def __post_init__(self) -> None:
        if self.base_rate < 0.0:
            raise ValueError(f"base_rate must be >= 0, got {self.base_rate}")
        if self.growth < 0.0:
            raise ValueError(f"growth must be >= 0, got {self.growth}")
        if not 0.0 <= self.tunnel_suppression <= 1.0:
            raise ValueError(f"tunnel_suppression must be in [0, 1], got {self.tunnel_suppression}")


def intermittent_failure_rate(
    w: Weather,
    scene: SceneFeatures,
    params: IntermittentParams,
    severity_fn: Callable[[Weather], float] = weather_severity,
) -> float:
    """Occlusion onset rate (1/s): exponential in weather severity, suppressed in tunnels
    where the road shields the sensors from precipitation."""
    rate = params.base_rate * math.exp(params.growth * severity_fn(w))
    if scene.road_type is RoadType.TUNNEL:
        rate *= params.tunnel_suppression
    return rate


@dataclass(frozen=True, slots=True)
class AlarmCell:
    mean_interarrival: float
    mean_duration: float

    def __post_init__(self) -> None:
        if self.mean_interarrival <= 0.0 or self.mean_duration <= 0.0:
            raise ValueError("alarm means must be > 0")


AlarmCellKey = tuple[str, str, TrafficLevel]


@dataclass(frozen=True)
class AlarmParams:
    """Exponential arrival/duration moments per (weather bucket, structural label, density) cell."""

    cells: Mapping[AlarmCellKey, AlarmCell]
    default: AlarmCell | None = None

    def cell_for(self, w: Weather, scene: SceneFeatures, density: TrafficLevel) -> AlarmCell:
        key = (weather_bucket(w), scene.structural_label, density)
        cell = self.cells.get(key, self.default)
        if cell is None:
            raise MissingCell(f"no alarm parameters for cell {key}")
        return cell

    @staticmethod
    def uniform(mean_interarrival: float, mean_duration: float) -> "AlarmParams":
        return AlarmParams(cells={}, default=AlarmCell(mean_interarrival, mean_duration))


def sample_alarm(
    params: AlarmParams,
    state: SystemState,
    scene: SceneFeatures,
    rng: random.Random,
) -> tuple[float, float]:
    """Draw (next arrival, duration) for the monitor alarm at the state's cell.

    The scene is passed alongside the state because SystemState only stores a
    segment index, not the segment's features.
    """
    cell = params.cell_for(state.weather, scene, state.traffic_density)
    arrival = rng.expovariate(1.0 / cell.mean_interarrival)
    duration = rng.expovariate(1.0 / cell.mean_duration)
    return arrival, duration
