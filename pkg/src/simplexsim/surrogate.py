"""Performance/safety lookup table: offline records, clustering, and kNN beliefs.

Records are clustered by structural label, split into failure / no-failure
partitions, and queried with a weather-space kNN (normalized Euclidean over the
three channels, plus a fixed additive penalty when the traffic-density level
differs). The same response surfaces that generate the records drive the
simulator's ground truth, so beliefs are consistent estimates of what the
simulator will actually do.
"""
from __future__ import annotations

import csv
import random
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from .core import (
    Belief,
    ControllerId,
    RoadType,
    SceneFeatures,
    SystemState,
    TrafficLevel,
    Weather,
    normalize_speed,
)
from .envmodels import TRAFFIC_LEVELS, weather_severity

DENSITY_PENALTY = 1.0  # additive distance for a traffic-density mismatch
DEFAULT_KNN_K = 5

LUT_CSV_HEADER = [
    "structural_label",
    "cloudiness",
    "precipitation",
    "deposit",
    "density",
    "failures",
    "controller",
    "speed",
    "collided",
]


class MissingCluster(KeyError):
    """No records exist for the queried structural label."""


class EmptyPartition(LookupError):
    """The required (cluster, failure-partition, controller) slice has no records."""


@dataclass(frozen=True, slots=True)
class LutRecord:
    structural_label: str
    weather: Weather
    traffic_density: TrafficLevel
    failure_signature: tuple[bool, ...]
    controller: ControllerId
    observed_speed: float
    collided: bool

    def __post_init__(self) -> None:
        if self.observed_speed < 0.0:
            raise ValueError(f"observed_speed must be >= 0, got {self.observed_speed}")

    @property
    def any_failure(self) -> bool:
        return any(self.failure_signature)


def _signature_code(signature: Sequence[bool]) -> int:
    code = 0
    for flag in signature:
        code = (code << 1) | int(flag)
    return code


class _Slice:
    """Column arrays for one (label, partition, controller) slice, in record order."""

    __slots__ = ("weather", "density", "sig_codes", "speeds", "collided", "indices")

    def __init__(self, records: list[tuple[int, LutRecord]]) -> None:
        self.weather = np.array(
            [[c / 100.0 for c in r.weather.channels()] for _, r in records], dtype=np.float64
        )
        self.density = np.array([r.traffic_density.index for _, r in records], dtype=np.int64)
        self.sig_codes = np.array([_signature_code(r.failure_signature) for _, r in records], dtype=np.int64)
        self.speeds = np.array([r.observed_speed for _, r in records], dtype=np.float64)
        self.collided = np.array([1.0 if r.collided else 0.0 for _, r in records], dtype=np.float64)
        self.indices = np.array([i for i, _ in records], dtype=np.int64)

    def __len__(self) -> int:
        return len(self.indices)


@dataclass
class LookupTable:
    records: tuple[LutRecord, ...]
    v_max: float
    clusters: dict[str, dict[bool, dict[ControllerId, _Slice]]] = field(repr=False, default_factory=dict)

    def labels(self) -> set[str]:
        return set(self.clusters)


def build_lut(records: Iterable[LutRecord], v_max: float = 20.0) -> LookupTable:
    records = tuple(records)
    if not records:
        raise ValueError("cannot build a lookup table from zero records")
    if v_max <= 0.0:
        raise ValueError(f"v_max must be > 0, got {v_max}")
    grouped: dict[str, dict[bool, dict[ControllerId, list[tuple[int, LutRecord]]]]] = {}
    for i, rec in enumerate(records):
        grouped.setdefault(rec.structural_label, {}).setdefault(rec.any_failure, {}).setdefault(
            rec.controller, []
        ).append((i, rec))
    clusters = {
        label: {
            part: {ctrl: _Slice(rows) for ctrl, rows in by_ctrl.items()}
            for part, by_ctrl in parts.items()
        }
        for label, parts in grouped.items()
    }
    return LookupTable(records=records, v_max=v_max, clusters=clusters)


def query_belief(
    table: LookupTable,
    state: SystemState,
    scene: SceneFeatures,
    controller: ControllerId,
    k: int = DEFAULT_KNN_K,
) -> Belief:
    """kNN belief for `controller` at the state's situation.

    Distance is Euclidean over weather channels normalized to [0, 1], plus
    DENSITY_PENALTY when the record's traffic level differs. Ties break toward
    an exact failure-signature match, then toward the lower record index. k is
    capped at the slice size.
    """
    if k < 1:
        raise ValueError(f"k must be >= 1, got {k}")
    label = scene.structural_label
    parts = table.clusters.get(label)
    if parts is None:
        raise MissingCluster(f"no records for structural label {label!r}")
    by_ctrl = parts.get(state.any_failure)
    sl = by_ctrl.get(controller) if by_ctrl is not None else None
    if sl is None or len(sl) == 0:
        part_name = "failure" if state.any_failure else "no-failure"
        raise EmptyPartition(
            f"{part_name} partition of cluster {label!r} has no {controller.value} records"
        )

    q = np.array([c / 100.0 for c in state.weather.channels()], dtype=np.float64)
    dist = np.sqrt(((sl.weather - q) ** 2).sum(axis=1))
    dist = dist + DENSITY_PENALTY * (sl.density != state.traffic_density.index)
    sig_mismatch = (sl.sig_codes != _signature_code(state.failures)).astype(np.int64)
    order = np.lexsort((sl.indices, sig_mismatch, dist))
    chosen = order[: min(k, len(sl))]

    raw_speed = float(sl.speeds[chosen].mean())
    collision = float(sl.collided[chosen].mean())
    return Belief(
        perf_score=normalize_speed(raw_speed, table.v_max),
        safety_score=collision,
        raw_speed=raw_speed,
    )


def save_lut(table: LookupTable, path: str) -> None:
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(LUT_CSV_HEADER)
        for r in table.records:
            w.writerow(
                [
                    r.structural_label,
                    f"{r.weather.cloudiness:.6f}",
                    f"{r.weather.precipitation:.6f}",
                    f"{r.weather.deposit:.6f}",
                    r.traffic_density.value,
                    "".join("1" if f else "0" for f in r.failure_signature),
                    r.controller.value,
                    f"{r.observed_speed:.6f}",
                    int(r.collided),
                ]
            )


def load_lut(path: str, v_max: float = 20.0) -> LookupTable:
    records = []
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header != LUT_CSV_HEADER:
            raise ValueError(f"unexpected LUT header: {header}")
        for row in reader:
            label, cl, pr, de, density, failures, controller, speed, collided = row
            records.append(
                LutRecord(
                    structural_label=label,
                    weather=Weather(float(cl), float(pr), float(de)),
                    traffic_density=TrafficLevel(density),
                    failure_signature=tuple(c == "1" for c in failures),
                    controller=ControllerId(controller),
                    observed_speed=float(speed),
                    collided=bool(int(collided)),
                )
            )
    return build_lut(records, v_max=v_max)


# ---------------------------------------------------------------------------
# Ground-truth response surfaces. The simulator drives collisions and speeds
# from these same models, which is what makes LUT beliefs meaningful.
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ControllerModel:
    """Parametric speed and per-segment collision-probability surfaces."""

    controller: ControllerId
    base_speed: dict[RoadType, float]
    density_speed: dict[TrafficLevel, float]
    weather_slowdown: float
    failure_speed_factor: float
    base_collision: dict[RoadType, float]
    weather_collision_gain: float
    density_collision_gain: dict[TrafficLevel, float]
    failure_collision_gain: float
    speed_noise_sd: float = 0.5

    def __post_init__(self) -> None:
        for road, p in self.base_collision.items():
            if not 0.0 <= p <= 1.0:
                raise ValueError(f"base collision probability for {road} must be in [0, 1], got {p}")
        if self.weather_collision_gain < 0.0 or self.failure_collision_gain < 0.0:
            raise ValueError("collision gains must be >= 0")
        if any(g < 0.0 for g in self.density_collision_gain.values()):
            raise ValueError("density collision gains must be >= 0")
        if not 0.0 <= self.weather_slowdown <= 1.0:
            raise ValueError(f"weather_slowdown must be in [0, 1], got {self.weather_slowdown}")

    def speed(self, scene: SceneFeatures, w: Weather, density: TrafficLevel, any_failure: bool) -> float:
        try:
            v = self.base_speed[scene.road_type]
        except KeyError as exc:
            raise MissingSurfaceCell(f"no speed surface for {scene.road_type}") from exc
        v *= self.density_speed[density]
        v *= 1.0 - self.weather_slowdown * weather_severity(w)
        if any_failure:
            v *= self.failure_speed_factor
        return max(v, 0.0)

    def collision_prob(self, scene: SceneFeatures, w: Weather, density: TrafficLevel, any_failure: bool) -> float:
        try:
            p = self.base_collision[scene.road_type]
        except KeyError as exc:
            raise MissingSurfaceCell(f"no collision surface for {scene.road_type}") from exc
        p += self.weather_collision_gain * weather_severity(w)
        p += self.density_collision_gain[density]
        if any_failure:
            p += self.failure_collision_gain
        return min(max(p, 0.0), 1.0)


class MissingSurfaceCell(KeyError):
    """A controller model has no surface entry for the queried cell."""


@dataclass(frozen=True)
class GroundTruthConfig:
    performant: ControllerModel
    safety: ControllerModel
    scenes: tuple[SceneFeatures, ...]
    records_per_scene_controller: int
    failure_record_fraction: float = 0.35
    n_components: int = 3
    failed_component: int = 1  # center camera

    def __post_init__(self) -> None:
        if self.records_per_scene_controller < 1:
            raise ValueError("records_per_scene_controller must be >= 1")
        if not 0.0 <= self.failure_record_fraction <= 1.0:
            raise ValueError("failure_record_fraction must be in [0, 1]")
        if not self.scenes:
            raise ValueError("at least one scene is required")

    def model_for(self, controller: ControllerId) -> ControllerModel:
        return self.performant if controller is ControllerId.PERFORMANT else self.safety


def synth_ground_truth(config: GroundTruthConfig, seed: int) -> list[LutRecord]:
    """Sample the configured surfaces into a record list. Deterministic in seed.

    Weather is drawn uniformly over the cube, density uniformly over the three
    levels, and a configured fraction of records carries the failed-component
    signature so both partitions are populated.
    """
    rng = random.Random(seed)
    no_failure = (False,) * config.n_components
    with_failure = tuple(i == config.failed_component for i in range(config.n_components))
    records: list[LutRecord] = []
    # De-duplicate scenes that share a structural label; one batch per label.
    seen: dict[str, SceneFeatures] = {}
    for scene in config.scenes:
        seen.setdefault(scene.structural_label, scene)
    for label, scene in seen.items():
        for controller in (ControllerId.PERFORMANT, ControllerId.SAFETY):
            model = config.model_for(controller)
            for _ in range(config.records_per_scene_controller):
                w = Weather(rng.uniform(0, 100), rng.uniform(0, 100), rng.uniform(0, 100))
                density = TRAFFIC_LEVELS[rng.randrange(3)]
                failed = rng.random() < config.failure_record_fraction
                signature = with_failure if failed else no_failure
                speed = model.speed(scene, w, density, failed)
                speed = max(0.0, speed + rng.gauss(0.0, model.speed_noise_sd))
                collided = rng.random() < model.collision_prob(scene, w, density, failed)
                records.append(
                    LutRecord(
                        structural_label=label,
                        weather=w,
                        traffic_density=density,
                        failure_signature=signature,
                        controller=controller,
                        observed_speed=speed,
                        collided=collided,
                    )
                )
    return records
