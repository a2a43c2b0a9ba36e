"""Closed-loop episode simulator and the default synthetic benchmark.

The vehicle follows a track segment by segment. Ground-truth speeds and
per-segment collision probabilities come from the same ControllerModel
surfaces that generated the surrogate records. Weather and traffic are
re-sampled on a fixed temporal-query cadence; failures and monitor alarms
arrive from the envmodels samplers. Every stochastic draw comes from one
per-episode rng, so a (config, seed) pair reproduces an episode exactly,
including the simulated decision latencies.

Event times are exact; the 0.1 s tick only integrates distance with a
piecewise-constant speed and applies the acceleration limit.
"""
from __future__ import annotations

import math
import random
from dataclasses import dataclass, field
from enum import Enum
from typing import Mapping

from .core import (
    Action,
    ControllerId,
    MonitorState,
    RewardWeights,
    SceneFeatures,
    SystemState,
    Track,
    TrafficLevel,
    RoadType,
    Weather,
    infraction_score,
)
from .envmodels import (
    AlarmParams,
    IntermittentParams,
    TrafficMatrix,
    WeibullParams,
    intermittent_failure_rate,
    sample_alarm,
    sample_permanent_failure,
    step_traffic,
    step_weather,
)
from .planner import MctsConfig, PlanningModels
from .surrogate import ControllerModel, GroundTruthConfig, LookupTable
from .switcher import (
    DecisionEvent,
    EventKind,
    LatencyModel,
    ReverseMode,
    SupersededTransition,
    SwitchConfig,
    Switcher,
)


class ConfigError(ValueError):
    """The episode configuration is incomplete or inconsistent."""


class Strategy(Enum):
    LBC = "LBC"  # performant controller only
    AP = "AP"  # safety controller only
    SA = "SA"  # forward-only simplex
    GS = "GS"  # myopic both ways, no domain rules
    DS = "DS"  # myopic forward, planned reverse, domain rules
    D_MYOPIC = "DMyopic"
    ND_MYOPIC = "NDMyopic"
    D_NONMYOPIC = "DNonmyopic"
    ND_NONMYOPIC = "NDNonmyopic"


class FailureSchedule(Enum):
    NONE = "none"
    PERMANENT_AT_RANDOM = "permanent_at_random"
    INTERMITTENT = "intermittent"


class CollisionOutcome(Enum):
    NONE = "none"
    VEHICLE = "vehicle"
    OBJECT = "object"


_STRATEGY_WIRING: dict[Strategy, tuple[ReverseMode, bool]] = {
    Strategy.SA: (ReverseMode.NONE, True),
    Strategy.GS: (ReverseMode.MYOPIC, False),
    Strategy.DS: (ReverseMode.MCTS, True),
    Strategy.D_MYOPIC: (ReverseMode.MYOPIC, True),
    Strategy.ND_MYOPIC: (ReverseMode.MYOPIC, False),
    Strategy.D_NONMYOPIC: (ReverseMode.MCTS, True),
    Strategy.ND_NONMYOPIC: (ReverseMode.MCTS, False),
}


def strategy_from_id(strategy_id: str) -> Strategy:
    try:
        return Strategy(strategy_id)
    except ValueError as exc:
        raise ConfigError(f"unknown strategy id {strategy_id!r}") from exc


@dataclass(frozen=True)
class SimConfig:
    gt: GroundTruthConfig
    lut: LookupTable
    weights: RewardWeights
    switch_cfg: SwitchConfig
    mcts_cfg: MctsConfig
    latency: LatencyModel
    alarms: AlarmParams
    weibull: WeibullParams
    intermittent: IntermittentParams
    intermittent_mean_duration: float
    schedule: FailureSchedule
    weather_delta: float
    traffic_matrix: TrafficMatrix
    knn_k: int = 5
    tick: float = 0.1
    a_max: float = 2.5
    vehicle_collision_ratio: float = 0.5
    max_episode_seconds: float = 1800.0
    initial_density: Mapping[str, TrafficLevel] = field(default_factory=dict)
    default_density: TrafficLevel = TrafficLevel.MEDIUM

    def __post_init__(self) -> None:
        if self.lut is None:
            raise ConfigError("a lookup table is required")
        if self.tick <= 0.0:
            raise ConfigError(f"tick must be > 0, got {self.tick}")
        if not 0.0 <= self.vehicle_collision_ratio <= 1.0:
            raise ConfigError("vehicle_collision_ratio must be in [0, 1]")
        if self.intermittent_mean_duration <= 0.0:
            raise ConfigError("intermittent_mean_duration must be > 0")


@dataclass
class EpisodeMetrics:
    strategy: Strategy
    track_id: str
    seed: int
    travel_time: float
    route_completion: float
    vehicle_collision: bool
    object_collision: bool
    switch_count: int
    forward_switches: int
    reverse_switches: int
    aborted_plans: int
    no_decisions: int
    decision_latencies: tuple[float, ...]
    segments: tuple[dict, ...]
    events: tuple[dict, ...]

    @property
    def infraction(self) -> float:
        return infraction_score(self.route_completion, self.vehicle_collision, self.object_collision)

    @property
    def mean_decision_latency_ms(self) -> float:
        if not self.decision_latencies:
            return 0.0
        return 1000.0 * sum(self.decision_latencies) / len(self.decision_latencies)


def collision_trial(
    state: SystemState,
    model: ControllerModel,
    scene: SceneFeatures,
    rng: random.Random,
    vehicle_ratio: float = 0.5,
) -> CollisionOutcome:
    """One Bernoulli draw per segment traversal; hits split vehicle/object."""
    p = model.collision_prob(scene, state.weather, state.traffic_density, state.any_failure)
    if rng.random() >= p:
        return CollisionOutcome.NONE
    return CollisionOutcome.VEHICLE if rng.random() < vehicle_ratio else CollisionOutcome.OBJECT


class FailureInjector:
    """Stateful failure stream: the intermittent rate depends on the evolving
    weather and scene, so onsets cannot be pre-computed as a timeline."""

    def __init__(self, schedule: FailureSchedule, cfg: SimConfig, rng: random.Random) -> None:
        self.schedule = schedule
        self.cfg = cfg
        self.rng = rng
        self.component = cfg.gt.failed_component
        self.permanent_onset: float | None = None
        self.permanent_latched = False
        self.active_until: float | None = None
        if schedule is FailureSchedule.PERMANENT_AT_RANDOM:
            self.permanent_onset = sample_permanent_failure(cfg.weibull, math.inf, rng)

    def onset_hazard(self, w: Weather, scene: SceneFeatures, dt: float) -> bool:
        """Bernoulli thinning of the current intermittent onset rate over one tick."""
        if self.schedule is not FailureSchedule.INTERMITTENT:
            return False
        if self.active_until is not None or self.permanent_latched:
            return False
        rate = intermittent_failure_rate(w, scene, self.cfg.intermittent)
        return self.rng.random() < min(rate * dt, 1.0)

    def begin_intermittent(self, clock: float) -> float:
        self.active_until = clock + self.rng.expovariate(1.0 / self.cfg.intermittent_mean_duration)
        return self.active_until

    def end_intermittent(self) -> None:
        self.active_until = None

    def latch_permanent(self) -> None:
        self.permanent_latched = True
        self.permanent_onset = None


def inject_failure(schedule: FailureSchedule, cfg: SimConfig, rng: random.Random) -> FailureInjector:
    return FailureInjector(schedule, cfg, rng)


def make_switcher(strategy: Strategy, cfg: SimConfig, track: Track) -> Switcher | None:
    if strategy in (Strategy.LBC, Strategy.AP):
        return None
    reverse_mode, domain_rules = _STRATEGY_WIRING[strategy]
    models = None
    if reverse_mode is ReverseMode.MCTS:
        models = PlanningModels(
            track=track,
            lut=cfg.lut,
            weights=cfg.weights,
            weather_delta=cfg.weather_delta,
            traffic_matrix=cfg.traffic_matrix,
            weibull=cfg.weibull,
            alarms=cfg.alarms,
            knn_k=cfg.knn_k,
        )
    return Switcher(
        lut=cfg.lut,
        weights=cfg.weights,
        switch_cfg=cfg.switch_cfg,
        reverse_mode=reverse_mode,
        domain_rules=domain_rules,
        latency=cfg.latency,
        planner_models=models,
        mcts_cfg=cfg.mcts_cfg if reverse_mode is ReverseMode.MCTS else None,
        knn_k=cfg.knn_k,
    )


class _PendingDecision:
    __slots__ = ("completes_at", "event", "snapshot", "remaining_m", "is_plan")

    def __init__(self, completes_at, event, snapshot, remaining_m, is_plan):
        self.completes_at = completes_at
        self.event = event
        self.snapshot = snapshot
        self.remaining_m = remaining_m
        self.is_plan = is_plan


class _EpisodeRun:
    def __init__(self, track: Track, strategy: Strategy, cfg: SimConfig, seed: int) -> None:
        self.track = track
        self.strategy = strategy
        self.cfg = cfg
        self.seed = seed
        self.rng = random.Random(seed)
        self.segments = track.segments
        self.total_length = track.total_length

        self.weather = Weather(
            self.rng.uniform(0, 100), self.rng.uniform(0, 100), self.rng.uniform(0, 100)
        )
        self.density = cfg.initial_density.get(track.track_id, cfg.default_density)
        self.failures = [False] * cfg.gt.n_components
        self.alarmed = False
        self.controller = ControllerId.SAFETY if strategy is Strategy.AP else ControllerId.PERFORMANT
        self.omega = 0
        self.forward_switches = 0
        self.reverse_switches = 0
        self.aborted_plans = 0
        self.latencies: list[float] = []
        self.events: list[dict] = []
        self.segment_log: list[dict] = []

        self.seg = 0
        self.pos = 0.0
        self.clock = 0.0
        self.scene = self.segments[0]
        self.v = self.truth_speed()

        self.switcher = make_switcher(strategy, cfg, track)
        self.injector = inject_failure(cfg.schedule, cfg, self.rng)
        self.pending: _PendingDecision | None = None
        self.q_next = cfg.mcts_cfg.tau_q
        self.alarm_next = self.clock + self._alarm_sample()[0]
        self.intermittent_onset_at: float | None = None

        self.seg_entry_t = 0.0
        self.seg_entry_state = self.snapshot()
        self.dwell = {ControllerId.PERFORMANT: 0.0, ControllerId.SAFETY: 0.0}
        self.dwell_mark = 0.0
        self.entry_controller = self.controller

        self.done = False
        self.travel_time = 0.0
        self.route_completion = 0.0
        self.vehicle_collision = False
        self.object_collision = False

    # -- helpers -------------------------------------------------------------

    def snapshot(self) -> SystemState:
        return SystemState(
            v=self.v,
            segment_index=self.seg,
            weather=self.weather,
            traffic_density=self.density,
            controller=self.controller,
            failures=tuple(self.failures),
            monitor=MonitorState(self.alarmed, tuple(self.failures)),
            switch_count=self.omega,
            clock=self.clock,
        )

    def truth_speed(self) -> float:
        model = self.cfg.gt.model_for(self.controller)
        return model.speed(self.scene, self.weather, self.density, any(self.failures))

    def _alarm_sample(self) -> tuple[float, float]:
        return sample_alarm(self.cfg.alarms, self.snapshot(), self.scene, self.rng)

    def refresh_alarm_clock(self) -> None:
        """Exponential arrivals are memoryless, so re-sampling on a cell change is exact."""
        if not self.alarmed:
            self.alarm_next = self.clock + self._alarm_sample()[0]

    def log(self, kind: str, **payload) -> None:
        rec = {"t": round(self.clock, 4), "kind": kind}
        rec.update(payload)
        self.events.append(rec)

    # -- decision pipeline -----------------------------------------------------

    def trigger_decision(self, kind: EventKind) -> None:
        if self.switcher is None:
            return
        if self.pending is not None:
            if self.pending.is_plan:
                self.aborted_plans += 1
                self.log("plan_preempted", event=self.pending.event.kind.value)
            self.pending = None
        is_plan = (
            self.controller is ControllerId.SAFETY
            and self.switcher.reverse_mode is ReverseMode.MCTS
        )
        latency = (
            self.cfg.latency.plan_seconds(self.cfg.mcts_cfg.iterations)
            if is_plan
            else self.cfg.latency.selector_seconds
        )
        self.pending = _PendingDecision(
            completes_at=self.clock + latency,
            event=DecisionEvent(kind, self.clock),
            snapshot=self.snapshot(),
            remaining_m=self.scene.segment_length - self.pos,
            is_plan=is_plan,
        )

    def complete_decision(self) -> None:
        pending = self.pending
        self.pending = None
        assert pending is not None and self.switcher is not None
        if pending.snapshot.controller is not self.controller:
            self.log("decision_stale", event=pending.event.kind.value)
            return
        plan_rng = random.Random(self.rng.getrandbits(63)) if pending.is_plan else None
        decision = self.switcher.on_event(
            pending.event,
            pending.snapshot,
            self.segments[pending.snapshot.segment_index],
            plan_rng=plan_rng,
            remaining_m=pending.remaining_m,
            gate_state=self.snapshot(),
            gate_scene=self.scene,
        )
        self.latencies.append(decision.decision_latency)
        self.log(
            "decision",
            event=pending.event.kind.value,
            action=decision.action.name,
            gated=decision.gated,
            latency=decision.decision_latency,
            no_decision=decision.no_decision,
        )
        try:
            self.switcher.apply_decision(decision, self.snapshot(), self.clock)
        except SupersededTransition as exc:
            self.log("transition_cancelled", reason=str(exc))

    def poll_transition(self) -> None:
        if self.switcher is None:
            return
        new_controller = self.switcher.poll(self.snapshot(), self.scene, self.clock)
        if new_controller is None:
            return
        self.dwell[self.controller] += self.clock - self.dwell_mark
        self.dwell_mark = self.clock
        if new_controller is ControllerId.SAFETY:
            self.forward_switches += 1
        else:
            self.reverse_switches += 1
        self.controller = new_controller
        self.omega += 1
        self.log("transition", target=new_controller.value, omega=self.omega)

    # -- event handlers ----------------------------------------------------------

    def handle_query(self) -> None:
        self.weather = step_weather(self.weather, self.cfg.weather_delta, self.rng)
        new_density = step_traffic(self.density, self.cfg.traffic_matrix, self.rng)
        changed = new_density is not self.density
        self.density = new_density
        self.q_next += self.cfg.mcts_cfg.tau_q
        self.refresh_alarm_clock()
        kind = EventKind.TRAFFIC_CHANGE if changed else EventKind.TEMPORAL_CHANGE
        self.log("query", weather=[round(c, 2) for c in self.weather.channels()], density=self.density.value)
        self.trigger_decision(kind)

    def handle_alarm_change(self) -> None:
        if not self.alarmed:
            self.alarmed = True
            _, duration = self._alarm_sample()
            self.alarm_next = self.clock + duration
        else:
            self.alarmed = False
            self.alarm_next = self.clock + self._alarm_sample()[0]
        self.log("monitor", ood_alarm=self.alarmed)
        self.trigger_decision(EventKind.MONITOR_CHANGE)

    def handle_permanent_onset(self) -> None:
        self.failures[self.injector.component] = True
        self.injector.latch_permanent()
        self.log("failure", component=self.injector.component, mode="permanent")
        self.trigger_decision(EventKind.COMPONENT_FAILURE)

    def handle_intermittent_onset(self) -> None:
        self.failures[self.injector.component] = True
        until = self.injector.begin_intermittent(self.clock)
        self.log("failure", component=self.injector.component, mode="intermittent", until=round(until, 3))
        self.trigger_decision(EventKind.COMPONENT_FAILURE)

    def handle_intermittent_end(self) -> None:
        self.failures[self.injector.component] = False
        self.injector.end_intermittent()
        self.log("failure_cleared", component=self.injector.component)
        self.trigger_decision(EventKind.COMPONENT_FAILURE)

    def handle_crossing(self) -> bool:
        """Segment traversal finished; returns True if the episode ended."""
        exit_t = self.clock
        self.dwell[self.controller] += self.clock - self.dwell_mark
        self.dwell_mark = self.clock
        majority = max(
            (ControllerId.PERFORMANT, ControllerId.SAFETY),
            key=lambda c: (self.dwell[c], c is self.entry_controller),
        )
        model = self.cfg.gt.model_for(majority)
        outcome = collision_trial(
            self.seg_entry_state, model, self.scene, self.rng, self.cfg.vehicle_collision_ratio
        )
        if outcome is not CollisionOutcome.NONE:
            u = self.rng.random()
            collided_at = self.seg_entry_t + u * (exit_t - self.seg_entry_t)
            completed = sum(s.segment_length for s in self.segments[: self.seg])
            completed += u * self.scene.segment_length
            self.travel_time = collided_at
            self.route_completion = min(completed / self.total_length, 1.0)
            self.vehicle_collision = outcome is CollisionOutcome.VEHICLE
            self.object_collision = outcome is CollisionOutcome.OBJECT
            self.log("collision", mode=outcome.value, segment=self.seg, at=round(collided_at, 3))
            self.done = True
            return True

        self.segment_log.append(
            {
                "index": self.seg,
                "enter_t": round(self.seg_entry_t, 4),
                "exit_t": round(exit_t, 4),
                "majority": majority.value,
            }
        )
        self.seg += 1
        if self.seg >= len(self.segments):
            self.travel_time = exit_t
            self.route_completion = 1.0
            self.log("route_complete")
            self.done = True
            return True
        self.scene = self.segments[self.seg]
        self.pos = 0.0
        self.seg_entry_t = exit_t
        self.seg_entry_state = self.snapshot()
        self.dwell = {ControllerId.PERFORMANT: 0.0, ControllerId.SAFETY: 0.0}
        self.dwell_mark = exit_t
        self.entry_controller = self.controller
        self.refresh_alarm_clock()
        self.trigger_decision(EventKind.SPATIAL_CHANGE)
        return False

    # -- main loop -----------------------------------------------------------------

    def run(self) -> EpisodeMetrics:
        dt = self.cfg.tick
        n_tick = 0
        while not self.done:
            t0 = n_tick * dt
            te = (n_tick + 1) * dt
            n_tick += 1
            self.clock = t0

            # Velocity update: approach the commanded target under the accel limit.
            target = self.truth_speed()
            if self.switcher is not None:
                cap = self.switcher.speed_cap()
                if cap is not None:
                    target = min(target, cap)
            dv = target - self.v
            limit = self.cfg.a_max * dt
            self.v += max(-limit, min(limit, dv))
            self.v = max(self.v, 0.0)

            if self.injector.onset_hazard(self.weather, self.scene, dt):
                self.intermittent_onset_at = te

            agenda: list[tuple[float, int, str]] = []
            if self.pending is not None and self.pending.completes_at <= te:
                agenda.append((max(self.pending.completes_at, t0), 0, "decision"))
            sw = self.switcher
            if (
                sw is not None
                and sw.pending is not None
                and sw.pending.completes_at is not None
                and sw.pending.completes_at <= te
            ):
                agenda.append((max(sw.pending.completes_at, t0), 1, "warmup"))
            if self.injector.permanent_onset is not None and t0 < self.injector.permanent_onset <= te:
                agenda.append((self.injector.permanent_onset, 2, "perm"))
            if self.injector.active_until is not None and self.injector.active_until <= te:
                agenda.append((max(self.injector.active_until, t0), 3, "int_end"))
            if self.intermittent_onset_at is not None and self.intermittent_onset_at <= te:
                agenda.append((self.intermittent_onset_at, 4, "int_onset"))
            if self.alarm_next <= te:
                agenda.append((max(self.alarm_next, t0), 5, "alarm"))
            if self.q_next <= te:
                agenda.append((self.q_next, 6, "query"))
            if self.v > 0.0:
                t_cross = t0 + (self.scene.segment_length - self.pos) / self.v
                if t_cross <= te:
                    agenda.append((t_cross, 7, "cross"))

            agenda.sort()
            for t_ev, _rank, tag in agenda:
                self.pos += self.v * (t_ev - self.clock)
                self.clock = t_ev
                if tag == "decision":
                    self.complete_decision()
                elif tag == "warmup":
                    pass  # handled by poll below at the exact completion time
                elif tag == "perm":
                    self.handle_permanent_onset()
                elif tag == "int_end":
                    self.handle_intermittent_end()
                elif tag == "int_onset":
                    self.intermittent_onset_at = None
                    self.handle_intermittent_onset()
                elif tag == "alarm":
                    self.handle_alarm_change()
                elif tag == "query":
                    self.handle_query()
                elif tag == "cross":
                    self.pos = self.scene.segment_length
                    if self.handle_crossing():
                        break
                self.poll_transition()
                if self.done:
                    break
            if self.done:
                break

            self.pos += self.v * (te - self.clock)
            self.clock = te
            self.poll_transition()

            if self.clock >= self.cfg.max_episode_seconds:
                completed = sum(s.segment_length for s in self.segments[: self.seg]) + self.pos
                self.travel_time = self.clock
                self.route_completion = min(completed / self.total_length, 1.0)
                self.log("timeout")
                self.done = True

        return EpisodeMetrics(
            strategy=self.strategy,
            track_id=self.track.track_id,
            seed=self.seed,
            travel_time=self.travel_time,
            route_completion=self.route_completion,
            vehicle_collision=self.vehicle_collision,
            object_collision=self.object_collision,
            switch_count=self.omega,
            forward_switches=self.forward_switches,
            reverse_switches=self.reverse_switches,
            aborted_plans=self.aborted_plans,
            no_decisions=self.switcher.no_decision_count if self.switcher else 0,
            decision_latencies=tuple(self.latencies),
            segments=tuple(self.segment_log),
            events=tuple(self.events),
        )


def run_episode(track: Track, strategy: Strategy, cfg: SimConfig, seed: int) -> EpisodeMetrics:
    """Simulate one episode; deterministic in (track, strategy, cfg, seed)."""
    return _EpisodeRun(track, strategy, cfg, seed).run()


# ---------------------------------------------------------------------------
# Default synthetic benchmark
# ---------------------------------------------------------------------------


def default_controller_models() -> tuple[ControllerModel, ControllerModel]:
    """Hand-tuned surfaces: the performant controller is fast but fragile in
    cluttered scenes, bad weather, and under camera occlusion; the safety
    controller is slow and nearly immune to all three."""
    performant = ControllerModel(
        controller=ControllerId.PERFORMANT,
        base_speed={
            RoadType.MAIN_ROAD: 13.0,
            RoadType.OVERPASS: 13.0,
            RoadType.FREEWAY: 18.0,
            RoadType.INTERSECTION: 9.0,
            RoadType.LANE_CHANGE: 11.0,
            RoadType.ROUNDABOUT: 8.0,
            RoadType.TUNNEL: 12.0,
        },
        density_speed={TrafficLevel.LOW: 1.0, TrafficLevel.MEDIUM: 0.85, TrafficLevel.HIGH: 0.65},
        weather_slowdown=0.25,
        failure_speed_factor=0.9,
        base_collision={
            RoadType.MAIN_ROAD: 0.008,
            RoadType.OVERPASS: 0.008,
            RoadType.FREEWAY: 0.005,
            RoadType.INTERSECTION: 0.03,
            RoadType.LANE_CHANGE: 0.018,
            RoadType.ROUNDABOUT: 0.025,
            RoadType.TUNNEL: 0.01,
        },
        weather_collision_gain=0.025,
        density_collision_gain={TrafficLevel.LOW: 0.0, TrafficLevel.MEDIUM: 0.008, TrafficLevel.HIGH: 0.015},
        failure_collision_gain=0.45,
        speed_noise_sd=0.6,
    )
    safety = ControllerModel(
        controller=ControllerId.SAFETY,
        base_speed={
            RoadType.MAIN_ROAD: 7.0,
            RoadType.OVERPASS: 7.0,
            RoadType.FREEWAY: 10.0,
            RoadType.INTERSECTION: 5.0,
            RoadType.LANE_CHANGE: 6.0,
            RoadType.ROUNDABOUT: 5.0,
            RoadType.TUNNEL: 6.5,
        },
        density_speed={TrafficLevel.LOW: 1.0, TrafficLevel.MEDIUM: 0.9, TrafficLevel.HIGH: 0.8},
        weather_slowdown=0.10,
        failure_speed_factor=1.0,
        base_collision={
            RoadType.MAIN_ROAD: 0.002,
            RoadType.OVERPASS: 0.002,
            RoadType.FREEWAY: 0.002,
            RoadType.INTERSECTION: 0.005,
            RoadType.LANE_CHANGE: 0.003,
            RoadType.ROUNDABOUT: 0.004,
            RoadType.TUNNEL: 0.0025,
        },
        weather_collision_gain=0.004,
        density_collision_gain={TrafficLevel.LOW: 0.0, TrafficLevel.MEDIUM: 0.001, TrafficLevel.HIGH: 0.002},
        failure_collision_gain=0.0,
        speed_noise_sd=0.4,
    )
    return performant, safety


def _seg(road: RoadType, length: float, curvature: float = 0.0, sign: bool = False) -> SceneFeatures:
    return SceneFeatures(road_type=road, curvature=curvature, has_traffic_sign=sign, segment_length=length)


def default_tracks() -> tuple[Track, ...]:
    downtown = Track(
        "downtown",
        (
            _seg(RoadType.MAIN_ROAD, 200.0, sign=True),
            _seg(RoadType.INTERSECTION, 120.0, sign=True),
            _seg(RoadType.MAIN_ROAD, 180.0),
            _seg(RoadType.LANE_CHANGE, 160.0, curvature=0.05),
            _seg(RoadType.ROUNDABOUT, 140.0, curvature=0.15, sign=True),
            _seg(RoadType.MAIN_ROAD, 200.0),
            _seg(RoadType.INTERSECTION, 120.0, sign=True),
            _seg(RoadType.MAIN_ROAD, 220.0, curvature=0.05),
            _seg(RoadType.LANE_CHANGE, 150.0, curvature=0.05),
            _seg(RoadType.MAIN_ROAD, 180.0),
            _seg(RoadType.ROUNDABOUT, 130.0, curvature=0.15, sign=True),
            _seg(RoadType.MAIN_ROAD, 200.0, sign=True),
        ),
    )
    suburb = Track(
        "suburb",
        (
            _seg(RoadType.MAIN_ROAD, 250.0),
            _seg(RoadType.OVERPASS, 300.0, curvature=0.05),
            _seg(RoadType.MAIN_ROAD, 220.0),
            _seg(RoadType.INTERSECTION, 120.0),
            _seg(RoadType.MAIN_ROAD, 260.0),
            _seg(RoadType.OVERPASS, 280.0, curvature=0.05),
            _seg(RoadType.MAIN_ROAD, 240.0),
            _seg(RoadType.LANE_CHANGE, 160.0, curvature=0.05),
            _seg(RoadType.MAIN_ROAD, 250.0),
            _seg(RoadType.INTERSECTION, 120.0, sign=True),
            _seg(RoadType.MAIN_ROAD, 230.0),
        ),
    )
    freeway = Track(
        "freeway",
        (
            _seg(RoadType.FREEWAY, 400.0),
            _seg(RoadType.FREEWAY, 380.0, curvature=0.05),
            _seg(RoadType.LANE_CHANGE, 200.0, curvature=0.05),
            _seg(RoadType.FREEWAY, 420.0),
            _seg(RoadType.FREEWAY, 360.0),
            _seg(RoadType.LANE_CHANGE, 200.0, curvature=0.05),
            _seg(RoadType.FREEWAY, 400.0, curvature=0.05),
            _seg(RoadType.FREEWAY, 380.0),
            _seg(RoadType.LANE_CHANGE, 200.0),
            _seg(RoadType.FREEWAY, 400.0),
        ),
    )
    tunnel_city = Track(
        "tunnel_city",
        (
            _seg(RoadType.TUNNEL, 300.0),
            _seg(RoadType.TUNNEL, 280.0, curvature=0.05),
            _seg(RoadType.TUNNEL, 300.0),
            _seg(RoadType.MAIN_ROAD, 200.0),
            _seg(RoadType.INTERSECTION, 120.0, sign=True),
            _seg(RoadType.MAIN_ROAD, 180.0),
            _seg(RoadType.LANE_CHANGE, 150.0),
            _seg(RoadType.MAIN_ROAD, 200.0, curvature=0.05),
            _seg(RoadType.ROUNDABOUT, 140.0, curvature=0.15, sign=True),
            _seg(RoadType.MAIN_ROAD, 180.0),
            _seg(RoadType.INTERSECTION, 120.0, sign=True),
            _seg(RoadType.MAIN_ROAD, 200.0),
            _seg(RoadType.LANE_CHANGE, 150.0),
            _seg(RoadType.MAIN_ROAD, 190.0),
        ),
    )
    return downtown, suburb, freeway, tunnel_city


DEFAULT_INITIAL_DENSITY = {
    "downtown": TrafficLevel.HIGH,
    "suburb": TrafficLevel.LOW,
    "freeway": TrafficLevel.LOW,
    "tunnel_city": TrafficLevel.MEDIUM,
}
