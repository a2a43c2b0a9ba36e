"""Event-driven switching logic tying the selector, planner, and gate rules together.

Forward switches (performant -> safety) are decided myopically from surrogate
beliefs and are never blocked by road-type rules; they are only staged on
speed. Reverse switches (safety -> performant) are decided either myopically
or by the MCTS planner and, when domain rules are active, execute only below
the staging speed on an allowed road type. Gated decisions persist with a
speed-reduction command until a fresh decision event replaces them. Completed
gates are followed by a warm-up in which the outgoing controller keeps
driving; the switch counter increments exactly once, at completion.
"""
from __future__ import annotations

import logging
import random
import threading
from dataclasses import dataclass
from enum import Enum

from .core import (
    Action,
    ControllerId,
    RewardWeights,
    RoadType,
    SceneFeatures,
    SystemState,
    forward_reward,
)
from .planner import MctsConfig, PlanningModels, mcts_plan
from .surrogate import EmptyPartition, LookupTable, MissingCluster, query_belief

logger = logging.getLogger(__name__)

ALLOWED_ROAD_TYPES = frozenset({RoadType.MAIN_ROAD, RoadType.OVERPASS, RoadType.FREEWAY})
FORBIDDEN_ROAD_TYPES = frozenset({RoadType.INTERSECTION, RoadType.LANE_CHANGE, RoadType.ROUNDABOUT})

SPEED_CAP_FACTOR = 0.9  # stage to a bit under tau_s so the gate actually clears


class SupersededTransition(RuntimeError):
    """A newer decision reversed a pending transition before it completed."""


class EventKind(Enum):
    SPATIAL_CHANGE = "spatial_change"
    TEMPORAL_CHANGE = "temporal_change"
    COMPONENT_FAILURE = "component_failure"
    TRAFFIC_CHANGE = "traffic_change"
    MONITOR_CHANGE = "monitor_change"


class ReverseMode(Enum):
    NONE = "none"  # forward-only simplex: never returns to the performant controller
    MYOPIC = "myopic"
    MCTS = "mcts"


@dataclass(frozen=True, slots=True)
class DecisionEvent:
    kind: EventKind
    timestamp: float


@dataclass(frozen=True, slots=True)
class SwitchConfig:
    tau_s: float
    warmup_duration: float = 2.0
    allowed_road_types: frozenset = ALLOWED_ROAD_TYPES
    forbidden_road_types: frozenset = FORBIDDEN_ROAD_TYPES

    def __post_init__(self) -> None:
        if self.tau_s <= 0.0:
            raise ValueError(f"tau_s must be > 0, got {self.tau_s}")
        if self.warmup_duration < 0.0:
            raise ValueError(f"warmup_duration must be >= 0, got {self.warmup_duration}")
        if self.allowed_road_types & self.forbidden_road_types:
            raise ValueError("allowed and forbidden road types must be disjoint")


@dataclass(frozen=True, slots=True)
class LatencyModel:
    """Simulated decision latencies; keeps episode dynamics deterministic."""

    selector_seconds: float = 0.02
    plan_base_seconds: float = 0.25
    plan_seconds_per_iteration: float = 0.0014

    def plan_seconds(self, iterations: int) -> float:
        return self.plan_base_seconds + self.plan_seconds_per_iteration * iterations


@dataclass(frozen=True, slots=True)
class Decision:
    action: Action
    gated: bool
    decision_latency: float
    no_decision: bool = False  # surrogate had no data; current controller kept


class _PendingTransition:
    __slots__ = ("target", "requested_at", "gate_cleared_at", "completes_at")

    def __init__(self, target: ControllerId, requested_at: float) -> None:
        self.target = target
        self.requested_at = requested_at
        self.gate_cleared_at: float | None = None
        self.completes_at: float | None = None


class Switcher:
    """One logical decision loop for a single vehicle."""

    def __init__(
        self,
        lut: LookupTable,
        weights: RewardWeights,
        switch_cfg: SwitchConfig,
        reverse_mode: ReverseMode,
        domain_rules: bool,
        latency: LatencyModel | None = None,
        planner_models: PlanningModels | None = None,
        mcts_cfg: MctsConfig | None = None,
        knn_k: int = 5,
    ) -> None:
        if reverse_mode is ReverseMode.MCTS and (planner_models is None or mcts_cfg is None):
            raise ValueError("MCTS reverse mode needs planner models and an MCTS config")
        self.lut = lut
        self.weights = weights
        self.cfg = switch_cfg
        self.reverse_mode = reverse_mode
        self.domain_rules = domain_rules
        self.latency = latency or LatencyModel()
        self.planner_models = planner_models
        self.mcts_cfg = mcts_cfg
        self.knn_k = knn_k
        self.pending: _PendingTransition | None = None
        self.interrupt_flag = threading.Event()
        self.no_decision_count = 0

    # -- decisions -----------------------------------------------------------

    def preempt(self) -> None:
        """Ask any in-flight planning run to abort; idempotent."""
        self.interrupt_flag.set()

    def on_event(
        self,
        event: DecisionEvent,
        state: SystemState,
        scene: SceneFeatures,
        plan_rng: random.Random | None = None,
        remaining_m: float | None = None,
        gate_state: SystemState | None = None,
        gate_scene: SceneFeatures | None = None,
    ) -> Decision:
        """Evaluate one decision event and return the gated decision.

        The decision itself is computed on `state` (the state at event time);
        the gate check runs on `gate_state`/`gate_scene` when given, so a
        caller that models decision latency can gate against the conditions
        at application time instead.
        """
        # A fresh event cancels the persistence of a still-gated decision.
        if self.pending is not None and self.pending.gate_cleared_at is None:
            self.pending = None

        if state.controller is ControllerId.PERFORMANT:
            decision = self._myopic(state, scene, want_switch_when=ControllerId.SAFETY)
        elif self.reverse_mode is ReverseMode.NONE:
            decision = Decision(Action.KEEP_CURRENT, False, 0.0)
        elif self.reverse_mode is ReverseMode.MYOPIC:
            decision = self._myopic(state, scene, want_switch_when=ControllerId.PERFORMANT)
        else:
            decision = self._planned(state, plan_rng, remaining_m)

        return self.gate_decision(
            decision,
            gate_state if gate_state is not None else state,
            gate_scene if gate_scene is not None else scene,
        )

    def _myopic(
        self, state: SystemState, scene: SceneFeatures, want_switch_when: ControllerId
    ) -> Decision:
        try:
            b_perf = query_belief(self.lut, state, scene, ControllerId.PERFORMANT, self.knn_k)
            b_safe = query_belief(self.lut, state, scene, ControllerId.SAFETY, self.knn_k)
        except (MissingCluster, EmptyPartition) as exc:
            self.no_decision_count += 1
            logger.info("no surrogate data (%s); keeping %s", exc, state.controller.value)
            return Decision(Action.KEEP_CURRENT, False, self.latency.selector_seconds, no_decision=True)
        r_perf = forward_reward(b_perf, self.weights)
        r_safe = forward_reward(b_safe, self.weights)
        better = {ControllerId.PERFORMANT: r_perf, ControllerId.SAFETY: r_safe}
        other = state.controller.other()
        # Strict improvement required; ties keep the current controller.
        action = (
            Action.SWITCH_CONTROLLER
            if other is want_switch_when and better[other] > better[state.controller]
            else Action.KEEP_CURRENT
        )
        return Decision(action, False, self.latency.selector_seconds)

    def _planned(
        self, state: SystemState, plan_rng: random.Random | None, remaining_m: float | None
    ) -> Decision:
        assert self.planner_models is not None and self.mcts_cfg is not None
        self.interrupt_flag.clear()
        rng = plan_rng if plan_rng is not None else random.Random(0)
        try:
            _policy, action = mcts_plan(
                state,
                self.planner_models,
                self.mcts_cfg,
                rng,
                interrupt_flag=self.interrupt_flag,
                remaining_m=remaining_m,
            )
        except (MissingCluster, EmptyPartition) as exc:
            self.no_decision_count += 1
            logger.info("no surrogate data (%s); keeping %s", exc, state.controller.value)
            return Decision(
                Action.KEEP_CURRENT,
                False,
                self.latency.plan_seconds(self.mcts_cfg.iterations),
                no_decision=True,
            )
        return Decision(action, False, self.latency.plan_seconds(self.mcts_cfg.iterations))

    def gate_decision(self, decision: Decision, state: SystemState, scene: SceneFeatures) -> Decision:
        """Apply road-type gating. Forward switches are never road-gated; reverse
        switches are gated unless below tau_s on an allowed road type."""
        if decision.action is not Action.SWITCH_CONTROLLER:
            return decision
        if state.controller is ControllerId.PERFORMANT:
            return decision  # forward: speed staging happens in the transition machine
        if not self.domain_rules:
            return decision
        ok = state.v < self.cfg.tau_s and scene.road_type in self.cfg.allowed_road_types
        if ok:
            return decision
        return Decision(decision.action, True, decision.decision_latency, decision.no_decision)

    # -- transition state machine ---------------------------------------------

    def apply_decision(self, decision: Decision, state: SystemState, clock: float) -> None:
        """Feed a completed decision into the transition machine.

        Raises SupersededTransition when the decision reverses a pending
        transition; the pending transition is cancelled and the switch counter
        stays untouched.
        """
        if decision.action is Action.KEEP_CURRENT:
            if self.pending is not None:
                self.pending = None
                raise SupersededTransition("keep-current decision cancelled the pending transition")
            return
        target = state.controller.other()
        if self.pending is not None:
            if self.pending.target is target:
                return  # same intent: let the running transition finish
            self.pending = None
            raise SupersededTransition(f"pending transition replaced by switch to {target.value}")
        self.pending = _PendingTransition(target, clock)

    def warmup_transition(self, target: ControllerId, clock: float) -> float:
        """Start the warm-up for `target` and return its completion time."""
        if self.pending is not None and self.pending.target is not target:
            self.pending = None
            raise SupersededTransition("warm-up requested for the opposite target")
        if self.pending is None:
            self.pending = _PendingTransition(target, clock)
        self.pending.gate_cleared_at = clock
        self.pending.completes_at = clock + self.cfg.warmup_duration
        return self.pending.completes_at

    def _gate_clear(self, state: SystemState, scene: SceneFeatures) -> bool:
        pending = self.pending
        assert pending is not None
        if pending.target is ControllerId.SAFETY:
            return state.v < self.cfg.tau_s  # forward: speed staging only
        if not self.domain_rules:
            return True
        return state.v < self.cfg.tau_s and scene.road_type in self.cfg.allowed_road_types

    def poll(self, state: SystemState, scene: SceneFeatures, clock: float) -> ControllerId | None:
        """Advance the transition machine; returns the new controller on completion."""
        pending = self.pending
        if pending is None:
            return None
        if pending.gate_cleared_at is None:
            if not self._gate_clear(state, scene):
                return None
            self.warmup_transition(pending.target, clock)
            pending = self.pending
        if pending is not None and pending.completes_at is not None and clock >= pending.completes_at:
            if (
                pending.target is ControllerId.PERFORMANT
                and self.domain_rules
                and scene.road_type not in self.cfg.allowed_road_types
            ):
                # the vehicle crossed onto a restricted segment during warm-up;
                # hold the handover until an allowed one
                return None
            target = pending.target
            self.pending = None
            return target
        return None

    def speed_cap(self) -> float | None:
        """Commanded ceiling while a transition waits on its speed gate."""
        pending = self.pending
        if pending is None or pending.gate_cleared_at is not None:
            return None
        if pending.target is ControllerId.SAFETY or self.domain_rules:
            return self.cfg.tau_s * SPEED_CAP_FACTOR
        return None

    def reset(self) -> None:
        self.pending = None
        self.interrupt_flag.clear()
        self.no_decision_count = 0
