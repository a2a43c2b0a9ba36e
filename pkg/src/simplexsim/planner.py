"""Non-myopic reverse-switch planner: UCT search over an event-driven SMDP.

Decisions happen at event boundaries. A simulated transition races four event
sources: arrival in the next structural scene (t_e), the next monitor-state
change (t_o), a permanent component failure sampled inside the race window
(t_f), and expiry of the temporal query budget (t_q). Whichever fires first
determines which state variables are resampled, and the query budget is
decremented by the elapsed time or reset when it was the budget itself that
expired.

Rewards are computed with core.reverse_reward and discounted per decision
step. The switch counter increments on simulated switches, so in-tree
oscillation pays the same cost the real system would.
"""
from __future__ import annotations

import logging
import math
import random
from dataclasses import dataclass

from .core import (
    ACTIONS,
    Action,
    ControllerId,
    MonitorState,
    RewardWeights,
    SceneFeatures,
    SystemState,
    Track,
    reverse_reward,
)
from .envmodels import (
    AlarmParams,
    TrafficMatrix,
    WeibullParams,
    sample_alarm,
    sample_permanent_failure,
    step_traffic,
    step_weather,
)
from .surrogate import LookupTable, query_belief

logger = logging.getLogger(__name__)

INFINITY = float("inf")
WEATHER_GRID = 5.0  # bucket size for chance-node outcome keys


class PlanningAborted(RuntimeError):
    def __init__(self, iterations_completed: int):
        super().__init__(f"planning aborted after {iterations_completed} iterations")
        self.iterations_completed = iterations_completed


@dataclass(frozen=True, slots=True)
class MctsConfig:
    iterations: int = 500
    c_uct: float = math.sqrt(2.0)
    gamma: float = 0.9
    tau_q: float = 20.0
    horizon_scenes: int = 3
    time_epsilon: float = 1e-6
    v_min: float = 0.5
    max_rollout_steps: int = 128

    def __post_init__(self) -> None:
        if self.iterations < 1:
            raise ValueError(f"iterations must be >= 1, got {self.iterations}")
        if self.c_uct < 0.0:
            raise ValueError(f"c_uct must be >= 0, got {self.c_uct}")
        if not 0.0 <= self.gamma <= 1.0:
            raise ValueError(f"gamma must be in [0, 1], got {self.gamma}")
        if self.tau_q <= 0.0:
            raise ValueError(f"tau_q must be > 0, got {self.tau_q}")
        if self.horizon_scenes < 0:
            raise ValueError(f"horizon_scenes must be >= 0, got {self.horizon_scenes}")
        if self.v_min <= 0.0:
            raise ValueError(f"v_min must be > 0, got {self.v_min}")


@dataclass(frozen=True)
class PlanningModels:
    """Everything the planner samples from or scores with."""

    track: Track
    lut: LookupTable
    weights: RewardWeights
    weather_delta: float
    traffic_matrix: TrafficMatrix
    weibull: WeibullParams
    alarms: AlarmParams
    knn_k: int = 5


@dataclass(frozen=True, slots=True)
class SwitchPolicy:
    """Visit-count policy over (KeepCurrent, SwitchController)."""

    probabilities: tuple[float, float]

    def __post_init__(self) -> None:
        if any(p < 0.0 for p in self.probabilities):
            raise ValueError("probabilities must be >= 0")
        if abs(sum(self.probabilities) - 1.0) > 1e-9:
            raise ValueError(f"probabilities must sum to 1, got {self.probabilities}")

    def prob(self, action: Action) -> float:
        return self.probabilities[action.value]


def ucb(q: float, n_state: int, n_action: int, c: float) -> float:
    """Upper confidence bound; untried actions get the +inf sentinel."""
    if n_action == 0:
        return INFINITY
    return q + c * math.sqrt(math.log(n_state) / n_action)


class _Node:
    __slots__ = (
        "state",
        "t_q",
        "remaining_m",
        "scenes_from_root",
        "route_done",
        "visited",
        "n",
        "n_a",
        "q_a",
        "children",
    )

    def __init__(
        self,
        state: SystemState,
        t_q: float,
        remaining_m: float,
        scenes_from_root: int,
        route_done: bool,
    ) -> None:
        self.state = state
        self.t_q = t_q
        self.remaining_m = remaining_m
        self.scenes_from_root = scenes_from_root
        self.route_done = route_done
        self.visited = False
        self.n = 0
        self.n_a = [0, 0]
        self.q_a = [0.0, 0.0]
        self.children: dict[tuple, _Node] = {}


class _Search:
    """One planning invocation: owns the rng, belief memo, and tree."""

    def __init__(self, models: PlanningModels, cfg: MctsConfig, rng: random.Random) -> None:
        self.models = models
        self.cfg = cfg
        self.rng = rng
        self._beliefs: dict[tuple, object] = {}
        self._warned_zero_velocity = False

    # -- scoring -----------------------------------------------------------

    def scene_at(self, state: SystemState) -> SceneFeatures:
        return self.models.track.segments[state.segment_index]

    def belief(self, state: SystemState, controller: ControllerId):
        scene = self.scene_at(state)
        key = (
            scene.structural_label,
            state.weather.channels(),
            state.traffic_density,
            state.failures,
            controller,
        )
        b = self._beliefs.get(key)
        if b is None:
            b = query_belief(self.models.lut, state, scene, controller, self.models.knn_k)
            self._beliefs[key] = b
        return b

    def apply_action(self, state: SystemState, action: Action) -> SystemState:
        if action is Action.SWITCH_CONTROLLER:
            return state.evolve(controller=state.controller.other(), switch_count=state.switch_count + 1)
        return state

    def action_reward(self, state: SystemState, action: Action) -> float:
        after = self.apply_action(state, action)
        b = self.belief(state, after.controller)
        return reverse_reward(b, after.switch_count, self.models.weights)

    def terminal_value(self, state: SystemState) -> float:
        return max(self.action_reward(state, a) for a in ACTIONS)

    # -- transition model ---------------------------------------------------

    def advance(
        self, state: SystemState, t_q: float, remaining_m: float, action: Action
    ) -> tuple[SystemState, float, float, float, bool, bool]:
        """Apply the action, then race the event sources.

        Returns (next_state, elapsed, new_t_q, new_remaining_m, scene_advanced,
        route_done).
        """
        cfg = self.cfg
        models = self.models
        rng = self.rng
        state = self.apply_action(state, action)
        scene = self.scene_at(state)

        v = self.belief(state, state.controller).raw_speed
        if v <= 0.0:
            if not self._warned_zero_velocity:
                logger.warning("surrogate returned nonpositive speed; clamping to v_min=%s", cfg.v_min)
                self._warned_zero_velocity = True
            v = cfg.v_min

        t_e = remaining_m / v

        # Next monitor change: arrival of an alarm if quiet, end of it if active.
        arrival, duration = sample_alarm(models.alarms, state, scene, rng)
        t_o = duration if state.monitor.ood_alarm else arrival

        # A fresh permanent failure can only preempt the earlier of the others.
        window = min(t_e, t_o, t_q)
        candidates = [i for i, failed in enumerate(state.failures) if not failed]
        t_f = sample_permanent_failure(models.weibull, window, rng) if candidates else None

        density = step_traffic(state.traffic_density, models.traffic_matrix, rng)
        segments = models.track.segments

        if t_f is not None:
            hit = candidates[rng.randrange(len(candidates))]
            failures = tuple(f or i == hit for i, f in enumerate(state.failures))
            nxt = state.evolve(
                v=v,
                traffic_density=density,
                failures=failures,
                monitor=MonitorState(state.monitor.ood_alarm, failures),
                clock=state.clock + t_f,
            )
            return nxt, t_f, t_q - t_f, remaining_m - v * t_f, False, False

        if t_o < t_e and t_o < t_q:
            monitor = MonitorState(not state.monitor.ood_alarm, state.monitor.occlusion_flags)
            nxt = state.evolve(v=v, traffic_density=density, monitor=monitor, clock=state.clock + t_o)
            return nxt, t_o, t_q - t_o, remaining_m - v * t_o, False, False

        if t_e < t_q:
            route_done = state.segment_index + 1 >= len(segments)
            new_seg = state.segment_index if route_done else state.segment_index + 1
            nxt = state.evolve(v=v, segment_index=new_seg, traffic_density=density, clock=state.clock + t_e)
            new_rem = 0.0 if route_done else segments[new_seg].segment_length
            return nxt, t_e, t_q - t_e, new_rem, True, route_done

        if abs(t_e - t_q) <= cfg.time_epsilon:
            # Scene boundary and query expiry coincide: advance both.
            route_done = state.segment_index + 1 >= len(segments)
            new_seg = state.segment_index if route_done else state.segment_index + 1
            weather = step_weather(state.weather, models.weather_delta, rng)
            nxt = state.evolve(
                v=v,
                segment_index=new_seg,
                weather=weather,
                traffic_density=density,
                clock=state.clock + t_e,
            )
            new_rem = 0.0 if route_done else segments[new_seg].segment_length
            return nxt, t_e, cfg.tau_q, new_rem, True, route_done

        # Query budget expired first: refresh the temporal parameters.
        weather = step_weather(state.weather, models.weather_delta, rng)
        nxt = state.evolve(v=v, weather=weather, traffic_density=density, clock=state.clock + t_q)
        return nxt, t_q, cfg.tau_q, remaining_m - v * t_q, False, False

    # -- search -------------------------------------------------------------

    def is_terminal(self, node: _Node) -> bool:
        return node.route_done or node.scenes_from_root >= self.cfg.horizon_scenes

    def outcome_key(self, action: Action, state: SystemState, route_done: bool) -> tuple:
        w = state.weather
        wkey = (int(w.cloudiness // WEATHER_GRID), int(w.precipitation // WEATHER_GRID), int(w.deposit // WEATHER_GRID))
        return (
            action.value,
            state.segment_index,
            route_done,
            wkey,
            state.traffic_density,
            state.failures,
            state.monitor.ood_alarm,
            state.switch_count,
        )

    def tree_search(self, node: _Node) -> float:
        if self.is_terminal(node):
            return self.terminal_value(node.state)
        if not node.visited:
            node.visited = True
            return self.rollout(node)

        c = self.cfg.c_uct
        best_a = 0
        best_score = -INFINITY
        for a in (0, 1):
            score = ucb(node.q_a[a], node.n, node.n_a[a], c)
            if score > best_score:  # strict: ties keep the lower index (KeepCurrent)
                best_score = score
                best_a = a
        action = ACTIONS[best_a]

        nxt, _elapsed, new_t_q, new_rem, advanced, route_done = self.advance(
            node.state, node.t_q, node.remaining_m, action
        )
        key = self.outcome_key(action, nxt, route_done)
        child = node.children.get(key)
        if child is None:
            child = _Node(
                nxt,
                new_t_q,
                new_rem,
                node.scenes_from_root + (1 if advanced else 0),
                route_done,
            )
            node.children[key] = child

        r = self.action_reward(node.state, action) + self.cfg.gamma * self.tree_search(child)

        node.n_a[best_a] += 1
        node.q_a[best_a] += (r - node.q_a[best_a]) / node.n_a[best_a]
        node.n += 1
        return r

    def rollout(self, node: _Node) -> float:
        state, t_q, remaining = node.state, node.t_q, node.remaining_m
        scenes = node.scenes_from_root
        route_done = node.route_done
        total = 0.0
        disc = 1.0
        steps = 0
        while not route_done and scenes < self.cfg.horizon_scenes and steps < self.cfg.max_rollout_steps:
            action = ACTIONS[self.rng.randrange(2)]
            total += disc * self.action_reward(state, action)
            state, _elapsed, t_q, remaining, advanced, route_done = self.advance(
                state, t_q, remaining, action
            )
            scenes += 1 if advanced else 0
            disc *= self.cfg.gamma
            steps += 1
        total += disc * self.terminal_value(state)
        return total


def advance_time(
    state: SystemState,
    t_q: float,
    action: Action,
    models: PlanningModels,
    rng: random.Random,
    cfg: MctsConfig,
    remaining_m: float | None = None,
) -> tuple[SystemState, float, float]:
    """One simulated SMDP transition. remaining_m defaults to the full current
    segment length; pass the true remaining distance when mid-segment."""
    if remaining_m is None:
        remaining_m = models.track.segments[state.segment_index].segment_length
    search = _Search(models, cfg, rng)
    nxt, elapsed, new_t_q, _rem, _adv, _done = search.advance(state, t_q, remaining_m, action)
    return nxt, elapsed, new_t_q


def plan_with_tree(
    state: SystemState,
    models: PlanningModels,
    cfg: MctsConfig,
    rng: random.Random,
    interrupt_flag=None,
    remaining_m: float | None = None,
) -> tuple[SwitchPolicy, Action, _Node]:
    """mcts_plan plus the root node, for introspection in tests."""
    if state.controller is not ControllerId.SAFETY:
        raise ValueError("reverse planning runs only while the safety controller is engaged")
    if remaining_m is None:
        remaining_m = models.track.segments[state.segment_index].segment_length

    search = _Search(models, cfg, rng)
    root = _Node(state, cfg.tau_q, remaining_m, 0, False)
    root.visited = True  # the root is expanded immediately, never rolled out

    for m in range(cfg.iterations):
        if interrupt_flag is not None and interrupt_flag.is_set():
            raise PlanningAborted(m)
        search.tree_search(root)

    if root.n == 0:  # degenerate: terminal root, nothing was counted
        policy = SwitchPolicy((1.0, 0.0))
        return policy, Action.KEEP_CURRENT, root
    policy = SwitchPolicy((root.n_a[0] / root.n, root.n_a[1] / root.n))
    chosen = Action.SWITCH_CONTROLLER if policy.probabilities[1] > policy.probabilities[0] else Action.KEEP_CURRENT
    return policy, chosen, root


def mcts_plan(
    state: SystemState,
    models: PlanningModels,
    cfg: MctsConfig,
    rng: random.Random,
    interrupt_flag=None,
    remaining_m: float | None = None,
) -> tuple[SwitchPolicy, Action]:
    """Run the full search and return the visit-count policy and its argmax.

    The interrupt flag (any object with is_set()) is polled between iterations;
    raising it aborts with PlanningAborted after at most one more iteration.
    """
    policy, chosen, _root = plan_with_tree(state, models, cfg, rng, interrupt_flag, remaining_m)
    return policy, chosen
