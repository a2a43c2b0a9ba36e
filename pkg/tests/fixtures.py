"""Shared micro-benchmark fixture: a 2-segment track with constant surrogate
beliefs, small enough for the expectimax oracle to enumerate, deterministic
enough for the sampling planner to be checked against it.

The lookup table holds identical records at two weather points, so beliefs are
exact constants regardless of k, and the planner's event race is configured so
only the scene-arrival branch can fire (query budget and alarm/failure
horizons far beyond the route). Transitions inside the search tree are then
fully deterministic.

Under CALM weather the performant controller is fast and clean on both
segments, so switching immediately is optimal. Under STORM weather it collides
on the freeway segment but is clean afterwards: the optimal plan is to stay on
the safety controller for one more scene and switch then, which is exactly the
non-myopic case the planner exists for.
"""
from __future__ import annotations

from simplexsim.core import (
    ControllerId,
    MonitorState,
    RewardWeights,
    RoadType,
    SceneFeatures,
    SystemState,
    TrafficLevel,
    Weather,
    reverse_reward,
)
from simplexsim.envmodels import AlarmParams, WeibullParams
from simplexsim.oracle import MicroSmdp, micro_smdp_from_dict
from simplexsim.planner import MctsConfig, PlanningModels
from simplexsim.surrogate import Belief, LutRecord, build_lut

CALM = Weather(80.0, 10.0, 10.0)
STORM = Weather(20.0, 90.0, 60.0)

SEG_FREEWAY = SceneFeatures(RoadType.FREEWAY, 0.0, False, 100.0)
SEG_MAIN = SceneFeatures(RoadType.MAIN_ROAD, 0.0, False, 100.0)

V_MAX = 20.0
PERF_SPEED = 15.0
SAFE_SPEED = 5.0
WEIGHTS = RewardWeights(alpha1=1.0, alpha2=1.0, alpha3=0.5, m_s=4)

IDENTITY_TRAFFIC = ((1.0, 0.0, 0.0), (0.0, 1.0, 0.0), (0.0, 0.0, 1.0))
FAR_FUTURE = 1.0e12

MICRO_TRACK_SEGMENTS = (SEG_FREEWAY, SEG_MAIN)


def micro_track():
    from simplexsim.core import Track

    return Track("micro", MICRO_TRACK_SEGMENTS)


def _records() -> list[LutRecord]:
    def rec(scene, weather, controller, speed, collided):
        return LutRecord(
            structural_label=scene.structural_label,
            weather=weather,
            traffic_density=TrafficLevel.MEDIUM,
            failure_signature=(False, False, False),
            controller=controller,
            observed_speed=speed,
            collided=collided,
        )

    out = []
    for scene in (SEG_FREEWAY, SEG_MAIN):
        for weather in (CALM, STORM):
            perf_collides = scene is SEG_FREEWAY and weather is STORM
            for _ in range(2):  # duplicates keep beliefs constant at k=2
                out.append(rec(scene, weather, ControllerId.PERFORMANT, PERF_SPEED, perf_collides))
                out.append(rec(scene, weather, ControllerId.SAFETY, SAFE_SPEED, False))
    return out


def micro_models(horizon_scenes: int = 2, iterations: int = 500) -> tuple[PlanningModels, MctsConfig]:
    lut = build_lut(_records(), v_max=V_MAX)
    models = PlanningModels(
        track=micro_track(),
        lut=lut,
        weights=WEIGHTS,
        weather_delta=0.0,
        traffic_matrix=IDENTITY_TRAFFIC,
        weibull=WeibullParams(shape=2.0, scale=FAR_FUTURE),
        alarms=AlarmParams.uniform(FAR_FUTURE, FAR_FUTURE),
        knn_k=2,
    )
    cfg = MctsConfig(
        iterations=iterations,
        gamma=0.9,
        tau_q=FAR_FUTURE,
        horizon_scenes=horizon_scenes,
    )
    return models, cfg


def root_state(weather: Weather) -> SystemState:
    return SystemState(
        v=SAFE_SPEED,
        segment_index=0,
        weather=weather,
        traffic_density=TrafficLevel.MEDIUM,
        controller=ControllerId.SAFETY,
        failures=(False, False, False),
        monitor=MonitorState(False, (False, False, False)),
        switch_count=1,
    )


def _belief(seg_index: int, weather: Weather, controller: ControllerId) -> Belief:
    perf_collides = seg_index == 0 and weather is STORM
    if controller is ControllerId.PERFORMANT:
        return Belief(PERF_SPEED / V_MAX, 1.0 if perf_collides else 0.0, PERF_SPEED)
    return Belief(SAFE_SPEED / V_MAX, 0.0, SAFE_SPEED)


def _state_key(seg: int, controller: ControllerId, omega: int, done: bool) -> str:
    return f"{seg}|{controller.value}|{omega}|{'done' if done else 'live'}"


def oracle_payload(weather: Weather, horizon_scenes: int = 2) -> dict:
    """Tabulate the fixture as the oracle's JSON grammar.

    States are (segment, controller, switch count, route done). A node is
    absorbing once the route is done or the scene horizon is spent; the
    planner values such nodes by their best immediate action, which is what
    the grammar's absorbing convention computes.
    """
    states: list[str] = []
    rewards: dict[str, list[float]] = {}
    transitions: dict[str, list[list[list]]] = {}

    def reward(seg: int, controller: ControllerId, omega: int, action: int) -> float:
        ctrl = controller if action == 0 else controller.other()
        om = omega if action == 0 else omega + 1
        return reverse_reward(_belief(seg, weather, ctrl), om, WEIGHTS)

    def visit(seg: int, controller: ControllerId, omega: int, scenes: int, done: bool) -> str:
        terminal = done or scenes >= horizon_scenes
        key = _state_key(seg, controller, omega, terminal)
        if key in states:
            return key
        states.append(key)
        rewards[key] = [reward(seg, controller, omega, a) for a in (0, 1)]
        if terminal:
            return key
        rows = []
        for action in (0, 1):
            ctrl = controller if action == 0 else controller.other()
            om = omega if action == 0 else omega + 1
            next_done = seg + 1 >= len(MICRO_TRACK_SEGMENTS)
            next_seg = seg if next_done else seg + 1
            child = visit(next_seg, ctrl, om, scenes + 1, next_done)
            rows.append([[child, 1.0]])
        transitions[key] = rows
        return key

    root = visit(0, ControllerId.SAFETY, 1, 0, False)
    return {"root": root, "states": states, "rewards": rewards, "transitions": transitions}


def oracle_instance(weather: Weather, horizon_scenes: int = 2) -> tuple[MicroSmdp, str]:
    payload = oracle_payload(weather, horizon_scenes)
    return micro_smdp_from_dict(payload), payload["root"]
