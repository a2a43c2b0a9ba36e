"""Exact depth-limited expectimax over small tabulated SMDPs.

Used as an independent reference for the sampling planner: agreement between
the planner's chosen action and the expectimax argmax is checked on micro
instances small enough to enumerate.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Hashable, Mapping, Sequence

NODE_BUDGET = 10_000_000
_ROW_SUM_TOL = 1e-9


class BlowUp(RuntimeError):
    """The expectimax recursion exceeded the node budget."""


Transition = tuple[Hashable, float]


@dataclass(frozen=True)
class MicroSmdp:
    """Tabulated finite SMDP with two actions per state.

    rewards[s] is the per-action reward tuple. transitions[s][a] lists
    (next_state, probability) pairs; states absent from transitions are
    absorbing and are valued by their best immediate reward.
    """

    states: tuple[Hashable, ...]
    rewards: Mapping[Hashable, tuple[float, ...]]
    transitions: Mapping[Hashable, Sequence[Sequence[Transition]]] = field(default_factory=dict)

    def __post_init__(self) -> None:
        if not self.states:
            raise ValueError("at least one state is required")
        for s in self.states:
            if s not in self.rewards:
                raise ValueError(f"state {s!r} has no reward row")
        for s, rows in self.transitions.items():
            if s not in self.rewards:
                raise ValueError(f"transition row for unknown state {s!r}")
            if len(rows) != len(self.rewards[s]):
                raise ValueError(f"state {s!r} needs one transition row per action")
            for row in rows:
                total = sum(p for _, p in row)
                if any(p < 0.0 for _, p in row):
                    raise ValueError(f"negative transition probability in state {s!r}")
                if abs(total - 1.0) > _ROW_SUM_TOL:
                    raise ValueError(f"transition row for state {s!r} sums to {total!r}, not 1")

    @property
    def n_actions(self) -> int:
        return len(self.rewards[self.states[0]])


def expectimax(
    smdp: MicroSmdp,
    state: Hashable,
    depth: int,
    gamma: float,
    node_budget: int = NODE_BUDGET,
) -> tuple[float, ...]:
    """Per-action values Q_d(state, a); V uses max over actions, V(., 0) = max_a R.

    Memoized on (state, depth). Raises BlowUp if the recursion would touch more
    than node_budget nodes.
    """
    if depth < 0:
        raise ValueError(f"depth must be >= 0, got {depth}")
    memo: dict[tuple[Hashable, int], float] = {}
    counter = [0]

    def value(s: Hashable, d: int) -> float:
        key = (s, d)
        if key in memo:
            return memo[key]
        memo[key] = v = max(q_values(s, d))
        return v

    def q_values(s: Hashable, d: int) -> tuple[float, ...]:
        counter[0] += 1
        if counter[0] > node_budget:
            raise BlowUp(f"expectimax exceeded {node_budget} nodes")
        rewards = smdp.rewards[s]
        rows = smdp.transitions.get(s)
        if d == 0 or rows is None:
            return tuple(rewards)
        out = []
        for a, r in enumerate(rewards):
            expected = sum(p * value(nxt, d - 1) for nxt, p in rows[a])
            out.append(r + gamma * expected)
        return tuple(out)

    return q_values(state, depth)


def greedy_action(smdp: MicroSmdp, state: Hashable, depth: int, gamma: float) -> int:
    """Argmax over expectimax Q values; ties resolve to the lower action index."""
    q = expectimax(smdp, state, depth, gamma)
    best = max(q)
    for a, v in enumerate(q):
        if v == best:
            return a
    raise AssertionError("unreachable")


def micro_smdp_from_dict(payload: dict) -> MicroSmdp:
    """Build an instance from the JSON fixture grammar.

    {"states": [...], "rewards": {state: [r, ...]},
     "transitions": {state: [[[next, p], ...], ...]}}
    """
    states = tuple(payload["states"])
    rewards = {s: tuple(float(x) for x in row) for s, row in payload["rewards"].items()}
    transitions = {
        s: [[(nxt, float(p)) for nxt, p in row] for row in rows]
        for s, rows in payload.get("transitions", {}).items()
    }
    return MicroSmdp(states=states, rewards=rewards, transitions=transitions)


def load_micro_smdp(path: str) -> MicroSmdp:
    with open(path) as fh:
        return micro_smdp_from_dict(json.load(fh))
