"""Experiment driver: config files, matrix execution, summaries, sweeps.

The config is a single versioned JSON document; every key has a default, so
`{"schema_version": 1}` is a complete config. Unknown keys are rejected to
catch typos. Per-run seeds are derived from the master seed and the cell
coordinates with SHA-256, so any row of the metrics CSV can be replayed in
isolation and re-running a matrix is byte-identical. The DS_SEED environment
variable overrides the master seed without touching the config file.
"""
from __future__ import annotations

import argparse
import copy
import csv
import dataclasses
import hashlib
import io
import itertools
import json
import math
import os
import random
import statistics
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Sequence

from .core import (
    ControllerId,
    MonitorState,
    RewardWeights,
    SystemState,
    Track,
    TrafficLevel,
    Weather,
)
from .envmodels import AlarmParams, IntermittentParams, WeibullParams, validate_traffic_matrix
from .planner import MctsConfig, PlanningModels, mcts_plan
from .sim import (
    DEFAULT_INITIAL_DENSITY,
    ConfigError,
    EpisodeMetrics,
    FailureSchedule,
    SimConfig,
    Strategy,
    default_controller_models,
    default_tracks,
    run_episode,
    strategy_from_id,
)
from .surrogate import GroundTruthConfig, build_lut, synth_ground_truth
from .switcher import LatencyModel, SwitchConfig

SCHEMA_VERSION = 1
SEED_ENV_VAR = "DS_SEED"

METRICS_COLUMNS = (
    "strategy",
    "track",
    "seed",
    "travel_time",
    "rc",
    "col_v",
    "col_o",
    "switches",
    "infraction",
    "mean_decision_latency_ms",
)
SUMMARY_COLUMNS = (
    "strategy",
    "track",
    "runs",
    "median_travel_time",
    "iqr_travel_time",
    "completion_failures",
    "median_infraction",
    "mean_switches",
)
SWEEP_COLUMNS = (
    "alpha1",
    "alpha2",
    "alpha3",
    "performance_score",
    "infraction_score",
    "switch_number",
)
TIMING_ITERATIONS = (100, 500, 1000, 2000)
_SWEEPABLE = ("alpha1", "alpha2", "alpha3")


class SchemaError(ValueError):
    """The config document or a CSV input does not match the expected schema."""


DEFAULT_CONFIG: dict = {
    "schema_version": SCHEMA_VERSION,
    "master_seed": 20260401,
    "out_dir": "out",
    "runs_per_cell": 30,
    "strategies": [s.value for s in Strategy],
    "tracks": ["downtown", "suburb", "freeway", "tunnel_city"],
    "schedules": ["none"],
    "weights": {"alpha1": 1.0, "alpha2": 1.0, "alpha3": 0.5, "m_s": 6},
    "mcts": {
        "iterations": 500,
        "c_uct": math.sqrt(2.0),
        "gamma": 0.9,
        "tau_q": 20.0,
        "horizon_scenes": 3,
    },
    "knn_k": 25,
    "v_max": 20.0,
    "switching": {"tau_s": 5.6, "warmup_duration": 2.0},
    "latency": {
        "selector_seconds": 0.02,
        "plan_base_seconds": 0.25,
        "plan_seconds_per_iteration": 0.0014,
    },
    "weather_delta": 8.0,
    "traffic_matrix": [
        [0.92, 0.06, 0.02],
        [0.05, 0.90, 0.05],
        [0.02, 0.08, 0.90],
    ],
    "weibull": {"shape": 2.0, "scale": 250.0},
    "intermittent": {
        "base_rate": 0.004,
        "growth": 2.0,
        "tunnel_suppression": 0.15,
        "mean_duration": 18.0,
    },
    "alarm": {"mean_interarrival": 300.0, "mean_duration": 15.0},
    "lut": {"records_per_scene_controller": 240, "failure_record_fraction": 0.35, "seed": 7},
    "sim": {
        "tick": 0.1,
        "a_max": 2.5,
        "vehicle_collision_ratio": 0.5,
        "max_episode_seconds": 1800.0,
    },
    "sweep": {"strategy": "DS"},
}


def default_config() -> dict:
    return copy.deepcopy(DEFAULT_CONFIG)


def _merge(base: dict, override: dict, path: str = "") -> dict:
    merged = dict(base)
    for key, value in override.items():
        if key not in base:
            raise SchemaError(f"unknown config key {path + key!r}")
        if isinstance(base[key], dict):
            if not isinstance(value, dict):
                raise SchemaError(f"config key {path + key!r} must be an object")
            merged[key] = _merge(base[key], value, path + key + ".")
        else:
            merged[key] = value
    return merged


def load_config(path: str | Path) -> dict:
    try:
        raw = json.loads(Path(path).read_text())
    except OSError as exc:
        raise SchemaError(f"cannot read config {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise SchemaError(f"config {path} is not valid JSON: {exc}") from exc
    if not isinstance(raw, dict):
        raise SchemaError("config root must be a JSON object")
    if raw.get("schema_version") != SCHEMA_VERSION:
        raise SchemaError(
            f"unsupported schema_version {raw.get('schema_version')!r}, expected {SCHEMA_VERSION}"
        )
    cfg = _merge(DEFAULT_CONFIG, raw)
    _validate(cfg)
    return cfg


def _validate(cfg: dict) -> None:
    if not isinstance(cfg["runs_per_cell"], int) or cfg["runs_per_cell"] < 1:
        raise SchemaError(f"runs_per_cell must be an integer >= 1, got {cfg['runs_per_cell']!r}")
    if not cfg["strategies"]:
        raise SchemaError("strategies must not be empty")
    if not cfg["tracks"]:
        raise SchemaError("tracks must not be empty")
    if not cfg["schedules"]:
        raise SchemaError("schedules must not be empty")
    try:
        for sid in cfg["strategies"]:
            strategy_from_id(sid)
        for sched in cfg["schedules"]:
            FailureSchedule(sched)
        validate_traffic_matrix(tuple(tuple(row) for row in cfg["traffic_matrix"]))
    except (ConfigError, ValueError) as exc:
        raise SchemaError(str(exc)) from exc
    known = {t.track_id for t in default_tracks()}
    for tid in cfg["tracks"]:
        if tid not in known:
            raise SchemaError(f"unknown track id {tid!r}; known tracks: {sorted(known)}")
    if cfg["sweep"]["strategy"] not in cfg["strategies"] and cfg["sweep"]["strategy"] not in [
        s.value for s in Strategy
    ]:
        raise SchemaError(f"unknown sweep strategy {cfg['sweep']['strategy']!r}")


@dataclass(frozen=True)
class Materialized:
    tracks: tuple[Track, ...]
    strategies: tuple[Strategy, ...]
    schedules: tuple[FailureSchedule, ...]
    sim_by_schedule: dict
    v_max: float


def materialize(cfg: dict) -> Materialized:
    """Build the runnable objects for a validated config. Raises SchemaError
    when a value is out of range for the underlying dataclasses."""
    catalog = {t.track_id: t for t in default_tracks()}
    tracks = tuple(catalog[tid] for tid in cfg["tracks"])
    strategies = tuple(strategy_from_id(sid) for sid in cfg["strategies"])
    schedules = tuple(FailureSchedule(s) for s in cfg["schedules"])
    performant, safety = default_controller_models()
    scenes = tuple(seg for track in tracks for seg in track.segments)
    try:
        gt = GroundTruthConfig(
            performant=performant,
            safety=safety,
            scenes=scenes,
            records_per_scene_controller=cfg["lut"]["records_per_scene_controller"],
            failure_record_fraction=cfg["lut"]["failure_record_fraction"],
        )
        lut = build_lut(synth_ground_truth(gt, cfg["lut"]["seed"]), v_max=cfg["v_max"])
        base = SimConfig(
            gt=gt,
            lut=lut,
            weights=RewardWeights(**cfg["weights"]),
            switch_cfg=SwitchConfig(
                tau_s=cfg["switching"]["tau_s"],
                warmup_duration=cfg["switching"]["warmup_duration"],
            ),
            mcts_cfg=MctsConfig(**cfg["mcts"]),
            latency=LatencyModel(**cfg["latency"]),
            alarms=AlarmParams.uniform(
                cfg["alarm"]["mean_interarrival"], cfg["alarm"]["mean_duration"]
            ),
            weibull=WeibullParams(**cfg["weibull"]),
            intermittent=IntermittentParams(
                base_rate=cfg["intermittent"]["base_rate"],
                growth=cfg["intermittent"]["growth"],
                tunnel_suppression=cfg["intermittent"]["tunnel_suppression"],
            ),
            intermittent_mean_duration=cfg["intermittent"]["mean_duration"],
            schedule=schedules[0],
            weather_delta=cfg["weather_delta"],
            traffic_matrix=tuple(tuple(row) for row in cfg["traffic_matrix"]),
            knn_k=cfg["knn_k"],
            tick=cfg["sim"]["tick"],
            a_max=cfg["sim"]["a_max"],
            vehicle_collision_ratio=cfg["sim"]["vehicle_collision_ratio"],
            max_episode_seconds=cfg["sim"]["max_episode_seconds"],
            initial_density=DEFAULT_INITIAL_DENSITY,
        )
    except (TypeError, ValueError) as exc:
        raise SchemaError(f"invalid config value: {exc}") from exc
    sim_by_schedule = {s: dataclasses.replace(base, schedule=s) for s in schedules}
    return Materialized(tracks, strategies, schedules, sim_by_schedule, cfg["v_max"])


def derive_seed(
    master_seed: int,
    strategy: Strategy,
    track_id: str,
    schedule: FailureSchedule,
    run_index: int,
) -> int:
    """Stable 63-bit per-run seed; alpha weights deliberately excluded so
    sensitivity sweeps compare the same episodes under different rewards."""
    key = f"{master_seed}|{strategy.value}|{track_id}|{schedule.value}|{run_index}"
    digest = hashlib.sha256(key.encode("ascii")).digest()
    return int.from_bytes(digest[:8], "big") >> 1


def _master_seed(cfg: dict) -> int:
    env = os.environ.get(SEED_ENV_VAR)
    if env is None:
        return int(cfg["master_seed"])
    try:
        return int(env)
    except ValueError as exc:
        raise SchemaError(f"{SEED_ENV_VAR} must be an integer, got {env!r}") from exc


# ---------------------------------------------------------------------------
# Matrix execution
# ---------------------------------------------------------------------------

_Task = tuple[FailureSchedule, Strategy, Track, int, int]  # schedule, strategy, track, run, seed


def _tasks(cfg: dict, mat: Materialized, master: int) -> list[_Task]:
    out: list[_Task] = []
    for schedule in mat.schedules:
        for strategy in mat.strategies:
            for track in mat.tracks:
                for run in range(cfg["runs_per_cell"]):
                    seed = derive_seed(master, strategy, track.track_id, schedule, run)
                    out.append((schedule, strategy, track, run, seed))
    return out


_POOL_CACHE: dict[str, Materialized] = {}


def _pool_worker(payload: tuple[str, str, str, str, int]) -> EpisodeMetrics:
    cfg_json, schedule_value, strategy_value, track_id, seed = payload
    mat = _POOL_CACHE.get(cfg_json)
    if mat is None:
        mat = materialize(json.loads(cfg_json))
        _POOL_CACHE[cfg_json] = mat
    schedule = FailureSchedule(schedule_value)
    strategy = Strategy(strategy_value)
    track = next(t for t in mat.tracks if t.track_id == track_id)
    return run_episode(track, strategy, mat.sim_by_schedule[schedule], seed)


def _execute(cfg: dict, mat: Materialized, tasks: list[_Task], jobs: int) -> list[EpisodeMetrics]:
    if jobs <= 1:
        return [
            run_episode(track, strategy, mat.sim_by_schedule[schedule], seed)
            for schedule, strategy, track, _run, seed in tasks
        ]
    cfg_json = json.dumps(cfg, sort_keys=True)
    payloads = [
        (cfg_json, schedule.value, strategy.value, track.track_id, seed)
        for schedule, strategy, track, _run, seed in tasks
    ]
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        return list(pool.map(_pool_worker, payloads, chunksize=1))


def _metrics_row(m: EpisodeMetrics) -> list[str]:
    return [
        m.strategy.value,
        m.track_id,
        str(m.seed),
        f"{m.travel_time:.3f}",
        f"{m.route_completion:.6f}",
        "1" if m.vehicle_collision else "0",
        "1" if m.object_collision else "0",
        str(m.switch_count),
        f"{m.infraction:.6f}",
        f"{m.mean_decision_latency_ms:.3f}",
    ]


def _write_csv(path: Path, header: Sequence[str], rows: Iterable[Sequence[str]]) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(header)
        writer.writerows(rows)


def _median(values: Sequence[float]) -> float:
    return statistics.median(values)


def _iqr(values: Sequence[float]) -> float:
    if len(values) < 2:
        return 0.0
    q1, _q2, q3 = statistics.quantiles(values, n=4, method="inclusive")
    return q3 - q1


def _cell_summary(rows: list[EpisodeMetrics]) -> list[str]:
    travel = [m.travel_time for m in rows]
    return [
        str(len(rows)),
        f"{_median(travel):.3f}",
        f"{_iqr(travel):.3f}",
        str(sum(1 for m in rows if m.route_completion < 1.0)),
        f"{_median([m.infraction for m in rows]):.6f}",
        f"{sum(m.switch_count for m in rows) / len(rows):.3f}",
    ]


def measure_planner_latency(
    mat: Materialized,
    iterations_list: Sequence[int] = TIMING_ITERATIONS,
    repeats: int = 3,
    seed: int = 0,
) -> list[tuple[int, float, int]]:
    """Wall-clock plan time per iteration budget, measured on a fixed probe state.

    This is real compute time; the simulated in-episode latency model is
    calibrated separately and never measured here.
    """
    sim_cfg: SimConfig = next(iter(mat.sim_by_schedule.values()))
    track = mat.tracks[0]
    models = PlanningModels(
        track=track,
        lut=sim_cfg.lut,
        weights=sim_cfg.weights,
        weather_delta=sim_cfg.weather_delta,
        traffic_matrix=sim_cfg.traffic_matrix,
        weibull=sim_cfg.weibull,
        alarms=sim_cfg.alarms,
        knn_k=sim_cfg.knn_k,
    )
    blank = (False,) * sim_cfg.gt.n_components
    state = SystemState(
        v=3.0,
        segment_index=0,
        weather=Weather(50.0, 50.0, 50.0),
        traffic_density=TrafficLevel.MEDIUM,
        controller=ControllerId.SAFETY,
        failures=blank,
        monitor=MonitorState(False, blank),
        switch_count=1,
        clock=0.0,
    )
    rows = []
    for iterations in iterations_list:
        cfg_i = dataclasses.replace(sim_cfg.mcts_cfg, iterations=iterations)
        elapsed = []
        for rep in range(repeats):
            rng = random.Random(seed * 7919 + rep)
            t0 = time.perf_counter()
            mcts_plan(state, models, cfg_i, rng)
            elapsed.append(time.perf_counter() - t0)
        rows.append((iterations, sum(elapsed) / len(elapsed), repeats))
    return rows


def _write_outputs(
    cfg: dict, mat: Materialized, tasks: list[_Task], results: list[EpisodeMetrics]
) -> Path:
    out = Path(cfg["out_dir"])
    out.mkdir(parents=True, exist_ok=True)

    by_schedule: dict[FailureSchedule, list[EpisodeMetrics]] = {s: [] for s in mat.schedules}
    for (schedule, *_rest), metrics in zip(tasks, results):
        by_schedule[schedule].append(metrics)

    for schedule, rows in by_schedule.items():
        name = "metrics.csv" if len(mat.schedules) == 1 else f"metrics_{schedule.value}.csv"
        _write_csv(out / name, METRICS_COLUMNS, (_metrics_row(m) for m in rows))

    log_dir = out / "logs"
    for (schedule, strategy, track, _run, seed), metrics in zip(tasks, results):
        sub = log_dir / schedule.value
        sub.mkdir(parents=True, exist_ok=True)
        log_path = sub / f"{strategy.value}_{track.track_id}_{seed}.jsonl"
        with open(log_path, "w") as fh:
            for event in metrics.events:
                fh.write(json.dumps(event, sort_keys=True) + "\n")

    summary_rows = []
    for schedule in mat.schedules:
        cells: dict[tuple[str, str], list[EpisodeMetrics]] = {}
        for metrics in by_schedule[schedule]:
            cells.setdefault((metrics.strategy.value, metrics.track_id), []).append(metrics)
        for (strategy_id, track_id), rows in cells.items():
            summary_rows.append([schedule.value, strategy_id, track_id] + _cell_summary(rows))
    _write_csv(out / "summary.csv", ("schedule",) + SUMMARY_COLUMNS, summary_rows)

    timing = measure_planner_latency(mat)
    _write_csv(
        out / "timing.csv",
        ("iterations", "mean_plan_seconds", "samples"),
        ([str(n), f"{mean_s:.6f}", str(k)] for n, mean_s, k in timing),
    )
    return out


def run_matrix(config_path: str | Path, jobs: int = 1, out_dir: str | Path | None = None) -> int:
    try:
        cfg = load_config(config_path)
        if out_dir is not None:
            cfg["out_dir"] = str(out_dir)
        master = _master_seed(cfg)
        mat = materialize(cfg)
    except SchemaError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    try:
        tasks = _tasks(cfg, mat, master)
        results = _execute(cfg, mat, tasks, jobs)
        out = _write_outputs(cfg, mat, tasks, results)
    except Exception as exc:
        print(f"runtime failure: {exc}", file=sys.stderr)
        return 1
    print(f"wrote {len(results)} episodes to {out}")
    return 0


# ---------------------------------------------------------------------------
# Summaries
# ---------------------------------------------------------------------------


def summarize_metrics(path: str | Path) -> str:
    try:
        with open(path, newline="") as fh:
            reader = csv.reader(fh)
            try:
                header = next(reader)
            except StopIteration:
                raise SchemaError(f"{path}: empty file") from None
            if tuple(header) != METRICS_COLUMNS:
                raise SchemaError(
                    f"{path}: bad header {header!r}, expected {list(METRICS_COLUMNS)}"
                )
            data = list(reader)
    except OSError as exc:
        raise SchemaError(f"cannot read {path}: {exc}") from exc
    if not data:
        raise SchemaError(f"{path}: no data rows")

    cells: dict[tuple[str, str], list[dict]] = {}
    for lineno, row in enumerate(data, start=2):
        if len(row) != len(METRICS_COLUMNS):
            raise SchemaError(f"{path}:{lineno}: expected {len(METRICS_COLUMNS)} fields")
        try:
            rec = {
                "travel_time": float(row[3]),
                "rc": float(row[4]),
                "switches": int(row[7]),
                "infraction": float(row[8]),
            }
        except ValueError as exc:
            raise SchemaError(f"{path}:{lineno}: {exc}") from exc
        cells.setdefault((row[0], row[1]), []).append(rec)

    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(SUMMARY_COLUMNS)
    for (strategy_id, track_id), rows in cells.items():
        travel = [r["travel_time"] for r in rows]
        writer.writerow(
            [
                strategy_id,
                track_id,
                str(len(rows)),
                f"{_median(travel):.3f}",
                f"{_iqr(travel):.3f}",
                str(sum(1 for r in rows if r["rc"] < 1.0)),
                f"{_median([r['infraction'] for r in rows]):.6f}",
                f"{sum(r['switches'] for r in rows) / len(rows):.3f}",
            ]
        )
    return buf.getvalue()


def summarize(metrics_path: str | Path) -> int:
    try:
        report = summarize_metrics(metrics_path)
    except SchemaError as exc:
        print(f"schema error: {exc}", file=sys.stderr)
        return 2
    except Exception as exc:
        print(f"runtime failure: {exc}", file=sys.stderr)
        return 1
    sys.stdout.write(report)
    return 0


# ---------------------------------------------------------------------------
# Sensitivity sweeps
# ---------------------------------------------------------------------------


def run_sweep(
    cfg: dict, mat: Materialized, master: int, params: dict[str, list[float]]
) -> list[list[str]]:
    """One row per weight combination, averaged over tracks x runs with seeds
    that do not depend on the weights (paired comparison across combos)."""
    strategy = strategy_from_id(cfg["sweep"]["strategy"])
    schedule = mat.schedules[0]
    base_sim: SimConfig = mat.sim_by_schedule[schedule]
    runs = cfg["runs_per_cell"]

    rows: list[list[str]] = []
    for combo in itertools.product(*params.values()):
        weights = dataclasses.replace(base_sim.weights, **dict(zip(params.keys(), combo)))
        sim_cfg = dataclasses.replace(base_sim, weights=weights)
        speeds: list[float] = []
        infractions: list[float] = []
        switches: list[float] = []
        for track in mat.tracks:
            for run in range(runs):
                seed = derive_seed(master, strategy, track.track_id, schedule, run)
                m = run_episode(track, strategy, sim_cfg, seed)
                distance = m.route_completion * track.total_length
                speeds.append(distance / max(m.travel_time, sim_cfg.tick) / mat.v_max)
                infractions.append(m.infraction)
                switches.append(float(m.switch_count))
        n = len(speeds)
        rows.append(
            [
                f"{weights.alpha1:g}",
                f"{weights.alpha2:g}",
                f"{weights.alpha3:g}",
                f"{sum(speeds) / n:.6f}",
                f"{sum(infractions) / n:.6f}",
                f"{sum(switches) / n:.6f}",
            ]
        )
    return rows


def sweep(
    config_path: str | Path,
    param_names: Sequence[str],
    value_lists: Sequence[Sequence[float]],
    out_dir: str | Path | None = None,
) -> int:
    try:
        cfg = load_config(config_path)
        if out_dir is not None:
            cfg["out_dir"] = str(out_dir)
        if not param_names:
            raise SchemaError("at least one --param is required")
        if len(param_names) != len(value_lists):
            raise SchemaError("each --param needs a matching --values list")
        for name in param_names:
            if name not in _SWEEPABLE:
                raise SchemaError(f"cannot sweep {name!r}; sweepable: {list(_SWEEPABLE)}")
        if len(set(param_names)) != len(param_names):
            raise SchemaError("duplicate --param")
        for values in value_lists:
            if not values:
                raise SchemaError("--values must not be empty")
        master = _master_seed(cfg)
        mat = materialize(cfg)
    except SchemaError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    try:
        rows = run_sweep(cfg, mat, master, dict(zip(param_names, value_lists)))
        out = Path(cfg["out_dir"])
        out.mkdir(parents=True, exist_ok=True)
        _write_csv(out / "sweep.csv", SWEEP_COLUMNS, rows)
    except Exception as exc:
        print(f"runtime failure: {exc}", file=sys.stderr)
        return 1
    print(f"wrote {len(rows)} sweep rows to {out / 'sweep.csv'}")
    return 0


# ---------------------------------------------------------------------------
# Entry point
# ---------------------------------------------------------------------------


def _parse_values(text: str) -> list[float]:
    try:
        return [float(tok) for tok in text.split(",") if tok.strip()]
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"bad --values list {text!r}: {exc}") from exc


def main(argv: Sequence[str] | None = None) -> int:
    parser = argparse.ArgumentParser(
        prog="simplexsim",
        description="Dynamic simplex switching experiments on synthetic tracks.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_run = sub.add_parser("run", help="execute the experiment matrix from a config file")
    p_run.add_argument("config")
    p_run.add_argument("--jobs", type=int, default=1, help="worker processes (default 1)")
    p_run.add_argument("--out", default=None, help="output directory (overrides config)")

    p_sum = sub.add_parser("summarize", help="per-cell summary of a metrics CSV")
    p_sum.add_argument("metrics")

    p_sweep = sub.add_parser("sweep", help="reward-weight sensitivity sweep")
    p_sweep.add_argument("config")
    p_sweep.add_argument("--param", action="append", default=[], help="weight name, repeatable")
    p_sweep.add_argument(
        "--values", action="append", type=_parse_values, default=[], help="comma-separated floats"
    )
    p_sweep.add_argument("--out", default=None, help="output directory (overrides config)")

    args = parser.parse_args(argv)
    if args.command == "run":
        return run_matrix(args.config, jobs=args.jobs, out_dir=args.out)
    if args.command == "summarize":
        return summarize(args.metrics)
    return sweep(args.config, args.param, args.values, out_dir=args.out)


if __name__ == "__main__":
    sys.exit(main())
