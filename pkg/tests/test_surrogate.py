import math
import random

import pytest

from simplexsim.core import (
    ControllerId,
    MonitorState,
    RoadType,
    SceneFeatures,
    SystemState,
    TrafficLevel,
    Weather,
)
from simplexsim.surrogate import (
    ControllerModel,
    EmptyPartition,
    GroundTruthConfig,
    LutRecord,
    MissingCluster,
    build_lut,
    load_lut,
    query_belief,
    save_lut,
    synth_ground_truth,
)

MAIN = SceneFeatures(RoadType.MAIN_ROAD, curvature=0.0, has_traffic_sign=False, segment_length=100.0)
LABEL = MAIN.structural_label
NO_FAIL = (False, False, False)
CAM_FAIL = (False, True, False)


def record(
    weather=(50.0, 50.0, 50.0),
    density=TrafficLevel.MEDIUM,
    signature=NO_FAIL,
    controller=ControllerId.PERFORMANT,
    speed=10.0,
    collided=False,
    label=LABEL,
):
    return LutRecord(
        structural_label=label,
        weather=Weather(*weather),
        traffic_density=density,
        failure_signature=signature,
        controller=controller,
        observed_speed=speed,
        collided=collided,
    )


def state(
    weather=(50.0, 50.0, 50.0),
    density=TrafficLevel.MEDIUM,
    failures=NO_FAIL,
    controller=ControllerId.PERFORMANT,
):
    return SystemState(
        v=5.0,
        segment_index=0,
        weather=Weather(*weather),
        traffic_density=density,
        controller=controller,
        failures=failures,
        monitor=MonitorState(False, failures),
    )


def flat_model(controller, speed, collision):
    speeds = {road: speed for road in RoadType}
    probs = {road: collision for road in RoadType}
    return ControllerModel(
        controller=controller,
        base_speed=speeds,
        density_speed={level: 1.0 for level in TrafficLevel},
        weather_slowdown=0.0,
        failure_speed_factor=1.0,
        base_collision=probs,
        weather_collision_gain=0.0,
        density_collision_gain={level: 0.0 for level in TrafficLevel},
        failure_collision_gain=0.0,
        speed_noise_sd=0.0,
    )


class TestQueries:
    def test_exact_match_identity_at_k1(self):
        table = build_lut(
            [
                record(speed=12.5, collided=True),
                record(weather=(0.0, 0.0, 0.0), speed=3.0, collided=False),
            ]
        )
        b = query_belief(table, state(), MAIN, ControllerId.PERFORMANT, k=1)
        assert b.raw_speed == 12.5
        assert b.safety_score == 1.0
        assert b.perf_score == 12.5 / 20.0

    def test_mixed_pair_averages(self):
        table = build_lut(
            [
                record(speed=10.0, collided=True),
                record(speed=14.0, collided=False),
            ]
        )
        b = query_belief(table, state(), MAIN, ControllerId.PERFORMANT, k=2)
        assert b.raw_speed == pytest.approx(12.0)
        assert b.safety_score == pytest.approx(0.5)

    def test_k_capped_at_partition_size(self):
        speeds = [4.0, 8.0, 12.0]
        table = build_lut([record(speed=s) for s in speeds])
        b = query_belief(table, state(), MAIN, ControllerId.PERFORMANT, k=50)
        assert b.raw_speed == pytest.approx(sum(speeds) / 3)

    def test_belief_is_convex_combination(self):
        rng = random.Random(11)
        records = [
            record(
                weather=(rng.uniform(0, 100), rng.uniform(0, 100), rng.uniform(0, 100)),
                density=random.Random(rng.random()).choice(list(TrafficLevel)),
                speed=rng.uniform(0, 20),
                collided=rng.random() < 0.3,
            )
            for _ in range(200)
        ]
        table = build_lut(records)
        lo = min(r.observed_speed for r in records)
        hi = max(r.observed_speed for r in records)
        for _ in range(50):
            q = state(weather=(rng.uniform(0, 100), rng.uniform(0, 100), rng.uniform(0, 100)))
            b = query_belief(table, q, MAIN, ControllerId.PERFORMANT, k=5)
            assert lo <= b.raw_speed <= hi
            assert 0.0 <= b.safety_score <= 1.0

    def test_matches_linear_scan_oracle(self):
        rng = random.Random(12)
        records = []
        for _ in range(1000):
            records.append(
                record(
                    weather=(rng.uniform(0, 100), rng.uniform(0, 100), rng.uniform(0, 100)),
                    density=(TrafficLevel.LOW, TrafficLevel.MEDIUM, TrafficLevel.HIGH)[rng.randrange(3)],
                    signature=NO_FAIL if rng.random() < 0.8 else CAM_FAIL,
                    speed=rng.uniform(0, 20),
                    collided=rng.random() < 0.25,
                )
            )
        table = build_lut(records)
        # Partition and per-controller slicing mirror the production layout.
        for _ in range(100):
            failures = NO_FAIL if rng.random() < 0.7 else CAM_FAIL
            q = state(
                weather=(rng.uniform(0, 100), rng.uniform(0, 100), rng.uniform(0, 100)),
                density=(TrafficLevel.LOW, TrafficLevel.MEDIUM, TrafficLevel.HIGH)[rng.randrange(3)],
                failures=failures,
            )
            candidates = [
                (i, r)
                for i, r in enumerate(records)
                if r.controller is ControllerId.PERFORMANT and r.any_failure == any(failures)
            ]

            def key(item):
                i, r = item
                d = math.sqrt(
                    sum(
                        ((a - b) / 100.0) ** 2
                        for a, b in zip(r.weather.channels(), q.weather.channels())
                    )
                )
                if r.traffic_density is not q.traffic_density:
                    d += 1.0
                return (d, r.failure_signature != failures, i)

            top = sorted(candidates, key=key)[:5]
            want_speed = sum(r.observed_speed for _, r in top) / len(top)
            want_coll = sum(1.0 for _, r in top if r.collided) / len(top)
            b = query_belief(table, q, MAIN, ControllerId.PERFORMANT, k=5)
            assert b.raw_speed == pytest.approx(want_speed, rel=1e-12)
            assert b.safety_score == pytest.approx(want_coll, rel=1e-12)

    def test_signature_breaks_distance_ties(self):
        table = build_lut(
            [
                record(signature=CAM_FAIL, speed=2.0, collided=True),
                record(signature=(True, False, False), speed=9.0, collided=False),
            ]
        )
        b = query_belief(table, state(failures=CAM_FAIL), MAIN, ControllerId.PERFORMANT, k=1)
        assert b.raw_speed == 2.0

    def test_missing_cluster(self):
        table = build_lut([record()])
        other = SceneFeatures(RoadType.TUNNEL, 0.0, False, 100.0)
        with pytest.raises(MissingCluster):
            query_belief(table, state(), other, ControllerId.PERFORMANT)

    def test_empty_partition(self):
        table = build_lut([record()])  # no-failure records only
        with pytest.raises(EmptyPartition):
            query_belief(table, state(failures=CAM_FAIL), MAIN, ControllerId.PERFORMANT)
        with pytest.raises(EmptyPartition):
            query_belief(table, state(), MAIN, ControllerId.SAFETY)

    def test_rejects_bad_k(self):
        table = build_lut([record()])
        with pytest.raises(ValueError):
            query_belief(table, state(), MAIN, ControllerId.PERFORMANT, k=0)

    def test_build_rejects_empty_and_bad_vmax(self):
        with pytest.raises(ValueError):
            build_lut([])
        with pytest.raises(ValueError):
            build_lut([record()], v_max=0.0)


class TestRoundTrip:
    def test_csv_round_trip_exact(self, tmp_path):
        # Values representable at the CSV's 6-decimal precision survive exactly.
        records = [
            record(weather=(12.25, 0.5, 99.875), speed=13.5, collided=True),
            record(
                weather=(1.0, 2.0, 3.0),
                density=TrafficLevel.HIGH,
                signature=CAM_FAIL,
                controller=ControllerId.SAFETY,
                speed=4.125,
            ),
        ]
        table = build_lut(records, v_max=18.0)
        path = tmp_path / "lut.csv"
        save_lut(table, str(path))
        loaded = load_lut(str(path), v_max=18.0)
        assert loaded.records == table.records
        assert loaded.v_max == 18.0

    def test_load_rejects_wrong_header(self, tmp_path):
        path = tmp_path / "bad.csv"
        path.write_text("nope,nope\n1,2\n")
        with pytest.raises(ValueError):
            load_lut(str(path))


class TestSynth:
    def test_deterministic_in_seed(self):
        gt = GroundTruthConfig(
            performant=flat_model(ControllerId.PERFORMANT, 12.0, 0.1),
            safety=flat_model(ControllerId.SAFETY, 6.0, 0.01),
            scenes=(MAIN,),
            records_per_scene_controller=200,
        )
        assert synth_ground_truth(gt, 42) == synth_ground_truth(gt, 42)
        assert synth_ground_truth(gt, 42) != synth_ground_truth(gt, 43)

    def test_count_and_label_dedup(self):
        duplicate = SceneFeatures(RoadType.MAIN_ROAD, 0.0, False, 250.0)  # same label as MAIN
        tunnel = SceneFeatures(RoadType.TUNNEL, 0.0, False, 300.0)
        gt = GroundTruthConfig(
            performant=flat_model(ControllerId.PERFORMANT, 12.0, 0.1),
            safety=flat_model(ControllerId.SAFETY, 6.0, 0.01),
            scenes=(MAIN, duplicate, tunnel),
            records_per_scene_controller=50,
        )
        records = synth_ground_truth(gt, 0)
        assert len(records) == 2 * 2 * 50  # labels x controllers x records
        table = build_lut(records)
        assert len(table.records) == len(records)
        assert table.labels() == {MAIN.structural_label, tunnel.structural_label}

    def test_zero_probability_surface_never_collides(self):
        gt = GroundTruthConfig(
            performant=flat_model(ControllerId.PERFORMANT, 12.0, 0.0),
            safety=flat_model(ControllerId.SAFETY, 6.0, 0.0),
            scenes=(MAIN,),
            records_per_scene_controller=2000,
        )
        assert not any(r.collided for r in synth_ground_truth(gt, 1))

    def test_failure_fraction_partitions_records(self):
        gt = GroundTruthConfig(
            performant=flat_model(ControllerId.PERFORMANT, 12.0, 0.1),
            safety=flat_model(ControllerId.SAFETY, 6.0, 0.01),
            scenes=(MAIN,),
            records_per_scene_controller=5000,
            failure_record_fraction=0.35,
        )
        records = synth_ground_truth(gt, 2)
        frac = sum(1 for r in records if r.any_failure) / len(records)
        assert abs(frac - 0.35) < 0.02
        gt_none = GroundTruthConfig(
            performant=gt.performant,
            safety=gt.safety,
            scenes=(MAIN,),
            records_per_scene_controller=100,
            failure_record_fraction=0.0,
        )
        table = build_lut(synth_ground_truth(gt_none, 3))
        with pytest.raises(EmptyPartition):
            query_belief(table, state(failures=CAM_FAIL), MAIN, ControllerId.PERFORMANT)

    def test_empirical_collision_rate_matches_surface(self):
        # Flat surfaces make the analytic rate exact regardless of the drawn
        # weather and density covariates.
        p = 0.2
        gt = GroundTruthConfig(
            performant=flat_model(ControllerId.PERFORMANT, 12.0, p),
            safety=flat_model(ControllerId.SAFETY, 6.0, p),
            scenes=(MAIN,),
            records_per_scene_controller=50_000,
        )
        records = synth_ground_truth(gt, 4)
        rate = sum(1 for r in records if r.collided) / len(records)
        assert abs(rate - p) < 0.01

    def test_validation(self):
        perf = flat_model(ControllerId.PERFORMANT, 12.0, 0.1)
        safe = flat_model(ControllerId.SAFETY, 6.0, 0.01)
        with pytest.raises(ValueError):
            GroundTruthConfig(perf, safe, scenes=(), records_per_scene_controller=10)
        with pytest.raises(ValueError):
            GroundTruthConfig(perf, safe, scenes=(MAIN,), records_per_scene_controller=0)
        with pytest.raises(ValueError):
            GroundTruthConfig(perf, safe, scenes=(MAIN,), records_per_scene_controller=10, failure_record_fraction=1.5)
        with pytest.raises(ValueError):
            record(speed=-1.0)
