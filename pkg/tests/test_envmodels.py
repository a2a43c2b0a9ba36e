import math
import random

import pytest
from scipy import stats

from simplexsim.core import (
    ControllerId,
    MonitorState,
    RoadType,
    SceneFeatures,
    SystemState,
    TrafficLevel,
    Weather,
)
from simplexsim.envmodels import (
    TRAFFIC_LEVELS,
    AlarmCell,
    AlarmParams,
    IntermittentParams,
    MissingCell,
    WeibullParams,
    intermittent_failure_rate,
    sample_alarm,
    sample_permanent_failure,
    step_traffic,
    step_weather,
    validate_traffic_matrix,
    weather_bucket,
    weather_severity,
)

IDENTITY = ((1.0, 0.0, 0.0), (0.0, 1.0, 0.0), (0.0, 0.0, 1.0))
UNIFORM = tuple((1 / 3, 1 / 3, 1 / 3) for _ in range(3))


def scene(road=RoadType.MAIN_ROAD):
    return SceneFeatures(road, curvature=0.0, has_traffic_sign=False, segment_length=100.0)


def state_at(w, density=TrafficLevel.MEDIUM):
    return SystemState(
        v=5.0,
        segment_index=0,
        weather=w,
        traffic_density=density,
        controller=ControllerId.SAFETY,
        failures=(False,),
        monitor=MonitorState(False, (False,)),
    )


class TestWeather:
    def test_zero_delta_is_identity(self):
        rng = random.Random(0)
        w = Weather(12.0, 34.0, 56.0)
        assert step_weather(w, 0.0, rng).channels() == w.channels()

    def test_negative_delta_rejected(self):
        with pytest.raises(ValueError):
            step_weather(Weather(50, 50, 50), -1.0, random.Random(0))

    def test_clamped_at_bounds(self):
        rng = random.Random(1)
        w = Weather(99.0, 1.0, 50.0)
        for _ in range(500):
            w = step_weather(w, 10.0, rng)
            for c in w.channels():
                assert 0.0 <= c <= 100.0

    def test_increments_uniform(self):
        # Steps from the cube center never clamp, so the per-channel increment
        # must be exactly Uniform(-delta, delta).
        rng = random.Random(2)
        delta = 5.0
        start = Weather(50.0, 50.0, 50.0)
        increments = [[], [], []]
        for _ in range(100_000):
            nxt = step_weather(start, delta, rng)
            for i, (a, b) in enumerate(zip(nxt.channels(), start.channels())):
                increments[i].append(a - b)
        for channel in increments:
            _stat, p = stats.kstest(channel, stats.uniform(loc=-delta, scale=2 * delta).cdf)
            assert p > 0.01

    def test_severity_range_and_extremes(self):
        assert weather_severity(Weather(100.0, 0.0, 0.0)) == 0.0
        assert weather_severity(Weather(0.0, 0.0, 0.0)) == 1.0
        assert weather_severity(Weather(100.0, 100.0, 0.0)) == 1.0
        assert weather_bucket(Weather(100.0, 0.0, 0.0)) == "calm"
        assert weather_bucket(Weather(100.0, 50.0, 0.0)) == "moderate"
        assert weather_bucket(Weather(0.0, 0.0, 0.0)) == "severe"


class TestTraffic:
    def test_identity_matrix_keeps_level(self):
        rng = random.Random(3)
        for level in TRAFFIC_LEVELS:
            for _ in range(100):
                assert step_traffic(level, IDENTITY, rng) is level

    def test_deterministic_row(self):
        matrix = ((0.0, 0.0, 1.0), (0.0, 1.0, 0.0), (0.0, 0.0, 1.0))
        rng = random.Random(4)
        for _ in range(100):
            assert step_traffic(TrafficLevel.LOW, matrix, rng) is TrafficLevel.HIGH

    def test_uniform_matrix_frequencies(self):
        rng = random.Random(5)
        counts = {level: 0 for level in TRAFFIC_LEVELS}
        n = 100_000
        for _ in range(n):
            counts[step_traffic(TrafficLevel.MEDIUM, UNIFORM, rng)] += 1
        for level in TRAFFIC_LEVELS:
            assert abs(counts[level] / n - 1 / 3) < 0.01

    def test_rejects_non_stochastic_rows(self):
        with pytest.raises(ValueError):
            validate_traffic_matrix(((0.5, 0.5, 0.1), (0, 1, 0), (0, 0, 1)))
        with pytest.raises(ValueError):
            validate_traffic_matrix(((1.0, 0.0, 0.0), (0, 1, 0)))
        with pytest.raises(ValueError):
            validate_traffic_matrix(((1.5, -0.5, 0.0), (0, 1, 0), (0, 0, 1)))


class TestWeibull:
    @pytest.mark.parametrize("shape,scale", [(1.0, 50.0), (2.0, 100.0)])
    def test_empirical_mean(self, shape, scale):
        params = WeibullParams(shape=shape, scale=scale)
        rng = random.Random(6)
        n = 100_000
        total = 0.0
        for _ in range(n):
            t = sample_permanent_failure(params, math.inf, rng)
            assert t is not None and t >= 0.0
            total += t
        analytic = scale * math.gamma(1.0 + 1.0 / shape)
        assert params.mean == pytest.approx(analytic)
        assert abs(total / n - analytic) / analytic < 0.02

    def test_window_guard(self):
        params = WeibullParams(shape=2.0, scale=100.0)
        rng = random.Random(7)
        assert sample_permanent_failure(params, 0.0, rng) is None
        assert sample_permanent_failure(params, -5.0, rng) is None
        for _ in range(1000):
            t = sample_permanent_failure(params, 10.0, rng)
            assert t is None or t <= 10.0

    def test_rejects_bad_params(self):
        with pytest.raises(ValueError):
            WeibullParams(shape=0.0, scale=1.0)
        with pytest.raises(ValueError):
            WeibullParams(shape=1.0, scale=-1.0)


class TestIntermittentRate:
    def test_zero_growth_gives_base_rate(self):
        params = IntermittentParams(base_rate=0.01, growth=0.0, tunnel_suppression=0.5)
        assert intermittent_failure_rate(Weather(0, 100, 100), scene(), params) == 0.01

    def test_tunnel_suppression(self):
        params = IntermittentParams(base_rate=0.01, growth=1.0, tunnel_suppression=0.0)
        assert intermittent_failure_rate(Weather(50, 50, 50), scene(RoadType.TUNNEL), params) == 0.0
        half = IntermittentParams(base_rate=0.01, growth=0.0, tunnel_suppression=0.5)
        assert intermittent_failure_rate(Weather(100, 0, 0), scene(RoadType.TUNNEL), half) == pytest.approx(0.005)

    def test_severity_ratio_is_exp_growth(self):
        # Cloudiness pinned at 100 so severity is precipitation/100 exactly.
        params = IntermittentParams(base_rate=0.004, growth=2.0, tunnel_suppression=0.15)
        wet = intermittent_failure_rate(Weather(100, 100, 0), scene(), params)
        dry = intermittent_failure_rate(Weather(100, 0, 0), scene(), params)
        assert wet / dry == pytest.approx(math.exp(params.growth))

    def test_monotone_in_precipitation(self):
        params = IntermittentParams(base_rate=0.004, growth=2.0, tunnel_suppression=0.15)
        rates = [
            intermittent_failure_rate(Weather(100, p, 0), scene(), params)
            for p in (0, 25, 50, 75, 100)
        ]
        assert all(a < b for a, b in zip(rates, rates[1:]))

    def test_rejects_bad_params(self):
        with pytest.raises(ValueError):
            IntermittentParams(base_rate=-0.1, growth=1.0, tunnel_suppression=0.5)
        with pytest.raises(ValueError):
            IntermittentParams(base_rate=0.1, growth=1.0, tunnel_suppression=1.5)


class TestAlarms:
    def test_uniform_cell_means(self):
        params = AlarmParams.uniform(mean_interarrival=300.0, mean_duration=10.0)
        rng = random.Random(8)
        st = state_at(Weather(50, 50, 50))
        n = 100_000
        arrivals = durations = 0.0
        for _ in range(n):
            a, d = sample_alarm(params, st, scene(), rng)
            arrivals += a
            durations += d
        assert abs(arrivals / n - 300.0) / 300.0 < 0.02
        assert abs(durations / n - 10.0) / 10.0 < 0.02

    def test_same_seed_is_deterministic(self):
        params = AlarmParams.uniform(100.0, 5.0)
        st = state_at(Weather(20, 80, 10))
        a = [sample_alarm(params, st, scene(), random.Random(9)) for _ in range(10)]
        b = [sample_alarm(params, st, scene(), random.Random(9)) for _ in range(10)]
        assert a == b

    def test_distinct_cells_have_distinct_means(self):
        label = scene().structural_label
        params = AlarmParams(
            cells={
                ("calm", label, TrafficLevel.MEDIUM): AlarmCell(1000.0, 5.0),
                ("severe", label, TrafficLevel.MEDIUM): AlarmCell(10.0, 50.0),
            }
        )
        rng = random.Random(10)
        n = 20_000
        calm_total = sum(
            sample_alarm(params, state_at(Weather(100, 0, 0)), scene(), rng)[0] for _ in range(n)
        )
        severe_total = sum(
            sample_alarm(params, state_at(Weather(0, 100, 0)), scene(), rng)[0] for _ in range(n)
        )
        assert calm_total / n > 900.0
        assert severe_total / n < 12.0

    def test_missing_cell_raises(self):
        params = AlarmParams(cells={})
        with pytest.raises(MissingCell):
            sample_alarm(params, state_at(Weather(50, 50, 50)), scene(), random.Random(0))

    def test_rejects_nonpositive_means(self):
        with pytest.raises(ValueError):
            AlarmCell(0.0, 1.0)
        with pytest.raises(ValueError):
            AlarmCell(1.0, -2.0)
