"""Tests for claim sampling, coupled trials, ruin curves and slopes."""

import io
import json
import math

import numpy as np
import pytest

from minreflect import (
    Region,
    ScenarioConfig,
    curves_to_csv,
    initial_intensity,
    ruin_curves,
    run_trial,
    sample_driving,
    solve_reflected,
    solve_unreflected,
    trial_rng,
    wilson_half_width,
)
from minreflect.reinsurance import CSV_HEADER, CURVE_NAMES

PAPER_KWARGS = dict(
    x0=(5.0, 5.0),
    c=(1.2, 1.2),
    lam=(0.6, 0.6, 0.6),
    claim_rate=(1.0, 1.0),
    alpha=0.05,
    horizon=500.0,
    n_trials=20000,
    seed=20250809,
)


def config(**overrides):
    kwargs = dict(PAPER_KWARGS)
    kwargs.update(overrides)
    return ScenarioConfig(**kwargs)


class TestScenarioConfig:
    def test_round_trip_is_identity(self):
        cfg = config()
        assert ScenarioConfig.from_dict(cfg.to_dict()) == cfg
        assert ScenarioConfig.from_dict(json.loads(json.dumps(cfg.to_dict()))) == cfg

    @pytest.mark.parametrize(
        "field,value,fragment",
        [
            ("x0", (0.0, 5.0), "x0"),
            ("c", (-0.1, 1.2), "c"),
            ("lam", (0.6, 0.6), "3 entries"),
            ("lam", (-0.1, 0.6, 0.6), "lambda"),
            ("claim_rate", (0.0, 1.0), "claim_rate"),
            ("alpha", -0.5, "alpha"),
            ("horizon", -1.0, "horizon"),
            ("n_trials", 0, "n_trials"),
            ("seed", -1, "seed"),
            ("grid_points", 1, "grid_points"),
        ],
    )
    def test_field_level_validation(self, field, value, fragment):
        with pytest.raises(ValueError, match=fragment):
            config(**{field: value})

    def test_unknown_and_missing_fields_reported(self):
        data = config().to_dict()
        data["typo"] = 1
        with pytest.raises(ValueError, match="typo"):
            ScenarioConfig.from_dict(data)
        del data["typo"]
        del data["seed"]
        with pytest.raises(ValueError, match="seed"):
            ScenarioConfig.from_dict(data)

    def test_routing_matrix_uses_friction(self):
        rm = config(alpha=0.5).reflection_matrix()
        assert rm.q[0, 1] == 1.5 and rm.q[1, 0] == 1.5

    def test_all_zero_intensities_allowed(self):
        # degenerate but valid: an event-free model
        cfg = config(lam=(0.0, 0.0, 0.0))
        assert sum(cfg.lam) == 0.0


class TestTrialStreams:
    def test_streams_are_reproducible_and_distinct(self):
        a = trial_rng(123, 7).random(4)
        b = trial_rng(123, 7).random(4)
        c = trial_rng(123, 8).random(4)
        d = trial_rng(124, 7).random(4)
        assert np.array_equal(a, b)
        assert not np.array_equal(a, c)
        assert not np.array_equal(a, d)


class TestSampleDriving:
    def test_common_shock_only_hits_both_firms(self):
        cfg = config(lam=(0.0, 0.0, 0.6), horizon=100.0)
        path = sample_driving(trial_rng(cfg.seed, 0), cfg)
        assert path.times.shape[0] > 20
        assert np.all(path.jumps > 0.0)

    def test_firm_one_only_never_hits_firm_two(self):
        cfg = config(lam=(0.6, 0.0, 0.0), horizon=100.0)
        path = sample_driving(trial_rng(cfg.seed, 0), cfg)
        assert np.all(path.jumps[:, 1] == 0.0)
        assert np.all(path.jumps[:, 0] > 0.0)

    def test_event_count_matches_poisson_mean(self):
        cfg = config(horizon=500.0)
        counts = [
            sample_driving(trial_rng(cfg.seed, k), cfg).times.shape[0] for k in range(1000)
        ]
        mean = np.mean(counts)
        se = np.sqrt(1.8 * 500.0) / np.sqrt(1000)  # Poisson variance = mean
        assert abs(mean - 900.0) <= 3 * se

    def test_claim_sizes_have_unit_mean(self):
        cfg = config(horizon=500.0)
        claims = []
        for k in range(50):
            jumps = sample_driving(trial_rng(cfg.seed, k), cfg).jumps
            claims.append(jumps[jumps > 0])
        claims = np.concatenate(claims)
        se = claims.std() / np.sqrt(claims.size)
        assert abs(claims.mean() - 1.0) <= 3 * se

    def test_events_truncated_at_horizon_and_sorted(self):
        cfg = config(horizon=37.5)
        for k in range(20):
            path = sample_driving(trial_rng(cfg.seed, k), cfg)
            assert path.horizon == 37.5
            if path.times.size:
                assert path.times[-1] <= 37.5
                assert np.all(np.diff(path.times) > 0)

    def test_zero_horizon_or_intensity_gives_no_events(self):
        assert sample_driving(trial_rng(0, 0), config(horizon=0.0)).times.size == 0
        assert sample_driving(trial_rng(0, 0), config(lam=(0, 0, 0))).times.size == 0


class TestRunTrial:
    def test_no_events_means_no_outcomes(self):
        cfg = config(lam=(0.0, 0.0, 0.0), horizon=10.0)
        outcome = run_trial(trial_rng(cfg.seed, 0), cfg)
        assert outcome.t1 is None and outcome.t2 is None and outcome.tau_star is None

    def test_outcomes_match_path_solvers(self):
        cfg = config(horizon=100.0, alpha=0.5)
        for k in range(10):
            outcome = run_trial(trial_rng(cfg.seed, k), cfg)
            path = sample_driving(trial_rng(cfg.seed, k), cfg)
            un = solve_unreflected(path)
            ref = solve_reflected(cfg.reflection_matrix(), path, keep_records=False)
            assert outcome.t1 == un.ruin_times[0]
            assert outcome.t2 == un.ruin_times[1]
            assert outcome.tau_star == ref.tau_star

    def test_outcome_times_live_in_horizon(self):
        cfg = config(horizon=50.0)
        for k in range(50):
            outcome = run_trial(trial_rng(cfg.seed, k), cfg)
            for value in (outcome.t1, outcome.t2, outcome.tau_star):
                if value is not None:
                    assert 0.0 < value <= 50.0

    def test_frictionless_breakdown_bounded_by_summed_process(self):
        # With alpha = 0 the reflected pair conserves x1 + x2, so tau* is
        # sandwiched between the first time the summed free process is <= 0
        # and the first time it goes strictly negative.
        cfg = config(alpha=0.0, horizon=200.0, x0=(2.0, 2.0))
        checked_crossings = 0
        for k in range(10_000):
            path = sample_driving(trial_rng(cfg.seed, k), cfg)
            ref = solve_reflected(cfg.reflection_matrix(), path, keep_records=False)
            s = (
                path.x0.sum()
                + path.c.sum() * path.times
                - np.cumsum(path.jumps.sum(axis=1))
            )
            le = np.flatnonzero(s <= 0.0)
            lt = np.flatnonzero(s < 0.0)
            t_le = path.times[le[0]] if le.size else None
            t_lt = path.times[lt[0]] if lt.size else None
            if t_lt is not None:
                checked_crossings += 1
                assert ref.tau_star is not None
                assert ref.tau_star <= t_lt + 1e-12
            if ref.tau_star is not None:
                assert t_le is not None
                assert ref.tau_star >= t_le - 1e-12
        assert checked_crossings > 5000


class TestRuinCurves:
    def test_single_trial_step_function(self):
        seed = next(
            s
            for s in range(50)
            if run_trial(trial_rng(s, 0), config(seed=s, horizon=200.0)).t1 is not None
        )
        cfg = config(seed=seed, horizon=200.0, n_trials=1, grid_points=101)
        t1 = run_trial(trial_rng(seed, 0), cfg).t1
        curves = ruin_curves(cfg, n_jobs=1)
        expected = (curves.grid >= t1).astype(float)
        assert np.array_equal(curves.probs["t1"], expected)

    def test_curve_shape_and_empirical_orderings(self):
        cfg = config(n_trials=2000, horizon=300.0, grid_points=61)
        curves = ruin_curves(cfg, n_jobs=2)
        for name in CURVE_NAMES:
            p = curves.probs[name]
            assert np.all(p >= 0.0) and np.all(p <= 1.0)
            assert np.all(np.diff(p) >= 0.0)
            assert p[0] == 0.0
        p = curves.probs
        # same-trials estimates make these inequalities exact, not statistical
        assert np.all(p["both"] <= np.minimum(p["t1"], p["t2"]))
        assert np.all(np.maximum(p["t1"], p["t2"]) <= p["either"])

    def test_symmetric_firms_agree_within_joint_bands(self):
        cfg = config(n_trials=5000, horizon=500.0, grid_points=101)
        curves = ruin_curves(cfg, n_jobs=2)
        gap = np.abs(curves.probs["t1"] - curves.probs["t2"])
        joint = curves.half_widths["t1"] + curves.half_widths["t2"]
        assert np.all(gap <= joint)

    def test_parallelism_does_not_change_results(self):
        cfg = config(n_trials=300, horizon=100.0, grid_points=21)
        serial = ruin_curves(cfg, n_jobs=1)
        parallel = ruin_curves(cfg, n_jobs=2)
        overcommitted = ruin_curves(cfg, n_jobs=16)
        for name in CURVE_NAMES:
            assert np.array_equal(serial.probs[name], parallel.probs[name])
            assert np.array_equal(serial.probs[name], overcommitted.probs[name])

    def test_csv_schema(self):
        cfg = config(n_trials=50, horizon=100.0, grid_points=5)
        curves = ruin_curves(cfg, n_jobs=1)
        buf = io.StringIO()
        curves_to_csv(curves, buf)
        lines = buf.getvalue().strip().splitlines()
        assert lines[0] == CSV_HEADER
        assert len(lines) == 6
        first = lines[1].split(",")
        assert len(first) == 11
        assert first[0] == "0"


class TestWilsonHalfWidth:
    def test_against_reference_implementation(self):
        from statsmodels.stats.proportion import proportion_confint

        for count, n in [(0, 50), (1, 50), (25, 50), (49, 50), (50, 50), (333, 20000)]:
            lo, hi = proportion_confint(count, n, alpha=0.05, method="wilson")
            assert wilson_half_width(count, n) == pytest.approx((hi - lo) / 2, abs=1e-12)

    def test_vectorized(self):
        out = wilson_half_width(np.array([0, 10, 20]), 20)
        assert out.shape == (3,)
        assert np.all(out > 0.0)


class TestInitialIntensity:
    def test_single_firm_closed_form(self):
        # claims on firm 1 arrive at rate lam1 + lam3 and ruin it
        # immediately iff the claim exceeds the initial capital
        cfg = config()
        expected = (0.6 + 0.6) * math.exp(-5.0)
        assert initial_intensity(Region.H1, cfg) == pytest.approx(expected, rel=1e-14)
        assert initial_intensity(Region.H2, cfg) == pytest.approx(expected, rel=1e-14)

    def test_simultaneous_ruin_needs_common_shock(self):
        cfg = config()
        expected = 0.6 * math.exp(-5.0) * math.exp(-5.0)
        assert initial_intensity(Region.INTERSECTION, cfg) == pytest.approx(
            expected, rel=1e-14
        )

    def test_either_firm_inclusion_exclusion(self):
        cfg = config()
        t1 = t2 = math.exp(-5.0)
        expected = 0.6 * t1 + 0.6 * t2 + 0.6 * (t1 + t2 - t1 * t2)
        assert initial_intensity(Region.UNION, cfg) == pytest.approx(expected, rel=1e-14)

    def test_frictionless_cone_matches_summed_model(self):
        # alpha = 0 collapses the cone test to Y1 + Y2 > x01 + x02; with
        # unit-rate claims the common-shock tail is the Erlang tail.
        cfg = config(alpha=0.0, x0=(3.0, 4.0))
        s = 7.0
        expected = (0.6 + 0.6) * math.exp(-s) + 0.6 * (1.0 + s) * math.exp(-s)
        assert initial_intensity(Region.DUAL_CONE, cfg) == pytest.approx(expected, rel=1e-9)

    def test_string_region_accepted(self):
        cfg = config()
        assert initial_intensity("h1", cfg) == initial_intensity(Region.H1, cfg)

    def test_bracketing_on_random_configs(self):
        rng = np.random.default_rng(666)
        for _ in range(100):
            cfg = config(
                x0=tuple(rng.uniform(0.5, 8.0, size=2)),
                c=tuple(rng.uniform(0.0, 3.0, size=2)),
                lam=tuple(rng.uniform(0.0, 2.0, size=3)),
                claim_rate=tuple(rng.uniform(0.2, 3.0, size=2)),
                alpha=float(rng.uniform(0.001, 10.0)),
            )
            lo = initial_intensity(Region.INTERSECTION, cfg)
            mid = initial_intensity(Region.DUAL_CONE, cfg)
            hi = initial_intensity(Region.UNION, cfg)
            assert lo <= mid + 1e-12
            assert mid <= hi + 1e-12

    def test_empirical_slope_consistent_with_intensity(self):
        # Fine grid near the origin; the second-order one-sided difference
        # (4p(h) - p(2h))/(2h) cancels the quadratic claim-tilting term
        # that dominates a plain secant (see the acceptance suite).
        cfg = config(
            alpha=0.5, horizon=2.0, n_trials=200_000, grid_points=201, seed=271
        )
        curves = ruin_curves(cfg)
        h_idx, h2_idx = 25, 50
        h = curves.grid[h_idx]
        assert h == pytest.approx(0.25)
        p_h = curves.probs["tau"][h_idx]
        p_2h = curves.probs["tau"][h2_idx]
        slope = (4.0 * p_h - p_2h) / (2.0 * h)
        var = (
            16.0 * p_h * (1.0 - p_h)
            + p_2h * (1.0 - p_2h)
            - 8.0 * p_h * (1.0 - p_2h)
        ) / cfg.n_trials
        se = math.sqrt(var) / (2.0 * h)
        nu = initial_intensity(Region.DUAL_CONE, cfg)
        assert abs(slope - nu) <= 4.0 * se

    def test_quadrature_matches_monte_carlo_oracle(self):
        cfg = config(alpha=0.5, x0=(2.0, 3.0), claim_rate=(1.0, 0.7), lam=(0.5, 0.7, 0.9))
        value = initial_intensity(Region.DUAL_CONE, cfg)
        rng = np.random.default_rng(31337)
        n = 1_000_000
        lam = np.array(cfg.lam)
        kinds = rng.choice(3, size=n, p=lam / lam.sum())
        y1 = rng.exponential(1.0 / cfg.claim_rate[0], size=n) * (kinds != 1)
        y2 = rng.exponential(1.0 / cfg.claim_rate[1], size=n) * (kinds != 0)
        z1 = cfg.x0[0] - y1
        z2 = cfg.x0[1] - y2
        q = 1.0 + cfg.alpha
        outside = (z1 + q * z2 < 0.0) | (q * z1 + z2 < 0.0)
        p_hat = outside.mean()
        estimate = lam.sum() * p_hat
        se = lam.sum() * math.sqrt(p_hat * (1.0 - p_hat) / n)
        assert abs(value - estimate) <= 4 * se
