import math

import numpy as np
import pytest

from introscore import FactorParams, GenConfig, InputError, Prior, default_factor_params, estimate_cohort, generate_cohort, recovery_report
from introscore.synthetic import ESTIMATORS

UNIFORM = Prior.uniform()


def test_empty_cohort():
    c = generate_cohort(GenConfig(n=0))
    assert len(c) == 0 and c.features.shape == (0, 12)


def test_same_seed_same_cohort():
    a = generate_cohort(GenConfig(n=50, seed=7))
    b = generate_cohort(GenConfig(n=50, seed=7))
    np.testing.assert_array_equal(a.features, b.features)
    np.testing.assert_array_equal(a.labels, b.labels)
    assert a.ids == b.ids


def test_different_seed_differs():
    a = generate_cohort(GenConfig(n=20, seed=1))
    b = generate_cohort(GenConfig(n=20, seed=2))
    assert not np.array_equal(a.labels, b.labels)


def test_noise_free_features_follow_lines():
    fps = [FactorParams(1, 1.3, -0.1, 1e-12), FactorParams(2, -0.5, 0.7, 1e-12)]
    c = generate_cohort(GenConfig(n=200, factor_params=fps, seed=4))
    for fp in fps:
        expected = np.clip(fp.slope * c.labels + fp.intercept, 0, 1)
        assert np.max(np.abs(c.features[:, fp.factor_id - 1] - expected)) <= 1e-9
    assert np.all(c.features[:, 2] == 0.5)


def test_factor_streams_are_independent_of_listing():
    one = generate_cohort(GenConfig(n=30, factor_params=default_factor_params()[:1], seed=9))
    all5 = generate_cohort(GenConfig(n=30, factor_params=default_factor_params(), seed=9))
    np.testing.assert_array_equal(one.features[:, 0], all5.features[:, 0])


def test_normal_prior_labels_truncated():
    c = generate_cohort(GenConfig(n=2000, prior=Prior.normal(0.9, 0.3), seed=1))
    assert c.labels.min() >= 0 and c.labels.max() <= 1


def test_unclamped_features_may_leave_unit_interval():
    fps = [FactorParams(1, 1.0, 0.0, 0.3)]
    c = generate_cohort(GenConfig(n=500, factor_params=fps, seed=2, clamp_features=False))
    assert c.features.min() < 0 or c.features.max() > 1


def test_perfect_estimator():
    c = generate_cohort(GenConfig(n=100, seed=3))
    r = recovery_report(c, c.labels, "oracle")
    assert r.rmse <= 1e-12 and r.pearson_r == 1.0 and r.mean_bias == 0.0


def test_constant_estimate_rmse_is_uniform_sd():
    c = generate_cohort(GenConfig(n=100_000, seed=8))
    r = recovery_report(c, np.full(len(c), 0.5), "constant")
    # sd of U(0,1) is 1/sqrt(12); the sampling s.e. of the rmse is about 0.0004
    assert r.rmse == pytest.approx(1 / math.sqrt(12), abs=0.002)
    assert r.pearson_r is None


def test_single_row_report():
    r = recovery_report(np.array([0.3]), np.array([0.5]), "x")
    assert r.pearson_r is None and r.rmse == pytest.approx(0.2)


def test_length_mismatch():
    with pytest.raises(InputError):
        recovery_report(np.array([0.3, 0.4]), np.array([0.5]), "x")


def test_more_factors_recover_better():
    fps = default_factor_params(0.05)
    c = generate_cohort(GenConfig(n=1000, factor_params=fps, seed=12))
    five = recovery_report(c, estimate_cohort(c.features, fps, UNIFORM), "5")
    one = recovery_report(c, estimate_cohort(c.features, fps[:1], UNIFORM), "1")
    assert five.rmse < one.rmse


def test_tiny_noise_recovers_labels():
    fps = default_factor_params(1e-4)
    c = generate_cohort(GenConfig(n=1000, factor_params=fps, seed=13))
    est = estimate_cohort(c.features, fps, UNIFORM)
    assert recovery_report(c, est, "pm").rmse <= 1e-3


def test_clamping_irrelevant_when_features_stay_inside():
    fps = default_factor_params(0.01)  # means within [0.15, 0.85], 15 s.d. from the edges
    on = generate_cohort(GenConfig(n=500, factor_params=fps, seed=14, clamp_features=True))
    off = generate_cohort(GenConfig(n=500, factor_params=fps, seed=14, clamp_features=False))
    r_on = recovery_report(on, estimate_cohort(on.features, fps, UNIFORM), "on")
    r_off = recovery_report(off, estimate_cohort(off.features, fps, UNIFORM), "off")
    assert abs(r_on.rmse - r_off.rmse) <= 1e-6
    assert abs(r_on.pearson_r - r_off.pearson_r) <= 1e-6


def test_estimators_agree_on_small_cohort():
    fps = default_factor_params(0.1)
    c = generate_cohort(GenConfig(n=20, factor_params=fps, seed=15))
    pm = estimate_cohort(c.features, fps, UNIFORM, "posterior_mean")
    gm = estimate_cohort(c.features, fps, UNIFORM, "grid_mean", n_points=4001)
    np.testing.assert_allclose(pm, gm, atol=1e-6)
    cf = estimate_cohort(c.features, fps, UNIFORM, "map_closed_form")
    nm = estimate_cohort(c.features, fps, UNIFORM, "map_numeric")
    gmap = estimate_cohort(c.features, fps, UNIFORM, "grid_map")
    np.testing.assert_allclose(cf, nm, atol=1e-9)
    np.testing.assert_allclose(cf, gmap, atol=1e-9)
    mc = estimate_cohort(c.features, fps, UNIFORM, "mc_mean", seed=1, n_samples=20_000)
    np.testing.assert_allclose(mc, pm, atol=5e-3)
    assert set(ESTIMATORS) == {"posterior_mean", "grid_mean", "grid_map", "map_closed_form", "map_numeric", "mc_mean"}


def test_mc_estimator_needs_seed():
    with pytest.raises(InputError):
        estimate_cohort(np.full((1, 12), 0.5), default_factor_params(), UNIFORM, "mc_mean")
    with pytest.raises(InputError):
        estimate_cohort(np.full((1, 12), 0.5), default_factor_params(), UNIFORM, "nope")


def test_genconfig_dict_round_trip():
    cfg = GenConfig(n=10, prior=Prior.normal(0.4, 0.2), seed=5, clamp_features=False)
    back = GenConfig.from_dict(cfg.to_dict())
    assert back == cfg
