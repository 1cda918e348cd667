import math

import numpy as np
import pytest

from sharecast import (
    INSUFFICIENT_DATA,
    SUPERCRITICAL,
    Cascade,
    InsufficientDataError,
    ModelParams,
    ShareEvent,
    baseline_series,
    estimate_p,
    exposure,
    infectiousness_series,
    intensity,
    log_likelihood,
    normalize,
    predict_final,
)
from sharecast.types import KernelParams

T10 = 600.0  # 10 minutes


class TestExposure:
    def test_m1_hand_values(self, m1, kernel_m1):
        n_t, n_eff = exposure(m1, T10, kernel_m1)
        assert n_t == 15.0
        assert n_eff == pytest.approx(12.5, abs=1e-12)

    def test_root_only(self, root_only, kernel_m1):
        from sharecast import phi_mass

        n_t, n_eff = exposure(root_only, 450.0, kernel_m1)
        assert n_t == 7.0
        assert n_eff == pytest.approx(7 * phi_mass(0.0, 450.0, kernel_m1), rel=1e-14)

    def test_at_time_zero(self, root_only, kernel_m1):
        assert exposure(root_only, 0.0, kernel_m1) == (7.0, 0.0)

    def test_non_decreasing_and_converges_to_n(self, m1b):
        k = normalize(KernelParams(c=1.0, s0=300.0, theta=1.0))
        times = np.linspace(0, 1e9, 50)
        effs = [exposure(m1b, t, k)[1] for t in times]
        assert all(a <= b + 1e-12 for a, b in zip(effs, effs[1:]))
        n_t, n_eff = exposure(m1b, 1e12, k)
        assert n_eff == pytest.approx(n_t, rel=1e-3)


class TestEstimateP:
    def test_m1(self, m1, kernel_m1):
        assert estimate_p(m1, T10, kernel_m1) == pytest.approx(0.08, abs=1e-12)

    def test_m1b(self, m1b, kernel_m1):
        assert estimate_p(m1b, T10, kernel_m1) == pytest.approx(2 / 32.5, abs=1e-12)

    def test_root_only_raises(self, root_only, kernel_m1):
        with pytest.raises(InsufficientDataError):
            estimate_p(root_only, T10, kernel_m1)

    def test_min_reshares_threshold(self, m1, kernel_m1):
        with pytest.raises(InsufficientDataError):
            estimate_p(m1, T10, kernel_m1, min_reshares=2)


class TestIntensity:
    def test_m1_hand_value(self, m1, kernel_m1):
        # 0.08 * (10 + 5) * 0.1/min = 0.12/min = 0.002/s
        assert intensity(m1, T10, 0.08, kernel_m1) == pytest.approx(0.12 / 60, rel=1e-12)

    def test_zero_p(self, m1, kernel_m1):
        assert intensity(m1, T10, 0.0, kernel_m1) == 0.0

    def test_decays_beyond_cutoff(self, root_only, kernel_m1):
        vals = [intensity(root_only, t, 0.1, kernel_m1) for t in (700, 1400, 2800, 5600)]
        assert all(a > b for a, b in zip(vals, vals[1:]))
        assert vals[-1] > 0


class TestLogLikelihood:
    def test_m1_hand_value(self, m1, kernel_m1):
        expected = -(0.08 * 12.5) + math.log(0.08 * 10 * kernel_m1.c)
        assert log_likelihood(m1, T10, 0.08, kernel_m1) == pytest.approx(expected, rel=1e-12)

    def test_mle_is_argmax(self, m1b, kernel_m1):
        p_hat = estimate_p(m1b, T10, kernel_m1)
        best = log_likelihood(m1b, T10, p_hat, kernel_m1)
        for delta in (-0.1, -0.01, 0.01, 0.1):
            assert best >= log_likelihood(m1b, T10, p_hat * (1 + delta), kernel_m1)

    def test_requires_positive_p(self, m1, kernel_m1):
        with pytest.raises(ValueError):
            log_likelihood(m1, T10, 0.0, kernel_m1)

    def test_requires_reshares(self, root_only, kernel_m1):
        with pytest.raises(InsufficientDataError):
            log_likelihood(root_only, T10, 0.05, kernel_m1)


class TestPredictFinal:
    def test_zero_p_returns_observed(self):
        assert predict_final(5, 100, 40, 0.0, 140) == ("ok", 5.0)

    def test_m1_hand_value(self):
        status, value = predict_final(1, 15, 12.5, 0.08, 5, eps=0.0)
        assert status == "ok"
        assert value == pytest.approx(4 / 3, abs=1e-12)

    def test_critical_threshold(self):
        status, value = predict_final(1, 15, 12.5, 0.08, 12.5, eps=0.0)
        assert status == SUPERCRITICAL and value is None

    def test_epsilon_guard(self):
        # p * n_star = 0.995 >= 1 - 0.01
        assert predict_final(1, 15, 12.5, 0.0995, 10, eps=0.01)[0] == SUPERCRITICAL

    def test_monotone_in_p_and_n_star(self):
        prev = 0.0
        for p in np.linspace(0.001, 0.009, 9):
            _, val = predict_final(3, 200, 100, p, 100, eps=0.0)
            assert val > prev
            prev = val
        prev = 0.0
        for n_star in (10, 50, 90, 99):
            _, val = predict_final(3, 200, 100, 0.009, n_star, eps=0.0)
            assert val > prev
            prev = val

    def test_prediction_never_below_observed(self):
        for p in (0.0, 0.001, 0.005):
            _, val = predict_final(7, 500, 450, p, 100, eps=0.0)
            assert val >= 7


class TestBaselineSeries:
    def test_root_only_all_insufficient(self, root_only, params_m1):
        points = baseline_series(root_only, [60, 300, 600], params_m1)
        assert all(pt.status == INSUFFICIENT_DATA for pt in points)

    def test_m1_supercritical_at_default_degree(self, m1, params_m1):
        # p = 0.08, n_star = 140 -> p*n_star >> 1
        (pt,) = baseline_series(m1, [T10], params_m1)
        assert pt.status == SUPERCRITICAL
        assert pt.model_tag == "seismic"

    def test_subcritical_prediction(self, m1, params_m1):
        (pt,) = baseline_series(m1, [T10], params_m1, n_star=5)
        assert pt.ok
        assert pt.predicted_final == pytest.approx(4 / 3, abs=1e-12)

    def test_correction_hook_scales_p(self, m1, kernel_m1, single_frame_schedule):
        params = ModelParams(
            kernel=kernel_m1, schedule=single_frame_schedule, correction=lambda t: 0.5
        )
        (pt,) = baseline_series(m1, [T10], params, n_star=5)
        assert pt.p_used == pytest.approx(0.04, abs=1e-12)


def test_infectiousness_series_fields(m1b, params_m1):
    series = infectiousness_series(m1b, [60.0, T10], params_m1)
    assert series.r.tolist() == [0.0, 2.0]
    assert math.isnan(series.p[0])
    assert series.p[1] == pytest.approx(2 / 32.5)
    assert series.n_eff[1] <= series.n[1]
