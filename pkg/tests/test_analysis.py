import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from remotejc.analysis import (
    TimeSeries,
    analyze,
    detect_esd_intervals,
    detect_revivals,
    envelope,
    measure_period,
)
from remotejc.errors import ConfigurationError, InsufficientDataError


def grid(t_max, dt):
    return np.arange(int(round(t_max / dt)) + 1) * dt


def bumps(g, centers, width=1.0, height=1.0, fringe=0.5):
    """Gaussian bursts carrying fast fringes, a toy collapse-revival curve."""
    v = np.zeros_like(g)
    for c, h in zip(centers, np.atleast_1d(height) * np.ones(len(centers))):
        v += h * np.exp(-((g - c) / width) ** 2)
    return v * np.cos(2 * math.pi * g / fringe) ** 2


class TestTimeSeries:
    def test_rejects_descending(self):
        with pytest.raises(ConfigurationError):
            TimeSeries([0, 2, 1], [0, 0, 0])

    def test_rejects_nonuniform(self):
        with pytest.raises(ConfigurationError):
            TimeSeries([0, 1, 3], [0, 0, 0])

    def test_rejects_nan(self):
        with pytest.raises(ConfigurationError):
            TimeSeries([0, 1], [0, np.nan])


class TestEsd:
    def test_all_zero(self):
        g = grid(10, 0.1)
        assert detect_esd_intervals(TimeSeries(g, np.zeros_like(g))) == [(0.0, g[-1])]

    def test_cos_squared_has_none(self):
        g = grid(2 * math.pi, 0.01)
        g = np.concatenate([g[g < math.pi / 2], [math.pi / 2], g[g > math.pi / 2]])
        g = np.arange(g.size) * (math.pi / 2 / 157)  # grid hits pi/2 exactly
        assert detect_esd_intervals(TimeSeries(g, np.cos(g) ** 2), 1e-12) == []

    def test_positive_series(self):
        g = grid(5, 0.1)
        assert detect_esd_intervals(TimeSeries(g, np.full_like(g, 0.3))) == []

    def test_plateau(self):
        g = grid(10, 0.5)
        v = np.maximum(0, np.cos(g))
        iv = detect_esd_intervals(TimeSeries(g, v))
        assert iv and all(b > a for a, b in iv)
        assert all(np.all(v[(g >= a) & (g <= b)] == 0) for a, b in iv)

    def test_refinement_moves_endpoints_less_than_coarse_step(self):
        coarse, fine = grid(30, 0.02), grid(30, 0.01)
        f = lambda g: np.maximum(0.0, np.sin(g) - 0.3)  # noqa: E731
        a = detect_esd_intervals(TimeSeries(coarse, f(coarse)))
        b = detect_esd_intervals(TimeSeries(fine, f(fine)))
        assert len(a) == len(b)
        for (a0, a1), (b0, b1) in zip(a, b):
            assert abs(a0 - b0) < 0.02 and abs(a1 - b1) < 0.02


class TestRevivals:
    def test_constant_zero(self):
        g = grid(10, 0.1)
        assert detect_revivals(TimeSeries(g, np.zeros_like(g)), tau=0.2) == []

    def test_finds_bursts_with_decreasing_peaks(self):
        g = grid(100, 0.01)
        v = bumps(g, [0, 40, 80], height=[1.0, 0.5, 0.25])
        wins = detect_revivals(TimeSeries(g, v), 0.05, tau=0.25)
        assert [round(w.center) for w in wins] == [0, 40, 80]
        peaks = [w.peak for w in wins]
        assert all(p > q for p, q in zip(peaks, peaks[1:]))
        assert all(0 <= p <= 1 for p in peaks)

    def test_fringes_do_not_split_a_window(self):
        g = grid(60, 0.01)
        wins = detect_revivals(TimeSeries(g, bumps(g, [30], width=3.0)), 0.05, tau=0.25)
        assert len(wins) == 1

    def test_windows_disjoint_and_ascending(self):
        g = grid(200, 0.02)
        v = bumps(g, [10, 60, 63, 150], width=1.0)
        wins = detect_revivals(TimeSeries(g, v), 0.05, tau=0.25)
        for w, nxt in zip(wins, wins[1:]):
            assert w.stop < nxt.start

    def test_refinement_invariance(self):
        coarse, fine = grid(100, 0.01), grid(100, 0.005)
        a = detect_revivals(TimeSeries(coarse, bumps(coarse, [20, 70])), 0.05, tau=0.25)
        b = detect_revivals(TimeSeries(fine, bumps(fine, [20, 70])), 0.05, tau=0.25)
        assert len(a) == len(b)
        for x, y in zip(a, b):
            assert abs(x.start - y.start) < 0.01 + 1e-12 and abs(x.stop - y.stop) < 0.01 + 1e-12

    def test_envelope_is_moving_max(self):
        g = grid(10, 0.1)
        v = np.zeros_like(g)
        v[50] = 1.0
        env = envelope(TimeSeries(g, v), tau=0.2)  # 4-sample window
        assert env.max() == 1.0 and 3 <= np.count_nonzero(env) <= 5


class TestPeriod:
    def test_sine(self):
        g = grid(50, 0.01)
        assert measure_period(TimeSeries(g, np.sin(2 * math.pi * g / 1.7))) == pytest.approx(1.7, rel=0.01)

    @settings(max_examples=40, deadline=None)
    @given(st.floats(0.0, 1.0), st.floats(0, 2 * math.pi))
    def test_sinusoids_across_range(self, u, phase):
        dt, span = 0.01, 40.0
        lo, hi = 5 * dt, span / 10
        period = lo * (hi / lo) ** u
        g = grid(span, dt)
        est = measure_period(TimeSeries(g, 0.3 + np.sin(2 * math.pi * g / period + phase)))
        assert est == pytest.approx(period, rel=0.01)

    def test_window_argument(self):
        g = grid(100, 0.01)
        v = np.where(g < 50, np.sin(2 * math.pi * g / 0.5), np.sin(2 * math.pi * g / 2.0))
        assert measure_period(TimeSeries(g, v), (60, 100)) == pytest.approx(2.0, rel=0.01)

    def test_too_few_samples(self):
        g = grid(1, 0.1)
        with pytest.raises(InsufficientDataError):
            measure_period(TimeSeries(g, np.sin(g)))

    def test_too_few_oscillations(self):
        g = grid(10, 0.01)
        with pytest.raises(InsufficientDataError):
            measure_period(TimeSeries(g, np.sin(2 * math.pi * g / 4.0)))


def test_analyze_reports_micro_esd():
    g = grid(100, 0.01)
    v = np.maximum(0.0, bumps(g, [0, 50], width=3.0) - 0.05)
    rep = analyze(TimeSeries(g, v, "toy"), tau=0.25)
    assert rep.micro_esd_count > 5
    assert rep.measured_period == pytest.approx(0.25, rel=0.05)
    d = rep.to_dict()
    assert d["label"] == "toy" and d["micro_esd"]["count"] == rep.micro_esd_count
