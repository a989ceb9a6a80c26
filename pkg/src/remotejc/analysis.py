"""Collapse/revival phenomenology of sampled concurrence curves."""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.ndimage import maximum_filter1d

from .errors import ConfigurationError, InsufficientDataError

GRID_TOL = 1e-12


@dataclass(frozen=True)
class TimeSeries:
    gt_grid: np.ndarray
    values: np.ndarray
    label: str = ""

    def __post_init__(self):
        g = np.asarray(self.gt_grid, dtype=float)
        v = np.asarray(self.values, dtype=float)
        if g.ndim != 1 or g.shape != v.shape:
            raise ConfigurationError("gt_grid and values must be 1-d and of equal length")
        if g.size >= 2:
            step = np.diff(g)
            if np.any(step <= 0):
                raise ConfigurationError("gt_grid must be strictly ascending")
            if np.max(np.abs(step - step[0])) > GRID_TOL * max(1.0, abs(g[-1])):
                raise ConfigurationError("gt_grid must be uniform")
        if not np.all(np.isfinite(v)):
            raise ConfigurationError(f"series {self.label!r} has non-finite values")
        object.__setattr__(self, "gt_grid", g)
        object.__setattr__(self, "values", v)

    @property
    def dt(self) -> float:
        return float(self.gt_grid[1] - self.gt_grid[0]) if self.gt_grid.size > 1 else 0.0

    def window(self, start: float, stop: float) -> "TimeSeries":
        sel = (self.gt_grid >= start) & (self.gt_grid <= stop)
        return TimeSeries(self.gt_grid[sel], self.values[sel], self.label)


@dataclass(frozen=True)
class RevivalWindow:
    center: float
    width: float
    peak: float
    start: float
    stop: float


@dataclass
class RevivalReport:
    label: str
    esd_intervals: list = field(default_factory=list)
    revival_windows: list = field(default_factory=list)
    measured_period: float | None = None
    envelope_peaks: list = field(default_factory=list)
    micro_esd_count: int = 0
    micro_esd_duration: float = 0.0

    def to_dict(self) -> dict:
        return {
            "label": self.label,
            "esd_intervals": [[float(a), float(b)] for a, b in self.esd_intervals],
            "revival_windows": [
                {
                    "center": w.center,
                    "width": w.width,
                    "peak": w.peak,
                    "start": w.start,
                    "stop": w.stop,
                }
                for w in self.revival_windows
            ],
            "measured_period": self.measured_period,
            "envelope_peaks": [float(p) for p in self.envelope_peaks],
            "micro_esd": {
                "count": self.micro_esd_count,
                "total_duration": self.micro_esd_duration,
            },
        }


def _runs(mask: np.ndarray):
    """(start, stop) index pairs, inclusive, of True runs."""
    if mask.size == 0:
        return []
    padded = np.concatenate(([False], mask, [False]))
    edges = np.flatnonzero(np.diff(padded.astype(np.int8)))
    return [(int(a), int(b) - 1) for a, b in zip(edges[::2], edges[1::2])]


def detect_esd_intervals(series: TimeSeries, zero_tol: float = 1e-12):
    """Closed ``gt`` intervals where the value stays at or below ``zero_tol``.

    Runs of a single sample are tangential touches (``cos^2`` at its zeros)
    and are dropped.
    """
    runs = _runs(series.values <= zero_tol)
    g = series.gt_grid
    return [(float(g[a]), float(g[b])) for a, b in runs if b > a]


def moving_max(values: np.ndarray, size: int) -> np.ndarray:
    return maximum_filter1d(np.asarray(values, dtype=float), size=max(int(size), 1), mode="nearest")


def _window_samples(span: float, dt: float) -> int:
    return max(int(round(span / dt)), 1) if dt > 0 else 1


def envelope(series: TimeSeries, tau: float) -> np.ndarray:
    """Moving maximum over a ``2 tau`` window."""
    return moving_max(series.values, _window_samples(2.0 * tau, series.dt))


def detect_revivals(series: TimeSeries, threshold: float = 0.05, tau: float | None = None):
    """Regions where the ``2 tau`` moving-max envelope exceeds ``threshold``.

    Regions closer than ``tau`` are merged.  ``tau`` defaults to ten grid
    steps when the fringe period is not known.
    """
    if series.gt_grid.size == 0:
        return []
    dt = series.dt
    if tau is None or not math.isfinite(tau):
        tau = 10.0 * dt
    env = envelope(series, tau)
    runs = _runs(env > threshold)
    g = series.gt_grid
    merged = []
    for a, b in runs:
        if merged and g[a] - g[merged[-1][1]] < tau:
            merged[-1] = (merged[-1][0], b)
        else:
            merged.append((a, b))
    windows = []
    for a, b in merged:
        k = a + int(np.argmax(series.values[a:b + 1]))
        windows.append(
            RevivalWindow(
                center=float(g[k]),
                width=float(g[b] - g[a]),
                peak=float(series.values[k]),
                start=float(g[a]),
                stop=float(g[b]),
            )
        )
    return windows


def measure_period(series: TimeSeries, window=None, min_oscillations: float = 10.0) -> float:
    """Dominant oscillation period from the Hann-windowed magnitude spectrum.

    The mean is removed first, the spectrum is zero padded 16x and the peak
    is refined by a parabola through the three top bins.

    Raises
    ------
    InsufficientDataError
        Fewer than 16 samples, or fewer than ``min_oscillations`` periods
        inside the window (5 % slack for the estimate itself).
    """
    if window is not None:
        series = series.window(*window)
    x = series.values
    if x.size < 16:
        raise InsufficientDataError(f"window holds {x.size} samples, need at least 16")
    dt = series.dt
    y = (x - x.mean()) * np.hanning(x.size)
    nfft = 16 * (1 << int(math.ceil(math.log2(x.size))))
    mag = np.abs(np.fft.rfft(y, nfft))
    mag[0] = 0.0
    k = int(np.argmax(mag))
    if k == 0 or mag[k] == 0.0:
        raise InsufficientDataError("no oscillation in window")
    shift = 0.0
    if 0 < k < mag.size - 1:
        lo, mid, hi = mag[k - 1], mag[k], mag[k + 1]
        den = lo - 2.0 * mid + hi
        if den != 0.0:
            shift = 0.5 * (lo - hi) / den
    freq = (k + shift) / (nfft * dt)
    period = 1.0 / freq
    span = series.gt_grid[-1] - series.gt_grid[0]
    if span < 0.95 * min_oscillations * period:
        raise InsufficientDataError(
            f"window spans {span / period:.1f} oscillations, need {min_oscillations:g}"
        )
    return float(period)


def analyze(series: TimeSeries, tau: float, zero_tol: float = 1e-12, threshold: float = 0.05) -> RevivalReport:
    """ESD intervals, revival windows, fringe period and micro-ESD tally.

    The period and the micro-ESD tally refer to the first revival window
    after the initial one (``None`` / 0 when there is none).
    """
    esd = detect_esd_intervals(series, zero_tol)
    wins = detect_revivals(series, threshold, tau)
    report = RevivalReport(
        label=series.label,
        esd_intervals=esd,
        revival_windows=wins,
        envelope_peaks=[w.peak for w in wins],
    )
    later = [w for w in wins if w.start > series.gt_grid[0]]
    if later:
        first = later[0]
        try:
            report.measured_period = measure_period(series, (first.start, first.stop))
        except InsufficientDataError:
            report.measured_period = None
        inside = [(a, b) for a, b in esd if a >= first.start and b <= first.stop]
        report.micro_esd_count = len(inside)
        report.micro_esd_duration = float(sum(b - a for a, b in inside))
    return report
