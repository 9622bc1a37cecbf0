"""Synchronous sampling, harmonic tables, THD and R-L load current spectra."""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np

from .errors import InvalidParameterError, NumericFailureError
from .patterns import SwitchingPattern

DEFAULT_SAMPLES_PER_PERIOD = 65536
DEFAULT_MAX_ORDER = 50
DEFAULT_LOAD_R = 3.5
DEFAULT_LOAD_L = 10e-3


@dataclass(frozen=True, eq=False)
class SampledWaveform:
    samples: np.ndarray
    sample_rate: float
    fundamental: float
    periods_captured: int = 1

    @property
    def samples_per_period(self) -> int:
        return self.samples.size // self.periods_captured

    @property
    def times(self) -> np.ndarray:
        return np.arange(self.samples.size) / self.sample_rate

    def scaled(self, factor: float) -> "SampledWaveform":
        return replace(self, samples=self.samples * factor)


@dataclass(frozen=True, eq=False)
class HarmonicTable:
    """Peak amplitudes and phases of orders 1..max_order.

    ``phase`` is the angle of each harmonic written as ``a_n cos(n w t + phase_n)``.
    """

    orders: np.ndarray
    amplitude: np.ndarray
    phase: np.ndarray
    fundamental_hz: float
    dc: float = 0.0
    nyquist_order: int | None = None

    @property
    def max_order(self) -> int:
        return int(self.orders[-1])

    @property
    def a1(self) -> float:
        return float(self.amplitude[0])

    @property
    def percent(self) -> np.ndarray:
        if self.a1 == 0:
            return np.full_like(self.amplitude, np.nan)
        return 100.0 * self.amplitude / self.a1

    @property
    def frequencies(self) -> np.ndarray:
        return self.orders * self.fundamental_hz

    @property
    def fundamental_rms(self) -> float:
        return fundamental_rms(self)

    @property
    def thd_percent(self) -> float:
        return thd(self)

    def amplitude_of(self, order: int) -> float:
        return float(self.amplitude[order - 1])

    def rows(self):
        """(order, freq_hz, amplitude, percent) tuples."""
        pct = self.percent
        return [
            (int(n), float(n * self.fundamental_hz), float(a), float(p))
            for n, a, p in zip(self.orders, self.amplitude, pct)
        ]


def sample_pattern(pattern: SwitchingPattern, samples_per_period: int = DEFAULT_SAMPLES_PER_PERIOD,
                   periods: int = 1, scale: float = 1.0) -> SampledWaveform:
    """Evaluate an exact pattern at uniform instants (post-event level at events)."""
    if samples_per_period < 4096 or samples_per_period & (samples_per_period - 1):
        raise InvalidParameterError(
            f"samples_per_period must be a power of two >= 4096, got {samples_per_period}"
        )
    if periods < 1:
        raise InvalidParameterError(f"periods must be >= 1, got {periods}")
    T = pattern.period
    idx = np.arange(samples_per_period)
    one = pattern.level_at(idx * (T / samples_per_period)).astype(float) * scale
    samples = np.tile(one, periods)
    return SampledWaveform(samples, samples_per_period / T, 1.0 / T, periods)


def spectrum(s: SampledWaveform, max_order: int = DEFAULT_MAX_ORDER) -> HarmonicTable:
    """Harmonic amplitudes from a synchronous capture.

    ``max_order`` may reach samples_per_period / 2; that Nyquist bin is a
    real cosine and is reported without the factor of two.
    """
    n_per = s.samples_per_period
    if not 1 <= max_order <= n_per // 2:
        raise InvalidParameterError(
            f"max_order must lie in [1, {n_per // 2}] for {n_per} samples per period, got {max_order}"
        )
    X = np.fft.rfft(s.samples) / s.samples.size
    orders = np.arange(1, max_order + 1)
    bins = X[orders * s.periods_captured]
    amp = 2.0 * np.abs(bins)
    nyq = None
    if max_order == n_per // 2:
        amp[-1] = np.abs(bins[-1])
        nyq = max_order
    return HarmonicTable(orders, amp, np.angle(bins), s.fundamental, float(X[0].real), nyq)


def thd(table: HarmonicTable, max_order: int | None = None) -> float:
    """Total harmonic distortion in percent over orders 2..max_order."""
    top = table.max_order if max_order is None else max_order
    if top > table.max_order:
        raise InvalidParameterError(f"table only covers orders up to {table.max_order}")
    a1 = table.a1
    if a1 == 0:
        raise NumericFailureError("THD is undefined for a zero fundamental")
    harm = table.amplitude[1:top]
    return float(100.0 * math.sqrt(float(np.sum(harm ** 2))) / a1)


def fundamental_rms(table: HarmonicTable) -> float:
    return table.a1 / math.sqrt(2.0)


def current_spectrum(v: HarmonicTable, R: float = DEFAULT_LOAD_R,
                     L: float = DEFAULT_LOAD_L) -> HarmonicTable:
    """Current harmonics of a series R-L load driven by the voltage harmonics."""
    if R < 0 or L < 0 or (R == 0 and L == 0):
        raise InvalidParameterError(f"load needs R > 0 or L > 0 (both non-negative), got R={R}, L={L}")
    w = 2.0 * math.pi * v.fundamental_hz
    z = R + 1j * v.orders * w * L
    amp = v.amplitude / np.abs(z)
    phase = v.phase - np.angle(z)
    if R > 0:
        dc = v.dc / R
    else:
        dc = 0.0 if v.dc == 0 else math.copysign(math.inf, v.dc)
    return HarmonicTable(v.orders.copy(), amp, phase, v.fundamental_hz, dc, v.nyquist_order)


def parseval_check(s: SampledWaveform, table: HarmonicTable) -> float:
    """Relative error between time-domain RMS and the RMS rebuilt from the table."""
    rms_time = math.sqrt(float(np.mean(s.samples ** 2)))
    power = table.dc ** 2 + float(np.sum(table.amplitude ** 2)) / 2.0
    if table.nyquist_order is not None:
        # the Nyquist line is a cosine of peak a sampled at its extremes: mean square a^2
        power += table.amplitude[-1] ** 2 / 2.0
    rms_freq = math.sqrt(power)
    if rms_time == 0:
        return 0.0 if rms_freq == 0 else math.inf
    return abs(rms_freq - rms_time) / rms_time


def full_spectrum(s: SampledWaveform) -> HarmonicTable:
    """Every harmonic bin up to Nyquist."""
    return spectrum(s, s.samples_per_period // 2)


def exact_harmonics(pattern: SwitchingPattern, max_order: int = DEFAULT_MAX_ORDER,
                    scale: float = 1.0) -> HarmonicTable:
    """Fourier coefficients of the event list itself, free of sampling error.

    Integrating by parts, c_n = sum_k dL_k exp(-j n w t_k) / (j 2 pi n), where
    dL_k is the level jump at event k.
    """
    if max_order < 1:
        raise InvalidParameterError(f"max_order must be >= 1, got {max_order}")
    T = pattern.period
    orders = np.arange(1, max_order + 1)
    levels = pattern.levels.astype(float)
    jumps = levels - np.concatenate(([pattern.initial_level], levels[:-1]))
    arg = np.outer(orders, pattern.times) * (2.0 * math.pi / T)
    c = (np.exp(-1j * arg) @ jumps) / (2j * math.pi * orders) * scale
    return HarmonicTable(orders, 2.0 * np.abs(c), np.angle(c), 1.0 / T,
                         pattern.mean_level() * scale)


def analyze(pattern: SwitchingPattern, scale: float = 1.0,
            samples_per_period: int = DEFAULT_SAMPLES_PER_PERIOD,
            max_order: int = DEFAULT_MAX_ORDER,
            method: str = "sampled") -> tuple[SampledWaveform, HarmonicTable]:
    """Sample ``pattern`` and tabulate its harmonics.

    ``method="sampled"`` runs the DFT of the synchronous capture;
    ``method="exact"`` takes the table from the event list directly.
    """
    s = sample_pattern(pattern, samples_per_period, 1, scale)
    if method == "sampled":
        return s, spectrum(s, max_order)
    if method == "exact":
        return s, exact_harmonics(pattern, max_order, scale)
    raise InvalidParameterError(f"method must be 'sampled' or 'exact', got {method!r}")
