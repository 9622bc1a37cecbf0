"""Modulating waves, frequency-modulated truncated carriers and comparator events.

The truncated carrier has instantaneous pulsation

    w_i(t) = max(A_M * w_m * (cos^2(w_m t) - K), 0)

so the carrier runs fastest where the sine modulator is steepest and stops
completely in the windows around its peaks. ``A_M`` is chosen so that one
fundamental period holds exactly ``M_bar`` carrier cycles.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field, replace

import numpy as np

from .errors import InvalidParameterError, NumericFailureError
from .patterns import SwitchingPattern

TWO_PI = 2.0 * math.pi

# sin(x) + sin(3x)/6 scaled to unit peak; the fundamental then reaches 2/sqrt(3).
DEFAULT_INJECTION: tuple[tuple[int, float], ...] = ((1, 1.1547), (3, 0.1925))
PURE_SINE: tuple[tuple[int, float], ...] = ((1, 1.0),)

SCAN_POINTS_PER_HALF_CYCLE = 64
MIN_SCAN_POINTS = 4096
MAX_SCAN_POINTS = 50_000_000
# Pulses narrower than this are tangencies resolved to floating-point noise.
MIN_PULSE_WIDTH = 1e-13
# Bisection stops below this fraction of the period (well under 1e-12 s at mains frequencies).
TIME_RESOLUTION = 1e-15


class CarrierKind(str, enum.Enum):
    FMTC_TRUNCATED = "FMTC_truncated"
    TRIANGULAR_FIXED = "triangular_fixed"


@dataclass(frozen=True)
class ModulatingSpec:
    """Odd-harmonic reference wave ``amplitude * sum(c_k sin(k (w t + phase)))``."""

    f_fund: float
    amplitude: float = 1.0
    harmonics: tuple[tuple[int, float], ...] = PURE_SINE
    phase_offset: float = 0.0

    def __post_init__(self):
        if not self.f_fund > 0:
            raise InvalidParameterError(f"f_fund must be > 0, got {self.f_fund}")
        if not 0 < self.amplitude <= 1.2:
            raise InvalidParameterError(f"amplitude must lie in (0, 1.2], got {self.amplitude}")
        harmonics = tuple((int(k), float(c)) for k, c in self.harmonics)
        if not harmonics:
            raise InvalidParameterError("at least one harmonic term is required")
        for k, _ in harmonics:
            if k < 1 or k % 2 == 0:
                raise InvalidParameterError(f"harmonic orders must be odd positive integers, got {k}")
        object.__setattr__(self, "harmonics", harmonics)

    @classmethod
    def sine(cls, f_fund: float, amplitude: float = 1.0, phase_offset: float = 0.0):
        return cls(f_fund, amplitude, PURE_SINE, phase_offset)

    @classmethod
    def injected(cls, f_fund: float, amplitude: float = 1.0, harmonics=DEFAULT_INJECTION,
                 phase_offset: float = 0.0):
        return cls(f_fund, amplitude, tuple(harmonics), phase_offset)

    @property
    def omega(self) -> float:
        return TWO_PI * self.f_fund

    @property
    def period(self) -> float:
        return 1.0 / self.f_fund

    @property
    def fundamental_coefficient(self) -> float:
        """Effective modulation index of the fundamental component."""
        return self.amplitude * sum(c for k, c in self.harmonics if k == 1)

    def with_phase(self, phase_offset: float) -> "ModulatingSpec":
        return replace(self, phase_offset=phase_offset)

    def evaluate(self, t, extra_phase: float = 0.0):
        x = self.omega * np.asarray(t, dtype=float) + (self.phase_offset + extra_phase)
        out = np.zeros_like(x)
        for k, c in self.harmonics:
            out = out + c * np.sin(k * x)
        return self.amplitude * out


def solve_amplitude_parameter(M_bar: float, K: float) -> float:
    """Carrier amplitude parameter giving ``M_bar`` cycles per fundamental period.

    >>> round(solve_amplitude_parameter(7, 0.0), 12)
    14.0
    """
    if not 0 <= K < 1:
        raise InvalidParameterError(
            f"truncation level K must satisfy 0 <= K < 1 (K -> 1 needs an infinite carrier frequency), got {K}"
        )
    if not M_bar >= 1:
        raise InvalidParameterError(f"M_bar must be >= 1, got {M_bar}")
    return M_bar * math.pi / (2.0 * _half_area(K))


def _half_area(K: float) -> float:
    # integral of max(cos^2 - K, 0) over [0, theta0]; a full period of cos^2 holds two of these
    theta0 = math.acos(math.sqrt(K))
    return (0.5 - K) * theta0 + math.sin(2.0 * theta0) / 4.0


@dataclass(frozen=True)
class TruncationWindow:
    t1: float
    t2: float
    t3: float
    t4: float
    degenerate: bool = False

    def as_tuple(self) -> tuple[float, float, float, float]:
        return (self.t1, self.t2, self.t3, self.t4)


def truncation_instants(K: float, f_fund: float) -> TruncationWindow:
    """Edges of the two silent windows in one period of an in-phase carrier.

    ``K = 0`` yields zero-width windows at T/4 and 3T/4, flagged ``degenerate``.
    """
    if not 0 <= K < 1:
        raise InvalidParameterError(f"truncation level K must satisfy 0 <= K < 1, got {K}")
    if not f_fund > 0:
        raise InvalidParameterError(f"f_fund must be > 0, got {f_fund}")
    T = 1.0 / f_fund
    t1 = math.acos(math.sqrt(K)) / (TWO_PI * f_fund)
    return TruncationWindow(t1, T / 2 - t1, T / 2 + t1, T - t1, degenerate=(K == 0))


@dataclass(frozen=True)
class CarrierSpec:
    """Unit triangle carrier, optionally mapped onto an amplitude ``band``.

    ``phase_offset_cycles`` is added in the accumulated-phase domain so a
    shifted FMTC carrier stays synchronized with its modulator.
    """

    kind: CarrierKind
    M_bar: int | None = None
    K: float = 0.0
    phase_offset_cycles: float = 0.0
    f_carrier: float | None = None
    band: tuple[float, float] = (-1.0, 1.0)
    A_M: float = field(default=float("nan"), init=False)

    def __post_init__(self):
        kind = CarrierKind(self.kind)
        object.__setattr__(self, "kind", kind)
        lo, hi = (float(b) for b in self.band)
        if not hi > lo:
            raise InvalidParameterError(f"carrier band must have hi > lo, got {self.band}")
        object.__setattr__(self, "band", (lo, hi))
        if not 0 <= self.phase_offset_cycles < 1:
            raise InvalidParameterError(
                f"phase_offset_cycles must lie in [0, 1), got {self.phase_offset_cycles}"
            )
        if kind is CarrierKind.FMTC_TRUNCATED:
            if self.M_bar is None or int(self.M_bar) != self.M_bar or self.M_bar < 1:
                raise InvalidParameterError(f"M_bar must be a natural number, got {self.M_bar}")
            object.__setattr__(self, "M_bar", int(self.M_bar))
            object.__setattr__(self, "A_M", solve_amplitude_parameter(self.M_bar, self.K))
        else:
            if self.f_carrier is None or not self.f_carrier > 0:
                raise InvalidParameterError(f"fixed carrier needs f_carrier > 0, got {self.f_carrier}")
            if self.K != 0:
                raise InvalidParameterError("a fixed-frequency carrier has no truncation level")

    @classmethod
    def fmtc(cls, M_bar: int, K: float, phase_offset_cycles: float = 0.0,
             band=(-1.0, 1.0)) -> "CarrierSpec":
        return cls(CarrierKind.FMTC_TRUNCATED, M_bar, K, phase_offset_cycles, None, band)

    @classmethod
    def fixed(cls, f_carrier: float, phase_offset_cycles: float = 0.0, band=(-1.0, 1.0),
              M_bar: int | None = None) -> "CarrierSpec":
        return cls(CarrierKind.TRIANGULAR_FIXED, M_bar, 0.0, phase_offset_cycles, f_carrier, band)

    @property
    def is_fmtc(self) -> bool:
        return self.kind is CarrierKind.FMTC_TRUNCATED

    def with_offset(self, phase_offset_cycles: float) -> "CarrierSpec":
        return replace(self, phase_offset_cycles=phase_offset_cycles % 1.0)

    def with_band(self, band) -> "CarrierSpec":
        return replace(self, band=band)

    def max_frequency(self, f_fund: float) -> float:
        """Highest instantaneous carrier frequency in Hz."""
        if self.is_fmtc:
            return self.A_M * (1.0 - self.K) * f_fund
        return float(self.f_carrier)


def instantaneous_pulsation(spec: CarrierSpec, mod: ModulatingSpec, t):
    """Carrier angular frequency in rad/s at instant(s) ``t``."""
    t = np.asarray(t, dtype=float)
    if not spec.is_fmtc:
        return np.full_like(t, TWO_PI * spec.f_carrier)
    w = mod.omega
    c2 = np.cos(w * t + mod.phase_offset) ** 2
    return np.maximum(spec.A_M * w * (c2 - spec.K), 0.0)


def _clipped_area(x, K: float):
    """Integral of max(cos^2 s - K, 0) for s from 0 to x, elementwise, in closed form."""
    theta0 = math.acos(math.sqrt(K))
    a = 0.5 - K

    def F(s):
        return a * s + np.sin(2.0 * s) / 4.0

    x = np.asarray(x, dtype=float)
    n = np.floor(x / math.pi)
    y = x - n * math.pi
    rising = F(np.minimum(y, theta0))
    tail_start = math.pi - theta0
    falling = np.where(y > tail_start, F(np.maximum(y, tail_start)) - F(tail_start), 0.0)
    return n * 2.0 * _half_area(K) + rising + falling


def carrier_phase(spec: CarrierSpec, mod: ModulatingSpec, t):
    """Accumulated carrier phase in cycles (non-decreasing, continuous)."""
    t = np.asarray(t, dtype=float)
    if spec.is_fmtc:
        x = mod.omega * t + mod.phase_offset
        return spec.A_M * _clipped_area(x, spec.K) / TWO_PI + spec.phase_offset_cycles
    return spec.f_carrier * (t + mod.phase_offset / mod.omega) + spec.phase_offset_cycles


def triangle(theta):
    """Unit triangle: +1 at integer cycles, descending to -1 at half cycles."""
    u = np.mod(np.asarray(theta, dtype=float), 1.0)
    return np.abs(4.0 * u - 2.0) - 1.0


def carrier_value(spec: CarrierSpec, mod: ModulatingSpec, t):
    lo, hi = spec.band
    tri = triangle(carrier_phase(spec, mod, t))
    if (lo, hi) == (-1.0, 1.0):
        return tri
    return lo + (hi - lo) * (tri + 1.0) / 2.0


def _window_start(spec: CarrierSpec, mod: ModulatingSpec, t):
    """Return (inside, start) for the truncation window containing each instant."""
    theta0 = math.acos(math.sqrt(spec.K))
    x = mod.omega * t + mod.phase_offset
    y = np.mod(x, math.pi)
    inside = (y > theta0) & (y < math.pi - theta0)
    start = t - (y - theta0) / mod.omega
    return inside, start


def _comparator_state(mod, spec, mod_phase, latch, t):
    t = np.asarray(t, dtype=float)
    m = mod.evaluate(t, mod_phase)
    c = carrier_value(spec, mod, t)
    if latch:
        inside, start = _window_start(spec, mod, t)
        if np.any(inside):
            ts = start[inside]
            m = m.copy()
            c = np.array(c, copy=True)
            m[inside] = mod.evaluate(ts, mod_phase)
            c[inside] = carrier_value(spec, mod, ts)
    if not (np.all(np.isfinite(m)) and np.all(np.isfinite(c))):
        bad = t[~(np.isfinite(m) & np.isfinite(c))]
        raise NumericFailureError(
            f"non-finite modulator or carrier value near t = {bad[0]:.9g} s"
        )
    return (m > c).astype(np.int64)


def _bisect(fn, lo, hi, s_lo, tol, max_iter: int = 200):
    """Vectorized bisection for the first state change in each (lo, hi]."""
    lo = lo.copy()
    hi = hi.copy()
    for _ in range(max_iter):
        mid = 0.5 * (lo + hi)
        active = (mid > lo) & (mid < hi) & (hi - lo > tol)
        if not np.any(active):
            break
        s_mid = fn(mid[active])
        same = s_mid == s_lo[active]
        idx = np.flatnonzero(active)
        lo[idx[same]] = mid[active][same]
        hi[idx[~same]] = mid[active][~same]
    else:
        worst = int(np.argmax(hi - lo))
        raise NumericFailureError(
            f"bisection did not converge on interval [{lo[worst]:.12g}, {hi[worst]:.12g}] s"
        )
    return hi


def _phase_vertices(spec, mod, grid, theta_grid, tol):
    """Instants where the carrier phase crosses a half-integer (triangle vertices)."""
    lo_k = math.floor(2.0 * theta_grid[0]) + 1
    hi_k = math.ceil(2.0 * theta_grid[-1]) - 1
    if hi_k < lo_k:
        return np.empty(0)
    targets = np.arange(lo_k, hi_k + 1) / 2.0
    idx = np.searchsorted(theta_grid, targets, side="left")
    idx = np.clip(idx, 1, grid.size - 1)
    lo = grid[idx - 1].astype(float)
    hi = grid[idx].astype(float)
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if not np.any((mid > lo) & (mid < hi) & (hi - lo > tol)):
            break
        below = carrier_phase(spec, mod, mid) < targets
        lo = np.where(below, mid, lo)
        hi = np.where(below, hi, mid)
    return hi


def scan_grid(mod: ModulatingSpec, spec: CarrierSpec) -> np.ndarray:
    """Uniform scan grid over one period, >= 64 points per shortest half-cycle."""
    T = mod.period
    f_max = spec.max_frequency(mod.f_fund)
    shortest = 1.0 / (2.0 * f_max * 2.0)
    k_max = max(k for k, _ in mod.harmonics)
    n = max(MIN_SCAN_POINTS,
            math.ceil(SCAN_POINTS_PER_HALF_CYCLE * T / shortest),
            SCAN_POINTS_PER_HALF_CYCLE * 2 * k_max)
    if n > MAX_SCAN_POINTS:
        raise NumericFailureError(
            f"scan grid of {n} points over [0, {T:.9g}] s exceeds the limit; "
            f"carrier peak frequency {f_max:.6g} Hz is too high"
        )
    return np.arange(n) * (T / n)


def comparator_events(mod: ModulatingSpec, spec: CarrierSpec, mod_phase: float = 0.0,
                      latch_truncation: bool = True) -> SwitchingPattern:
    """Gate signal ``modulator(t + mod_phase) > carrier(t)`` over one period.

    ``mod_phase`` shifts only the modulator; the FMTC carrier stays locked to
    ``mod.phase_offset``. With ``latch_truncation`` the gate holds its state
    through each truncation window, so those windows contain no events.
    """
    T = mod.period
    latch = latch_truncation and spec.is_fmtc and spec.K > 0

    def state(t):
        return _comparator_state(mod, spec, mod_phase, latch, t)

    tol = TIME_RESOLUTION * T
    uniform = scan_grid(mod, spec)
    theta_grid = carrier_phase(spec, mod, np.append(uniform, T))
    extra = [_phase_vertices(spec, mod, np.append(uniform, T), theta_grid, tol)]
    if spec.is_fmtc and spec.K > 0:
        win = truncation_instants(spec.K, mod.f_fund).as_tuple()
        shift = mod.phase_offset / mod.omega
        extra.append(np.mod(np.array(win) - shift, T))
    grid = np.unique(np.concatenate([uniform, *extra]))
    grid = grid[(grid >= 0) & (grid < T)]

    s = state(grid)
    s_ext = np.append(s, s[0])
    g_ext = np.append(grid, T)
    change = np.flatnonzero(s_ext[1:] != s_ext[:-1])
    if change.size == 0:
        return SwitchingPattern.constant(T, int(s[0]))

    lo = g_ext[change]
    hi = g_ext[change + 1]
    instants = _bisect(state, lo, hi, s_ext[change], tol)
    new_levels = s_ext[change + 1]

    instants, new_levels = _drop_slivers(instants, new_levels, T)
    if instants.size == 0:
        return SwitchingPattern.constant(T, int(s[0]))
    if instants[-1] >= T:
        instants = np.concatenate(([0.0], instants[:-1]))
        new_levels = np.concatenate((new_levels[-1:], new_levels[:-1]))
    return SwitchingPattern(T, instants, new_levels, int(new_levels[-1]))


def _drop_slivers(instants, levels, period):
    """Remove pulse pairs narrower than MIN_PULSE_WIDTH, including across the wrap."""
    t = list(map(float, instants))
    v = list(map(int, levels))
    changed = True
    while changed and len(t) >= 2:
        changed = False
        for i in range(len(t) - 1):
            if t[i + 1] - t[i] < MIN_PULSE_WIDTH:
                del t[i:i + 2], v[i:i + 2]
                changed = True
                break
        if not changed and len(t) >= 2 and t[0] + period - t[-1] < MIN_PULSE_WIDTH:
            t, v = t[1:-1], v[1:-1]
            changed = True
    return np.array(t), np.array(v, dtype=np.int64)

