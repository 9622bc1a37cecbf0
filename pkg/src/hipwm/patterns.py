"""Exact piecewise-constant switching waveforms over one fundamental period."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

# Events closer than this (seconds) are treated as simultaneous when patterns are combined.
MERGE_TOLERANCE = 1e-13


@dataclass(frozen=True, eq=False)
class SwitchingPattern:
    """Periodic integer-level waveform stored as its transition instants.

    ``levels[i]`` is the level from ``times[i]`` (inclusive) up to the next
    event. ``initial_level`` is the level in effect just before ``t = 0``,
    which by periodicity is also the level at the end of the period.
    """

    period: float
    times: np.ndarray
    levels: np.ndarray
    initial_level: int

    def __post_init__(self):
        times = np.ascontiguousarray(self.times, dtype=float)
        levels = np.ascontiguousarray(self.levels, dtype=np.int64)
        if times.shape != levels.shape or times.ndim != 1:
            raise ValueError("times and levels must be 1-d arrays of equal length")
        if times.size:
            if np.any(np.diff(times) <= 0):
                raise ValueError("event instants must be strictly increasing")
            if times[0] < 0 or times[-1] >= self.period:
                raise ValueError("event instants must lie in [0, period)")
            if levels[-1] != self.initial_level:
                raise ValueError("pattern is not periodic: last level differs from initial level")
        times.setflags(write=False)
        levels.setflags(write=False)
        object.__setattr__(self, "times", times)
        object.__setattr__(self, "levels", levels)
        object.__setattr__(self, "initial_level", int(self.initial_level))

    @classmethod
    def constant(cls, period: float, level: int) -> "SwitchingPattern":
        return cls(period, np.empty(0), np.empty(0, dtype=np.int64), level)

    @classmethod
    def from_states(cls, period, times, states, initial_level) -> "SwitchingPattern":
        """Build a pattern from candidate instants, dropping non-transitions."""
        times = np.asarray(times, dtype=float)
        states = np.asarray(states, dtype=np.int64)
        prev = np.concatenate(([initial_level], states[:-1]))
        keep = states != prev
        return cls(period, times[keep], states[keep], initial_level)

    @property
    def events(self) -> list[tuple[float, int]]:
        return [(float(t), int(v)) for t, v in zip(self.times, self.levels)]

    @property
    def n_events(self) -> int:
        return int(self.times.size)

    @property
    def level_set(self) -> set[int]:
        return {self.initial_level, *map(int, self.levels)}

    def level_at(self, t):
        """Level at instant(s) ``t``; an event instant takes its post-event level."""
        tm = np.mod(np.asarray(t, dtype=float), self.period)
        if not self.times.size:
            out = np.full(tm.shape, self.initial_level, dtype=np.int64)
            return out if out.ndim else int(out)
        idx = np.searchsorted(self.times, tm, side="right") - 1
        out = np.where(idx < 0, self.initial_level, self.levels[np.maximum(idx, 0)])
        return out if out.ndim else int(out)

    def mean_level(self) -> float:
        """Time average of the level over one period."""
        if not self.times.size:
            return float(self.initial_level)
        edges = np.concatenate((self.times, [self.period]))
        area = self.initial_level * self.times[0] + np.sum(self.levels * np.diff(edges))
        return float(area / self.period)

    def _combine(self, other: "SwitchingPattern", op) -> "SwitchingPattern":
        if not np.isclose(self.period, other.period, rtol=1e-12, atol=0.0):
            raise ValueError("cannot combine patterns with different periods")
        times = np.union1d(self.times, other.times)
        if times.size > 1:
            # keep the last instant of each near-coincident cluster so the level is post-event
            last = np.append(np.diff(times) >= MERGE_TOLERANCE, True)
            times = times[last]
        if times.size and times[0] < MERGE_TOLERANCE and self.period - times[-1] < MERGE_TOLERANCE:
            times = times[:-1]
        states = op(self.level_at(times), other.level_at(times)) if times.size else np.empty(0)
        return SwitchingPattern.from_states(
            self.period, times, states, op(self.initial_level, other.initial_level)
        )

    def __add__(self, other: "SwitchingPattern") -> "SwitchingPattern":
        return self._combine(other, np.add)

    def __sub__(self, other: "SwitchingPattern") -> "SwitchingPattern":
        return self._combine(other, np.subtract)

    def __neg__(self) -> "SwitchingPattern":
        return SwitchingPattern(self.period, self.times, -self.levels, -self.initial_level)

    def shifted(self, dt: float) -> "SwitchingPattern":
        """Pattern delayed by ``dt`` seconds (wrapped into one period)."""
        if not self.times.size:
            return self
        t = np.mod(self.times + dt, self.period)
        t[t >= self.period] = 0.0
        order = np.argsort(t, kind="stable")
        levels = self.levels[order]
        return SwitchingPattern(self.period, t[order], levels, int(levels[-1]))
