"""Cascaded H-bridge gating and phase/line voltage synthesis."""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import InvalidParameterError
from .modulation import (
    DEFAULT_INJECTION,
    CarrierSpec,
    ModulatingSpec,
    comparator_events,
)
from .patterns import SwitchingPattern


class StrategyKind(str, enum.Enum):
    SPWM_I = "SPWM_I"            # level-shifted carriers, sine modulator
    SPWM_II = "SPWM_II"          # phase-shifted carriers, sine modulator
    SPWM_III = "SPWM_III"        # phase-shifted carriers, harmonic-injected modulator
    HIPWM_FMTCt = "HIPWM_FMTCt"  # phase-shifted truncated FM carriers, injected modulator

    @property
    def level_shifted(self) -> bool:
        return self is StrategyKind.SPWM_I

    @property
    def injected(self) -> bool:
        return self in (StrategyKind.SPWM_III, StrategyKind.HIPWM_FMTCt)


@dataclass(frozen=True)
class ChbTopology:
    cells_per_phase: int = 2
    vdc_per_cell: float = 75.0
    phases: int = 3

    def __post_init__(self):
        if int(self.cells_per_phase) != self.cells_per_phase or self.cells_per_phase < 1:
            raise InvalidParameterError(f"cells_per_phase must be >= 1, got {self.cells_per_phase}")
        if not self.vdc_per_cell > 0:
            raise InvalidParameterError(f"vdc_per_cell must be > 0, got {self.vdc_per_cell}")
        if int(self.phases) != self.phases or self.phases < 1:
            raise InvalidParameterError(f"phases must be >= 1, got {self.phases}")

    @property
    def levels(self) -> int:
        """Number of distinct phase-voltage levels."""
        return 2 * self.cells_per_phase + 1


@dataclass(frozen=True)
class StrategyConfig:
    """Modulation strategy.

    ``align_truncation`` (truncated carriers only) adds a common carrier phase
    so that no cell's carrier freezes at a triangle vertex when a truncation
    window opens; a carrier parked at +1 or -1 would hold that H-bridge at
    zero output through the window instead of at full voltage.
    """

    kind: StrategyKind
    modulating: ModulatingSpec
    carrier: CarrierSpec
    align_truncation: bool = True

    def __post_init__(self):
        kind = StrategyKind(self.kind)
        object.__setattr__(self, "kind", kind)
        if kind is StrategyKind.HIPWM_FMTCt and not self.carrier.is_fmtc:
            raise InvalidParameterError("HIPWM_FMTCt requires an FMTC_truncated carrier")
        if kind is not StrategyKind.HIPWM_FMTCt and self.carrier.is_fmtc:
            raise InvalidParameterError(f"{kind.value} requires a fixed-frequency carrier")

    @classmethod
    def build(cls, kind, f_fund: float = 50.0, M_bar: int = 15, amplitude: float = 1.0,
              K: float = 0.55, injection: Sequence[tuple[int, float]] | None = None,
              align_truncation: bool = True):
        """Standard configuration: sine or injected modulator, carrier at M_bar * f."""
        kind = StrategyKind(kind)
        if kind.injected:
            mod = ModulatingSpec.injected(f_fund, amplitude, tuple(injection or DEFAULT_INJECTION))
        else:
            mod = ModulatingSpec.sine(f_fund, amplitude)
        if kind is StrategyKind.HIPWM_FMTCt:
            carrier = CarrierSpec.fmtc(M_bar, K)
        else:
            carrier = CarrierSpec.fixed(M_bar * f_fund, M_bar=M_bar)
        return cls(kind, mod, carrier, align_truncation)

    @property
    def M_bar(self) -> int | None:
        return self.carrier.M_bar


@dataclass(frozen=True)
class GateAssignment:
    """One comparator: ``leg`` of ``cell`` compares its modulator with a carrier.

    ``band`` is the amplitude range the carrier physically occupies. For the
    level-shifted right leg the comparison sense is inverted (gate on while
    the modulator is below a negative band carrier).
    """

    cell: int
    leg: str
    modulator_phase: float
    carrier_offset: float
    band: tuple[float, float] = (-1.0, 1.0)
    inverted: bool = False


def truncation_alignment(M_bar: int, cells: int) -> float:
    """Carrier phase (cycles) placing every frozen carrier midway between vertices.

    At the start of a window the in-phase carrier has advanced M_bar/4 cycles;
    shifting by this amount puts all cell carriers half a cell spacing away
    from the vertex lattice.
    """
    step = 1.0 / (2 * cells)
    delta = (step / 2.0 - M_bar / 4.0) % step
    return 0.0 if math.isclose(delta, step) else delta


def gate_assignments(kind, topology: ChbTopology) -> list[GateAssignment]:
    kind = StrategyKind(kind)
    N = topology.cells_per_phase
    out = []
    for j in range(N):
        if kind.level_shifted:
            # phase disposition: cell j owns the j-th band above zero and its mirror below
            upper = (j / N, (j + 1) / N)
            lower = (-(j + 1) / N, -j / N)
            out.append(GateAssignment(j, "left", 0.0, 0.0, upper))
            out.append(GateAssignment(j, "right", 0.0, 0.0, lower, inverted=True))
        else:
            offset = j / (2 * N)
            out.append(GateAssignment(j, "left", 0.0, offset))
            out.append(GateAssignment(j, "right", math.pi, offset))
    return out


def _gate_pattern(strategy: StrategyConfig, mod: ModulatingSpec, g: GateAssignment, base: float):
    carrier = strategy.carrier.with_offset(base + g.carrier_offset).with_band(g.band)
    latch = strategy.kind is StrategyKind.HIPWM_FMTCt
    if not g.inverted:
        return comparator_events(mod, carrier, g.modulator_phase, latch)
    # m < c(band) is -m > c(mirrored band) with the triangle shifted half a cycle
    lo, hi = g.band
    mirrored = carrier.with_band((-hi, -lo)).with_offset(base + g.carrier_offset + 0.5)
    return comparator_events(mod, mirrored, g.modulator_phase + math.pi, latch)


@dataclass(frozen=True, eq=False)
class PhaseWaveform:
    topology: ChbTopology
    cell_patterns: tuple[SwitchingPattern, ...]
    gate_patterns: tuple[SwitchingPattern, ...]
    pattern: SwitchingPattern
    mod_phase: float = 0.0

    @property
    def vdc(self) -> float:
        return self.topology.vdc_per_cell

    @property
    def period(self) -> float:
        return self.pattern.period

    def volts_at(self, t):
        return self.pattern.level_at(t) * self.vdc

    @property
    def switching_events(self) -> int:
        """Gate transitions per period summed over every switch leg of the phase."""
        return sum(g.n_events for g in self.gate_patterns)


@dataclass(frozen=True, eq=False)
class LineWaveform:
    topology: ChbTopology
    pattern: SwitchingPattern
    phase_a: PhaseWaveform
    phase_b: PhaseWaveform

    @property
    def vdc(self) -> float:
        return self.topology.vdc_per_cell

    @property
    def period(self) -> float:
        return self.pattern.period

    def volts_at(self, t):
        return self.pattern.level_at(t) * self.vdc


def synthesize_phase(strategy: StrategyConfig, topology: ChbTopology,
                     mod_phase: float = 0.0) -> PhaseWaveform:
    """Exact phase voltage of one CHB leg; ``mod_phase`` is that phase's angle."""
    mod = strategy.modulating.with_phase(strategy.modulating.phase_offset + mod_phase)
    base = strategy.carrier.phase_offset_cycles
    if strategy.kind is StrategyKind.HIPWM_FMTCt and strategy.align_truncation:
        base += truncation_alignment(strategy.carrier.M_bar, topology.cells_per_phase)
    gates = {}
    for g in gate_assignments(strategy.kind, topology):
        gates[(g.cell, g.leg)] = _gate_pattern(strategy, mod, g, base)
    cells = tuple(
        gates[(j, "left")] - gates[(j, "right")] for j in range(topology.cells_per_phase)
    )
    total = cells[0]
    for c in cells[1:]:
        total = total + c
    return PhaseWaveform(topology, cells, tuple(gates.values()), total, mod_phase)


def synthesize_line(strategy: StrategyConfig, topology: ChbTopology) -> LineWaveform:
    """Line voltage a - b, phase b lagging by 2*pi/3."""
    if topology.phases < 2:
        raise InvalidParameterError("a line voltage needs at least two phases")
    a = synthesize_phase(strategy, topology, 0.0)
    b = synthesize_phase(strategy, topology, -2.0 * math.pi / 3.0)
    return LineWaveform(topology, a.pattern - b.pattern, a, b)


def line_from_phase(phase: PhaseWaveform) -> SwitchingPattern:
    """Line voltage rebuilt from a single phase by a one-third-period delay.

    Valid because every phase is a time-shifted copy of phase a.
    """
    return phase.pattern - phase.pattern.shifted(phase.period / 3.0)


def phase_volt_seconds(phase: PhaseWaveform) -> float:
    return phase.pattern.mean_level() * phase.vdc


def all_levels_valid(pattern: SwitchingPattern, bound: int) -> bool:
    return bool(np.all(np.abs(np.asarray(sorted(pattern.level_set))) <= bound))
