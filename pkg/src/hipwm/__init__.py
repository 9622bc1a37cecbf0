"""Simulation of truncated frequency-modulated carrier PWM for cascaded H-bridge inverters.

Exact switching-event synthesis, synchronous harmonic analysis and motor
resonance screening.
"""

from .acoustics import (
    HousingGeometry,
    MaterialSpec,
    RiskReport,
    StatorGeometry,
    carrier_sideband_frequencies,
    cylinder_root,
    housing_resonances,
    resonance_risk,
    rotor_force_frequencies,
    stator_force_frequencies,
    stator_resonance,
    thickness_parameter,
    tooth_harmonic_orders,
)
from .errors import ConfigError, HipwmError, InvalidParameterError, NumericFailureError
from .inverter import (
    ChbTopology,
    StrategyConfig,
    StrategyKind,
    gate_assignments,
    synthesize_line,
    synthesize_phase,
)
from .modulation import (
    CarrierKind,
    CarrierSpec,
    ModulatingSpec,
    TruncationWindow,
    carrier_phase,
    carrier_value,
    comparator_events,
    instantaneous_pulsation,
    solve_amplitude_parameter,
    truncation_instants,
)
from .patterns import SwitchingPattern
from .spectral import (
    HarmonicTable,
    SampledWaveform,
    current_spectrum,
    fundamental_rms,
    parseval_check,
    sample_pattern,
    spectrum,
    thd,
)

__version__ = "0.1.0"

__all__ = [
    "ConfigError",
    "HipwmError",
    "InvalidParameterError",
    "NumericFailureError",
    "SwitchingPattern",
    "HousingGeometry",
    "MaterialSpec",
    "RiskReport",
    "StatorGeometry",
    "carrier_sideband_frequencies",
    "cylinder_root",
    "housing_resonances",
    "resonance_risk",
    "rotor_force_frequencies",
    "stator_force_frequencies",
    "stator_resonance",
    "thickness_parameter",
    "tooth_harmonic_orders",
    "ChbTopology",
    "StrategyConfig",
    "StrategyKind",
    "gate_assignments",
    "synthesize_line",
    "synthesize_phase",
    "CarrierKind",
    "CarrierSpec",
    "ModulatingSpec",
    "TruncationWindow",
    "carrier_phase",
    "carrier_value",
    "comparator_events",
    "instantaneous_pulsation",
    "solve_amplitude_parameter",
    "truncation_instants",
    "HarmonicTable",
    "SampledWaveform",
    "current_spectrum",
    "fundamental_rms",
    "parseval_check",
    "sample_pattern",
    "spectrum",
    "thd",
]
