"""Run configuration: a single JSON document validated with pydantic."""

from __future__ import annotations

import json
import os
from pathlib import Path
from typing import Literal, Optional

from pydantic import BaseModel, ConfigDict, Field, ValidationError, field_validator, model_validator

from .acoustics import HousingGeometry, MaterialSpec, StatorGeometry
from .errors import ConfigError
from .inverter import ChbTopology, StrategyConfig, StrategyKind
from .modulation import DEFAULT_INJECTION, CarrierSpec, ModulatingSpec

CONFIG_ENV_VAR = "HIPWM_CONFIG"
K_MAX = 0.95
MEASURED_K_GRID = (0.3, 0.4, 0.45, 0.5, 0.55, 0.6, 0.65, 0.7, 0.75, 0.8)
AMPLITUDE_K_GRID = (0.2, 0.3, 0.4, 0.45, 0.5, 0.55, 0.6, 0.7, 0.8)


class _Model(BaseModel):
    model_config = ConfigDict(extra="forbid", frozen=True)


def _check_k(v: float) -> float:
    if not 0.0 <= v <= K_MAX:
        raise ValueError(f"K must lie in [0, {K_MAX}], got {v}")
    return v


class TopologyConfig(_Model):
    cells: int = Field(2, ge=1, le=16)
    vdc: float = Field(75.0, gt=0)
    phases: int = Field(3, ge=1, le=3)


class ModulatingConfig(_Model):
    f: float = Field(50.0, gt=0)
    m_a: float = Field(1.0, gt=0, le=1.2)
    injection: list[tuple[int, float]] = Field(default_factory=lambda: [tuple(h) for h in DEFAULT_INJECTION])

    @field_validator("injection")
    @classmethod
    def _odd_orders(cls, v):
        for order, _ in v:
            if order < 1 or order % 2 == 0:
                raise ValueError(f"injected harmonic orders must be odd and positive, got {order}")
        return v


class CarrierConfig(_Model):
    M_bar: int = Field(15, ge=1)
    K: float = 0.55
    f_carrier: Optional[float] = Field(None, gt=0)
    align_truncation: bool = True

    @field_validator("K")
    @classmethod
    def _k_range(cls, v):
        return _check_k(v)

    @field_validator("M_bar")
    @classmethod
    def _odd(cls, v):
        if v % 2 == 0:
            raise ValueError(f"M_bar must be odd, got {v}")
        return v


class AnalysisConfig(_Model):
    samples_per_period: int = 65536
    max_order: int = Field(50, ge=2)
    quantity: Literal["line", "phase"] = "line"
    method: Literal["sampled", "exact"] = "sampled"
    load_R: float = Field(3.5, ge=0)
    load_L: float = Field(10e-3, ge=0)

    @field_validator("samples_per_period")
    @classmethod
    def _pow2(cls, v):
        if v < 4096 or v & (v - 1):
            raise ValueError(f"samples_per_period must be a power of two >= 4096, got {v}")
        return v

    @model_validator(mode="after")
    def _order_fits(self):
        if self.max_order > self.samples_per_period // 2:
            raise ValueError("max_order exceeds samples_per_period / 2")
        return self


class MaterialConfig(_Model):
    E: float = Field(200e9, gt=0)
    rho: float = Field(7700.0, gt=0)
    nu: float = Field(0.3, ge=0, lt=0.5)

    def build(self) -> MaterialSpec:
        return MaterialSpec(self.E, self.rho, self.nu)


class StatorConfig(_Model):
    D_c: float = Field(0.176, gt=0)
    h_c: float = Field(0.01, gt=0)
    L_s: float = Field(0.25, gt=0)
    s1: int = Field(36, ge=1)
    s2: int = Field(26, ge=1)
    p: int = Field(2, ge=1)
    h_t: float = Field(0.008, gt=0)
    c_t: float = Field(0.0087, gt=0)

    def build(self) -> StatorGeometry:
        return StatorGeometry(**self.model_dump())


class HousingConfig(_Model):
    D_f: float = Field(0.24, gt=0)
    h_f: float = Field(0.01, gt=0)
    L_f: float = Field(0.30, gt=0)
    material: MaterialConfig = MaterialConfig(E=70e9, rho=2700.0, nu=0.33)

    def build(self) -> HousingGeometry:
        return HousingGeometry(self.D_f, self.h_f, self.L_f, self.material.build())


class MotorConfig(_Model):
    stator: StatorConfig = StatorConfig()
    material: MaterialConfig = MaterialConfig()
    housing: HousingConfig = HousingConfig()
    m_max: int = Field(5, ge=0, le=20)
    n_max: int = Field(3, ge=1, le=10)
    mass_addition: float = Field(0.0, ge=0)
    extra_resonances: list[float] = Field(default_factory=lambda: [1500.0, 1600.0])
    risk_window: float = Field(75.0, gt=0)
    risk_threshold: float = Field(0.5, ge=0)


class SweepConfig(_Model):
    K: list[float] = Field(default_factory=lambda: list(MEASURED_K_GRID))

    @field_validator("K")
    @classmethod
    def _grid(cls, v):
        if not v:
            raise ValueError("K grid must not be empty")
        return [_check_k(k) for k in v]


class OutputConfig(_Model):
    dir: str = "out"
    format: Literal["csv", "json"] = "csv"
    waveform_samples: int = Field(4096, ge=16)


class RunConfig(_Model):
    strategy: StrategyKind = StrategyKind.HIPWM_FMTCt
    strategies: list[StrategyKind] = Field(
        default_factory=lambda: [StrategyKind.SPWM_I, StrategyKind.SPWM_II,
                                 StrategyKind.SPWM_III, StrategyKind.HIPWM_FMTCt]
    )
    topology: TopologyConfig = TopologyConfig()
    modulating: ModulatingConfig = ModulatingConfig()
    carrier: CarrierConfig = CarrierConfig()
    analysis: AnalysisConfig = AnalysisConfig()
    motor: Optional[MotorConfig] = MotorConfig()
    sweep: SweepConfig = SweepConfig()
    output: OutputConfig = OutputConfig()
    jobs: int = Field(1, ge=1, le=64)

    @model_validator(mode="after")
    def _three_phase_order(self):
        if self.topology.phases == 3 and self.carrier.M_bar % 3:
            raise ValueError(
                f"carrier.M_bar must be an odd multiple of 3 for three-phase use, got {self.carrier.M_bar}"
            )
        if self.analysis.quantity == "line" and self.topology.phases < 2:
            raise ValueError("analysis.quantity 'line' needs topology.phases >= 2")
        return self

    # -- builders ------------------------------------------------------

    def topology_model(self) -> ChbTopology:
        t = self.topology
        return ChbTopology(t.cells, t.vdc, t.phases)

    def strategy_model(self, kind=None, K: float | None = None) -> StrategyConfig:
        kind = StrategyKind(kind or self.strategy)
        m, c = self.modulating, self.carrier
        if kind.injected:
            mod = ModulatingSpec.injected(m.f, m.m_a, tuple(tuple(h) for h in m.injection))
        else:
            mod = ModulatingSpec.sine(m.f, m.m_a)
        if kind is StrategyKind.HIPWM_FMTCt:
            carrier = CarrierSpec.fmtc(c.M_bar, c.K if K is None else K)
        else:
            carrier = CarrierSpec.fixed(c.f_carrier or c.M_bar * m.f, M_bar=c.M_bar)
        return StrategyConfig(kind, mod, carrier, c.align_truncation)

    def to_json(self) -> str:
        return json.dumps(self.model_dump(mode="json"), indent=2, sort_keys=True)


def _format_errors(err: ValidationError) -> str:
    lines = []
    for e in err.errors():
        loc = ".".join(str(x) for x in e["loc"]) or "<root>"
        lines.append(f"{loc}: {e['msg']}")
    return "; ".join(lines)


def parse_config(data: dict) -> RunConfig:
    try:
        return RunConfig.model_validate(data)
    except ValidationError as err:
        raise ConfigError(f"invalid configuration: {_format_errors(err)}") from None


def load_config(path: str | os.PathLike | None = None) -> RunConfig:
    """Load a config file; ``None`` falls back to $HIPWM_CONFIG, then to defaults."""
    if path is None:
        path = os.environ.get(CONFIG_ENV_VAR) or None
    if path is None:
        return RunConfig()
    p = Path(path)
    try:
        data = json.loads(p.read_text())
    except FileNotFoundError:
        raise ConfigError(f"config file not found: {p}") from None
    except json.JSONDecodeError as err:
        raise ConfigError(f"config file {p} is not valid JSON: {err}") from None
    if not isinstance(data, dict):
        raise ConfigError(f"config file {p} must hold a JSON object")
    data.pop("_comment", None)
    return parse_config(data)


def with_overrides(cfg: RunConfig, overrides: dict) -> RunConfig:
    """Apply dotted-path overrides (``"carrier.K": 0.4``) and re-validate."""
    data = cfg.model_dump(mode="json")
    for dotted, value in overrides.items():
        node = data
        *parents, leaf = dotted.split(".")
        for key in parents:
            if node.get(key) is None:
                node[key] = {}
            node = node[key]
        node[leaf] = value
    return parse_config(data)
