"""Config-driven batch computations behind the command-line tool."""

from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

from . import acoustics as ac
from .config import RunConfig
from .errors import InvalidParameterError
from .inverter import StrategyKind, synthesize_line, synthesize_phase
from .modulation import solve_amplitude_parameter, truncation_instants
from .spectral import HarmonicTable, analyze


@dataclass(frozen=True, eq=False)
class CaseResult:
    kind: StrategyKind
    K: float | None
    table: HarmonicTable
    thd_pct: float
    vrms_fund: float
    events_per_period: int
    risk_score: float
    pattern: object
    scale: float


def structural_resonances(cfg: RunConfig) -> list[ac.Resonance]:
    """Stator modes, casing modes and any extra (measured) resonances from the motor profile."""
    motor = cfg.motor
    if motor is None:
        return []
    g, mat = motor.stator.build(), motor.material.build()
    out = [ac.Resonance(ac.stator_resonance(m, g, mat, motor.mass_addition), (m, 0), "stator")
           for m in range(motor.m_max + 1)]
    hg = motor.housing.build()
    for n in range(1, motor.n_max + 1):
        for m in range(motor.m_max + 1):
            out.append(ac.Resonance(ac.housing_resonances(m, n, hg), (m, n), "housing"))
    out.extend(ac.Resonance(float(f), (), "extra") for f in motor.extra_resonances)
    return out


def run_case(cfg: RunConfig, kind=None, K: float | None = None) -> CaseResult:
    kind = StrategyKind(kind or cfg.strategy)
    strategy = cfg.strategy_model(kind, K)
    topo = cfg.topology_model()
    phase = synthesize_phase(strategy, topo)
    if cfg.analysis.quantity == "line":
        pattern = synthesize_line(strategy, topo).pattern
    else:
        pattern = phase.pattern
    _, table = analyze(pattern, topo.vdc_per_cell, cfg.analysis.samples_per_period,
                       cfg.analysis.max_order, cfg.analysis.method)
    risk = 0.0
    if cfg.motor is not None:
        report = ac.resonance_risk(table, structural_resonances(cfg), cfg.motor.risk_window,
                                   threshold=cfg.motor.risk_threshold)
        risk = report.score
    k_used = strategy.carrier.K if kind is StrategyKind.HIPWM_FMTCt else None
    return CaseResult(kind, k_used, table, table.thd_percent, table.fundamental_rms,
                      phase.switching_events, risk, pattern, topo.vdc_per_cell)


def _sweep_point(args):
    cfg, K = args
    res = run_case(cfg, StrategyKind.HIPWM_FMTCt, K)
    M = cfg.carrier.M_bar
    A_M = solve_amplitude_parameter(M, K)
    t1_ms = truncation_instants(K, cfg.modulating.f).t1 * 1e3
    return {
        "K": K,
        "A_M": A_M,
        "t1_ms": t1_ms,
        "max_mod_order": A_M * (1.0 - K),
        "thd_pct": res.thd_pct,
        "vrms_fund": res.vrms_fund,
        "risk_score": res.risk_score,
    }


def _map(fn, items, jobs: int):
    if jobs <= 1 or len(items) <= 1:
        return [fn(x) for x in items]
    with ProcessPoolExecutor(max_workers=min(jobs, len(items))) as pool:
        return list(pool.map(fn, items))  # map keeps input order


def sweep_k(cfg: RunConfig) -> list[dict]:
    return _map(_sweep_point, [(cfg, K) for K in cfg.sweep.K], cfg.jobs)


def _compare_point(args):
    cfg, kind = args
    res = run_case(cfg, kind)
    return {
        "strategy": res.kind.value,
        "thd_pct": res.thd_pct,
        "vrms_fund": res.vrms_fund,
        "events_per_period": res.events_per_period,
        "risk_score": res.risk_score,
    }


def compare(cfg: RunConfig) -> list[dict]:
    kinds = list(dict.fromkeys(StrategyKind(k) for k in cfg.strategies))
    if len(kinds) < 2:
        raise InvalidParameterError("compare needs at least two distinct strategies")
    return _map(_compare_point, [(cfg, k) for k in kinds], cfg.jobs)


def resonance_rows(cfg: RunConfig) -> list[dict]:
    """Stator modes (both branches), casing (m, n) grid and the lambda -> 0 check row."""
    motor = cfg.motor
    if motor is None:
        raise InvalidParameterError("resonance needs a motor profile")
    g, mat = motor.stator.build(), motor.material.build()
    rows = []
    for m in range(motor.m_max + 1):
        for branch in ("lower", "upper") if m else ("lower",):
            rows.append({
                "structure": "stator", "m": m, "n": 0, "branch": branch,
                "frequency_hz": ac.stator_resonance(m, g, mat, motor.mass_addition, branch),
            })
    hg = motor.housing.build()
    for n in range(1, motor.n_max + 1):
        for m in range(motor.m_max + 1):
            rows.append({"structure": "housing", "m": m, "n": n, "branch": "lowest",
                         "frequency_hz": ac.housing_resonances(m, n, hg)})
    # with no axial wavenumber the casing cubic must fall back to the ring breathing mode
    P = ac.housing_limit_root(0, hg.material.nu, hg.h_f ** 2 / (12.0 * hg.R_f ** 2))
    rows.append({"structure": "housing_limit", "m": 0, "n": 0,
                 "branch": "ok" if math.isclose(P, 1.0, rel_tol=1e-12) else "MISMATCH",
                 "frequency_hz": ac.ring_frequency(P, hg.D_f, hg.material)})
    return rows
