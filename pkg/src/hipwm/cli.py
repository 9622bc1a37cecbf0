"""hipwm command-line tool.

Exit status: 0 on success, 1 for configuration or usage errors, 2 when a
computation fails numerically.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from pathlib import Path

import numpy as np

from . import acoustics as ac
from . import reference as ref
from .config import AMPLITUDE_K_GRID, RunConfig, load_config, with_overrides
from .errors import ConfigError, InvalidParameterError, NumericFailureError
from .modulation import solve_amplitude_parameter, truncation_instants
from .spectral import HarmonicTable, current_spectrum
from .runner import compare, resonance_rows, run_case, structural_resonances, sweep_k

SYNTH_WAVE_HEADER = ("t", "value")
HARMONIC_HEADER = ("order", "freq_hz", "amplitude", "percent")
SWEEP_HEADER = ("K", "A_M", "t1_ms", "max_mod_order", "thd_pct", "vrms_fund", "risk_score")
COMPARE_HEADER = ("strategy", "thd_pct", "vrms_fund", "events_per_period", "risk_score")
RESONANCE_HEADER = ("structure", "m", "n", "branch", "frequency_hz")
RISK_HEADER = ("force_frequency", "nearest_resonance", "mode", "separation", "order", "percent",
               "contribution")

STATOR_NOTE = (
    "note: with the default profile (D_c=0.176 m, rho=7700 kg/m^3) the m=0 ring mode is about "
    "9.66 kHz, not the published 2920.6 Hz. The published stator values are reproduced by "
    "configs/published_stator.json (D_c=0.186 m, rho=7700*9.8)."
)


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(1, f"{self.prog}: error: {message}\n")


def _fmt(v):
    if isinstance(v, (bool, np.bool_)):
        return str(bool(v)).lower()
    if isinstance(v, (float, np.floating)):
        return repr(float(v))
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    if isinstance(v, tuple):
        return " ".join(_fmt(x) for x in v)
    return str(v)


def render(records: list[dict], header, fmt: str) -> str:
    if fmt == "json":
        clean = [{k: _jsonable(r[k]) for k in header} for r in records]
        return json.dumps(clean, indent=2) + "\n"
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for r in records:
        w.writerow([_fmt(r[k]) for k in header])
    return buf.getvalue()


def _jsonable(v):
    if isinstance(v, (np.floating, float)):
        return float(v)
    if isinstance(v, (np.integer,)):
        return int(v)
    if isinstance(v, tuple):
        return [_jsonable(x) for x in v]
    return v


def _write(out_dir: Path, stem: str, records, header, fmt) -> Path:
    out_dir.mkdir(parents=True, exist_ok=True)
    path = out_dir / f"{stem}.{fmt}"
    path.write_text(render(records, header, fmt))
    return path


# -- subcommands -------------------------------------------------------------

def cmd_synth(cfg: RunConfig, out: Path, fmt: str, echo) -> int:
    res = run_case(cfg)
    n = cfg.output.waveform_samples
    T = res.pattern.period
    t = np.arange(n) * (T / n)
    v = res.pattern.level_at(t) * res.scale
    wave = [{"t": float(a), "value": float(b)} for a, b in zip(t, v)]
    harm = [dict(zip(HARMONIC_HEADER, row)) for row in res.table.rows()]
    p1 = _write(out, "waveform", wave, SYNTH_WAVE_HEADER, fmt)
    p2 = _write(out, "harmonics", harm, HARMONIC_HEADER, fmt)
    cur = current_spectrum(res.table, cfg.analysis.load_R, cfg.analysis.load_L)
    p3 = _write(out, "current_harmonics", [dict(zip(HARMONIC_HEADER, row)) for row in cur.rows()],
                HARMONIC_HEADER, fmt)
    label = res.kind.value + (f" K={res.K!r}" if res.K is not None else "")
    echo(f"{label}: THD (orders 2..{res.table.max_order}) = {res.thd_pct!r} %")
    echo(f"{label}: fundamental RMS = {res.vrms_fund!r} V ({cfg.analysis.quantity} voltage)")
    echo(f"{label}: R-L load current THD = {cur.thd_percent!r} %")
    echo(f"wrote {p1}, {p2} and {p3}")
    return 0


def cmd_sweep_k(cfg: RunConfig, out: Path, fmt: str, echo) -> int:
    rows = sweep_k(cfg)
    path = _write(out, "sweep_k", rows, SWEEP_HEADER, fmt)
    echo(_table(rows, SWEEP_HEADER))
    echo(f"wrote {path}")
    return 0


def cmd_compare(cfg: RunConfig, out: Path, fmt: str, echo) -> int:
    rows = compare(cfg)
    path = _write(out, "compare", rows, COMPARE_HEADER, fmt)
    echo(_table(rows, COMPARE_HEADER))
    echo(f"wrote {path}")
    return 0


def _read_harmonics(path: Path, f: float):
    """Load a harmonics CSV/JSON written by ``synth`` back into a HarmonicTable."""
    text = path.read_text()
    if path.suffix == ".json":
        recs = json.loads(text)
    else:
        recs = list(csv.DictReader(io.StringIO(text)))
    try:
        orders = np.array([int(r["order"]) for r in recs])
        amp = np.array([float(r["amplitude"]) for r in recs])
    except (KeyError, ValueError) as err:
        raise ConfigError(f"spectrum file {path} is not a harmonics table: {err}") from None
    if orders.size == 0 or orders[0] != 1:
        raise ConfigError(f"spectrum file {path} must start at order 1")
    return HarmonicTable(orders, amp, np.zeros_like(amp), f)


def cmd_resonance(cfg: RunConfig, out: Path, fmt: str, echo, spectrum: str | None = None) -> int:
    if cfg.motor is None:
        raise ConfigError("motor: a motor profile is required for resonance")
    rows = resonance_rows(cfg)
    path = _write(out, "resonance", rows, RESONANCE_HEADER, fmt)
    echo(_table(rows, RESONANCE_HEADER))
    echo(STATOR_NOTE)
    echo(f"wrote {path}")
    if spectrum:
        table = _read_harmonics(Path(spectrum), cfg.modulating.f)
        report = ac.resonance_risk(table, structural_resonances(cfg), cfg.motor.risk_window,
                                   threshold=cfg.motor.risk_threshold)
        recs = [e.__dict__ for e in report.entries]
        rpath = _write(out, "risk", recs, RISK_HEADER, fmt)
        echo(_table(recs, RISK_HEADER) if recs else "no force line within the risk window")
        echo(f"risk score = {report.score!r}")
        echo(f"wrote {rpath}")
    return 0


def cmd_reproduce(cfg: RunConfig, out: Path, fmt: str, echo) -> int:
    """Sweep, comparison and resonance tables plus a plain-text summary."""
    sweep_rows, compare_rows = sweep_k(cfg), compare(cfg)
    _write(out, "sweep_k", sweep_rows, SWEEP_HEADER, fmt)
    _write(out, "compare", compare_rows, COMPARE_HEADER, fmt)
    cmd_resonance(cfg, out, fmt, lambda *_: None)
    lines = ["reproduction summary", ""]
    lines.append("amplitude parameter and truncation instant (computed vs published)")
    lines.append("K, t1_ms, t1_ms_pub, A_M(11), A_M(11)_pub, A_M(15), A_M(15)_pub")
    for K in AMPLITUDE_K_GRID:
        t1p, a11p, a15p, _ = ref.AMPLITUDE_TABLE[K]
        t1 = truncation_instants(K, 50.0).t1 * 1e3
        lines.append(", ".join(_fmt(x) for x in (
            K, t1, t1p, solve_amplitude_parameter(11, K), a11p, solve_amplitude_parameter(15, K), a15p)))
    lines += ["", "strategy comparison (simulated; published values are hardware measurements)"]
    for r in compare_rows:
        pub = ref.MEASURED_STRATEGIES.get(r["strategy"])
        extra = f" | measured THD {pub[0]} %, V_RMS {pub[1]} V" if pub else ""
        lines.append(f"{r['strategy']}: THD {r['thd_pct']:.3f} %, V1 {r['vrms_fund']:.2f} V, "
                     f"events {r['events_per_period']}{extra}")
    lines += ["", "truncation sweep (simulated THD vs measured THD)"]
    for r in sweep_rows:
        pub = ref.MEASURED_TRUNCATED.get(r["K"])
        extra = f" | measured {pub[0]} %" if pub else ""
        lines.append(f"K={r['K']}: THD {r['thd_pct']:.3f} %, V1 {r['vrms_fund']:.2f} V{extra}")
    lines += ["", STATOR_NOTE]
    summary = out / "summary.txt"
    summary.write_text("\n".join(lines) + "\n")
    echo("\n".join(lines))
    echo(f"wrote {summary}")
    return 0


def _table(rows, header) -> str:
    def cell(v):
        if isinstance(v, float):
            return f"{v:.6g}"
        return _fmt(v)

    body = [[cell(r[h]) for h in header] for r in rows]
    widths = [max(len(h), *(len(b[i]) for b in body)) if body else len(h) for i, h in enumerate(header)]
    out = ["  ".join(h.rjust(w) for h, w in zip(header, widths))]
    out += ["  ".join(c.rjust(w) for c, w in zip(b, widths)) for b in body]
    return "\n".join(out)


# -- argument handling ---------------------------------------------------------

def _floats(text: str) -> list[float]:
    try:
        return [float(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}") from None


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="JSON run configuration (default: $HIPWM_CONFIG)")
    common.add_argument("--out", help="output directory")
    common.add_argument("--format", choices=("csv", "json"))
    common.add_argument("--k", type=_floats, help="truncation level; a comma list for sweep-k")
    common.add_argument("--m-bar", type=int, dest="m_bar")
    common.add_argument("--strategy", help="strategy kind; a comma list for compare")
    common.add_argument("--cells", type=int)
    common.add_argument("--vdc", type=float)
    common.add_argument("--f", type=float, dest="f_fund")
    common.add_argument("--samples", type=int)
    common.add_argument("--max-order", type=int, dest="max_order")
    common.add_argument("--jobs", type=int)
    common.add_argument("--print-config", action="store_true",
                        help="echo the resolved configuration and exit")

    p = _Parser(prog="hipwm", description="Truncated FM-carrier PWM simulator for CHB inverters.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)
    sub.add_parser("synth", parents=[common], help="one waveform and its harmonic table")
    sub.add_parser("sweep-k", parents=[common], help="truncated-carrier sweep over K")
    sub.add_parser("compare", parents=[common], help="strategy comparison table")
    r = sub.add_parser("resonance", parents=[common], help="motor resonance table and risk report")
    r.add_argument("--spectrum", help="harmonics file from synth to score against the resonances")
    sub.add_parser("reproduce-paper", parents=[common], help="run every table and write a summary")
    return p


def _overrides(args) -> dict:
    o = {}
    if args.k is not None:
        if args.command == "sweep-k":
            o["sweep.K"] = args.k
        elif len(args.k) == 1:
            o["carrier.K"] = args.k[0]
        else:
            raise ConfigError(f"--k takes a single value for {args.command}")
    if args.strategy is not None:
        kinds = [s.strip() for s in args.strategy.split(",") if s.strip()]
        if args.command == "compare":
            o["strategies"] = kinds
        elif len(kinds) == 1:
            o["strategy"] = kinds[0]
        else:
            raise ConfigError(f"--strategy takes a single value for {args.command}")
    simple = {"m_bar": "carrier.M_bar", "cells": "topology.cells", "vdc": "topology.vdc",
              "f_fund": "modulating.f", "samples": "analysis.samples_per_period",
              "max_order": "analysis.max_order", "out": "output.dir", "format": "output.format",
              "jobs": "jobs"}
    for attr, key in simple.items():
        v = getattr(args, attr)
        if v is not None:
            o[key] = v
    return o


COMMANDS = {
    "synth": cmd_synth,
    "sweep-k": cmd_sweep_k,
    "compare": cmd_compare,
    "resonance": cmd_resonance,
    "reproduce-paper": cmd_reproduce,
}


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)

    def echo(msg=""):
        print(msg)

    try:
        cfg = with_overrides(load_config(args.config), _overrides(args))
        if args.print_config:
            echo(cfg.to_json())
            return 0
        if args.command == "compare" and len(set(cfg.strategies)) < 2:
            raise ConfigError("strategies: compare needs at least two distinct strategies")
        out = Path(cfg.output.dir)
        fmt = cfg.output.format
        if args.command == "resonance":
            return cmd_resonance(cfg, out, fmt, echo, args.spectrum)
        return COMMANDS[args.command](cfg, out, fmt, echo)
    except (ConfigError, InvalidParameterError) as err:
        print(f"hipwm: configuration error: {err}", file=sys.stderr)
        return 1
    except (NumericFailureError, ArithmeticError) as err:
        print(f"hipwm: numeric failure: {err}", file=sys.stderr)
        return 2
    except OSError as err:
        print(f"hipwm: I/O error: {err}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
