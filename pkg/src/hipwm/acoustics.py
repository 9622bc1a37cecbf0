"""Stator and housing natural frequencies, magnetic force frequencies, resonance risk."""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

import numpy as np

from .errors import InvalidParameterError, NumericFailureError
from .spectral import HarmonicTable

DEFAULT_RISK_WINDOW = 75.0
DEFAULT_RISK_THRESHOLD = 0.5
CUBIC_RESIDUAL_BOUND = 1e-9


def _positive(name, value):
    if not (isinstance(value, (int, float)) and math.isfinite(value) and value > 0):
        raise InvalidParameterError(f"{name} must be a positive finite number, got {value!r}")


def _natural(name, value):
    if isinstance(value, bool) or int(value) != value or value < 1:
        raise InvalidParameterError(f"{name} must be a natural number, got {value!r}")


@dataclass(frozen=True)
class MaterialSpec:
    E: float = 200e9
    rho: float = 7700.0
    nu: float = 0.3

    def __post_init__(self):
        _positive("E", self.E)
        _positive("rho", self.rho)
        if not 0.0 <= self.nu < 0.5:
            raise InvalidParameterError(f"nu must lie in [0, 0.5), got {self.nu}")

    @property
    def plate_speed(self) -> float:
        """sqrt(E / (rho (1 - nu^2))), m/s."""
        return math.sqrt(self.E / (self.rho * (1.0 - self.nu ** 2)))


STEEL = MaterialSpec()
CAST_ALUMINIUM = MaterialSpec(E=70e9, rho=2700.0, nu=0.33)


@dataclass(frozen=True)
class StatorGeometry:
    D_c: float = 0.176
    h_c: float = 0.01
    L_s: float = 0.25
    s1: int = 36
    s2: int = 26
    p: int = 2
    h_t: float = 0.008
    c_t: float = 0.0087

    def __post_init__(self):
        for name in ("D_c", "h_c", "L_s", "h_t", "c_t"):
            _positive(name, getattr(self, name))
        for name in ("s1", "s2", "p"):
            _natural(name, getattr(self, name))


@dataclass(frozen=True)
class HousingGeometry:
    # illustrative cast-aluminium frame; no casing dimensions are published for the test motor
    D_f: float = 0.24
    h_f: float = 0.01
    L_f: float = 0.30
    material: MaterialSpec = CAST_ALUMINIUM

    def __post_init__(self):
        for name in ("D_f", "h_f", "L_f"):
            _positive(name, getattr(self, name))
        if self.h_f >= self.D_f:
            raise InvalidParameterError("h_f must be smaller than D_f")

    @property
    def R_f(self) -> float:
        return self.D_f / 2.0


def thickness_parameter(g: StatorGeometry) -> float:
    """kappa^2 = h_c^2 / (3 D_c^2)."""
    return g.h_c ** 2 / (3.0 * g.D_c ** 2)


@dataclass(frozen=True)
class CylinderRoots:
    lower: float
    upper: float

    @property
    def primary(self) -> float:
        """The flexural (lower) branch."""
        return self.lower


def cylinder_root(m: int, kappa2: float) -> CylinderRoots:
    """Both roots of the infinite-cylinder equation of motion for mode ``m``.

    2 P^2 solves u^2 - (1 + m^2 + kappa2 m^4) u + kappa2 m^6 = 0. The
    breathing mode m = 0 is fixed at P = 1.
    """
    if int(m) != m or m < 0:
        raise InvalidParameterError(f"mode m must be a non-negative integer, got {m}")
    if kappa2 < 0:
        raise InvalidParameterError(f"kappa^2 must be >= 0, got {kappa2}")
    if m == 0:
        return CylinderRoots(1.0, 1.0)
    A = 1.0 + m ** 2 + kappa2 * m ** 4
    disc = A * A - 4.0 * kappa2 * m ** 6
    if disc < 0:
        raise NumericFailureError(f"negative discriminant {disc} for m={m}, kappa^2={kappa2}")
    r = math.sqrt(disc)
    # the small root via Vieta avoids cancellation when kappa2 m^6 << A^2
    w_hi = A + r
    w_lo = 4.0 * kappa2 * m ** 6 / w_hi
    return CylinderRoots(0.5 * math.sqrt(w_lo), 0.5 * math.sqrt(w_hi))


def ring_frequency(P: float, diameter: float, mat: MaterialSpec) -> float:
    """f = P / (pi D) * sqrt(E / (rho (1 - nu^2)))."""
    return P / (math.pi * diameter) * mat.plate_speed


def stator_resonance(m: int, g: StatorGeometry, mat: MaterialSpec = STEEL,
                     mass_addition: float = 0.0, branch: str = "lower") -> float:
    """Natural frequency (Hz) of circumferential mode ``m`` of the stator core.

    ``mass_addition`` is an optional ratio of tooth/winding mass to yoke
    mass; the frequency is divided by sqrt(1 + mass_addition).
    """
    if mass_addition < 0:
        raise InvalidParameterError(f"mass_addition must be >= 0, got {mass_addition}")
    if branch not in ("lower", "upper"):
        raise InvalidParameterError(f"branch must be 'lower' or 'upper', got {branch!r}")
    roots = cylinder_root(m, thickness_parameter(g))
    P = roots.lower if branch == "lower" else roots.upper
    return ring_frequency(P, g.D_c, mat) / math.sqrt(1.0 + mass_addition)


# -- finite casing ---------------------------------------------------------

@dataclass(frozen=True)
class HousingCoefficients:
    m: int
    n: int
    lam: float
    kappa2: float
    L0: float
    C2: float
    C1: float
    C0: float

    def residual(self, P: float) -> float:
        x = P * P
        return ((x - self.C2) * x + self.C1) * x - self.C0

    @property
    def scale(self) -> float:
        return max(1.0, abs(self.C2), abs(self.C1), abs(self.C0))


def housing_coefficients(m: int, n: int, hg: HousingGeometry) -> HousingCoefficients:
    if int(m) != m or m < 0:
        raise InvalidParameterError(f"circumferential mode m must be >= 0, got {m}")
    if int(n) != n or n < 1:
        raise InvalidParameterError(f"axial mode n must be >= 1, got {n}")
    L0 = hg.L_f * 0.3 / (n + 0.3)
    lam = 0.5 * n * math.pi * (hg.D_f - hg.h_f) / (hg.L_f - L0)
    # h_f^2 / (12 R_f^2) is the squared thickness parameter (same form as the stator's)
    k2 = hg.h_f ** 2 / (12.0 * hg.R_f ** 2)
    return _donnell(int(m), int(n), hg.material.nu, k2, lam, L0)


def _donnell(m, n, nu, k2, lam, L0=0.0) -> HousingCoefficients:
    s = m * m + lam * lam
    C2 = 1.0 + 0.5 * (3.0 - nu) * s + k2 * s * s
    C1 = 0.5 * (1.0 - nu) * ((3.0 + 2.0 * nu) * lam ** 2 + m * m + s * s) \
        + (3.0 - nu) / (1.0 - nu) * k2 * s * s
    C0 = 0.5 * (1.0 - nu) * ((1.0 - nu ** 2) * lam ** 4 + k2 * s ** 4)
    return HousingCoefficients(m, n, lam, k2, L0, C2, C1, C0)


def solve_cubic_real(a2: float, a1: float, a0: float) -> list[float]:
    """Real roots of x^3 + a2 x^2 + a1 x + a0, ascending, Newton-polished."""
    p = a1 - a2 * a2 / 3.0
    q = 2.0 * a2 ** 3 / 27.0 - a2 * a1 / 3.0 + a0
    shift = -a2 / 3.0
    disc = (q / 2.0) ** 2 + (p / 3.0) ** 3
    if disc <= 0.0 and p < 0.0:
        # three real roots: trigonometric form
        r = 2.0 * math.sqrt(-p / 3.0)
        arg = 3.0 * q / (p * r)
        phi = math.acos(min(1.0, max(-1.0, arg)))
        ys = [r * math.cos((phi - 2.0 * math.pi * k) / 3.0) for k in range(3)]
    elif p == 0.0 and q == 0.0:
        ys = [0.0, 0.0, 0.0]
    else:
        sq = math.sqrt(max(disc, 0.0))
        ys = [float(np.cbrt(-q / 2.0 + sq) + np.cbrt(-q / 2.0 - sq))]
    roots = [_polish(y + shift, a2, a1, a0) for y in ys]
    return sorted(roots)


def _polish(x: float, a2: float, a1: float, a0: float, steps: int = 8) -> float:
    def f(v):
        return ((v + a2) * v + a1) * v + a0

    best, fb = x, abs(f(x))
    for _ in range(steps):
        d = (3.0 * x + 2.0 * a2) * x + a1
        if d == 0.0 or fb == 0.0:
            break
        x = x - f(x) / d
        fx = abs(f(x))
        if fx < fb:
            best, fb = x, fx
        else:
            break
    return best


def housing_roots(c: HousingCoefficients) -> list[float]:
    """Non-negative roots P of P^6 - C2 P^4 + C1 P^2 - C0 = 0, ascending."""
    xs = solve_cubic_real(-c.C2, c.C1, -c.C0)
    tiny = 1e-14 * c.scale
    out = []
    for x in xs:
        if x < -tiny:
            continue  # negative P^2 is not an oscillation
        out.append(math.sqrt(max(x, 0.0)))
    return sorted(out)


def _smallest_positive(c: HousingCoefficients) -> float:
    roots = [P for P in housing_roots(c) if P * P > 1e-12 * c.scale]
    if not roots:
        raise NumericFailureError(
            f"no positive real root for m={c.m}, n={c.n}: C2={c.C2!r}, C1={c.C1!r}, C0={c.C0!r}"
        )
    return roots[0]


def housing_resonances(m: int, n: int, hg: HousingGeometry) -> float:
    """Lowest natural frequency (Hz) of casing mode (m, n)."""
    c = housing_coefficients(m, n, hg)
    return ring_frequency(_smallest_positive(c), hg.D_f, hg.material)


def housing_limit_root(m: int, nu: float, kappa2: float, lam: float = 0.0) -> float:
    """Smallest positive root for an explicit lambda (lambda -> 0 gives the ring limit)."""
    return _smallest_positive(_donnell(int(m), 0, nu, kappa2, lam))


# -- force frequencies -----------------------------------------------------

@dataclass(frozen=True)
class ToothOrders:
    orders: tuple
    integral: bool  # False when s1/p is not an integer; orders are then Fractions


def tooth_harmonic_orders(s1: int, p: int, k_max: int = 1) -> ToothOrders:
    """nu = k s1/p +- 1 for k = 1..k_max, ascending."""
    _natural("s1", s1)
    _natural("p", p)
    _natural("k_max", k_max)
    ratio = Fraction(s1, p)
    orders = sorted({k * ratio + d for k in range(1, k_max + 1) for d in (-1, 1)})
    if ratio.denominator == 1:
        return ToothOrders(tuple(int(o) for o in orders), True)
    return ToothOrders(tuple(orders), False)


def stator_force_frequencies(f: float, m1: int = 3, k_max: int = 1) -> list[float]:
    """2 f (2 k m1 +- 1), k = 1..k_max."""
    if f < 0:
        raise InvalidParameterError(f"f must be >= 0, got {f}")
    _natural("k_max", k_max)
    return sorted({2.0 * f * (2 * k * m1 + d) for k in range(1, k_max + 1) for d in (-1, 1)})


def rotor_force_frequencies(f: float, m1: int, s2: int, p: int, k_max: int = 1) -> list[float]:
    """2 f (2 k m1 +- 1)(s2/p +- 1) over every sign combination."""
    if f < 0:
        raise InvalidParameterError(f"f must be >= 0, got {f}")
    _natural("k_max", k_max)
    r = s2 / p
    out = set()
    for k in range(1, k_max + 1):
        for d1, d2 in itertools.product((-1, 1), repeat=2):
            out.add(abs(2.0 * f * (2 * k * m1 + d1) * (r + d2)))
    return sorted(out)


def carrier_sideband_frequencies(f_c: float, f: float, n_max: int = 2,
                                 nprime_max: int = 4) -> list[float]:
    """|+-(n f_c +- n' f) - f| for n >= 1, n' >= 0 of opposite parity."""
    _positive("f_c", f_c)
    _positive("f", f)
    out = set()
    for n in range(1, n_max + 1):
        for k in range(0, nprime_max + 1):
            if (n + k) % 2 == 0:
                continue
            for s_outer, s_inner in itertools.product((-1, 1), repeat=2):
                out.add(abs(s_outer * (n * f_c + s_inner * k * f) - f))
    return sorted(out)


# -- resonance risk --------------------------------------------------------

@dataclass(frozen=True)
class Resonance:
    frequency: float
    mode: tuple = ()
    source: str = ""


@dataclass(frozen=True)
class RiskEntry:
    force_frequency: float
    nearest_resonance: float
    mode: tuple
    separation: float
    order: int
    percent: float
    contribution: float


@dataclass(frozen=True)
class RiskReport:
    entries: tuple = field(default_factory=tuple)
    score: float = 0.0
    window: float = DEFAULT_RISK_WINDOW

    def __len__(self):
        return len(self.entries)


def _as_resonances(items: Iterable) -> list[Resonance]:
    out = []
    for r in items:
        if isinstance(r, Resonance):
            out.append(r)
        elif isinstance(r, tuple):
            out.append(Resonance(float(r[0]), tuple(r[1]) if len(r) > 1 else ()))
        else:
            out.append(Resonance(float(r)))
    return out


def resonance_risk(spec: HarmonicTable, resonances: Sequence, window: float = DEFAULT_RISK_WINDOW,
                   f: float | None = None, threshold: float = DEFAULT_RISK_THRESHOLD,
                   include_fundamental: bool = False) -> RiskReport:
    """Score how closely force lines n f +- f approach structural resonances.

    Each harmonic of at least ``threshold`` percent contributes
    percent^2 * max(0, 1 - separation / window) for every resonance it lands
    within ``window`` Hz of.
    """
    _positive("window", window)
    res = _as_resonances(resonances)
    if not res:
        return RiskReport((), 0.0, window)
    f = spec.fundamental_hz if f is None else f
    pct = spec.percent
    entries = []
    for order, percent in zip(spec.orders, pct):
        order = int(order)
        if (order == 1 and not include_fundamental) or not percent >= threshold:
            continue
        for force in (order * f - f, order * f + f):
            if force <= 0:
                continue
            for r in res:
                sep = abs(force - r.frequency)
                w = 1.0 - sep / window
                if w > 0:
                    entries.append(RiskEntry(force, r.frequency, r.mode, sep, order,
                                             float(percent), float(percent) ** 2 * w))
    entries.sort(key=lambda e: (e.force_frequency, e.nearest_resonance))
    score = math.fsum(e.contribution for e in entries)
    return RiskReport(tuple(entries), score, window)
