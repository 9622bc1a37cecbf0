import math
from dataclasses import replace
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from hipwm.acoustics import (
    CUBIC_RESIDUAL_BOUND,
    STEEL,
    HousingGeometry,
    MaterialSpec,
    Resonance,
    StatorGeometry,
    carrier_sideband_frequencies,
    cylinder_root,
    housing_coefficients,
    housing_limit_root,
    housing_resonances,
    housing_roots,
    resonance_risk,
    rotor_force_frequencies,
    solve_cubic_real,
    stator_force_frequencies,
    stator_resonance,
    thickness_parameter,
    tooth_harmonic_orders,
)
from hipwm.errors import InvalidParameterError
from hipwm.reference import STATOR_MODES_HZ
from hipwm.spectral import HarmonicTable

G = StatorGeometry()
HG = HousingGeometry()


def line_table(order, percent, f=50.0):
    amps = np.zeros(max(order, 1))
    amps[0] = 1.0
    amps[order - 1] = percent / 100.0
    return HarmonicTable(np.arange(1, amps.size + 1), amps, np.zeros_like(amps), f)


# -- stator -----------------------------------------------------------------

def test_thickness_parameter():
    assert thickness_parameter(G) == pytest.approx(0.01 ** 2 / (3 * 0.176 ** 2), rel=1e-15)
    assert thickness_parameter(G) == pytest.approx(1.07610e-3, rel=1e-5)


def test_breathing_mode_root_is_one():
    r = cylinder_root(0, 0.05)
    assert r.lower == r.upper == 1.0


def test_mode_one_thin_limit_branches():
    r = cylinder_root(1, 0.0)
    assert r.lower == 0.0
    assert r.upper == pytest.approx(1.0, abs=1e-15)
    # substitution into u^2 - (1 + m^2 + k m^4) u + k m^6 = 0 with u = 2 P^2
    for P in (r.lower, r.upper):
        u = 2 * P * P
        assert abs(u * u - 2 * u) < 1e-15


@given(st.integers(1, 12), st.floats(0.0, 0.05))
def test_cylinder_roots_satisfy_quadratic(m, k2):
    r = cylinder_root(m, k2)
    A = 1 + m ** 2 + k2 * m ** 4
    for P in (r.lower, r.upper):
        u = 2 * P * P
        assert abs(u * u - A * u + k2 * m ** 6) <= 1e-12 * A * A
    assert 0.0 <= r.lower <= r.upper


def test_cylinder_root_validation():
    with pytest.raises(InvalidParameterError):
        cylinder_root(-1, 0.01)
    with pytest.raises(InvalidParameterError):
        cylinder_root(1.5, 0.01)


def test_stator_breathing_mode_frequency():
    assert stator_resonance(0, G) == pytest.approx(9662.0, rel=0.01)
    expect = 1 / (math.pi * 0.176) * math.sqrt(200e9 / (7700 * (1 - 0.09)))
    assert stator_resonance(0, G) == pytest.approx(expect, rel=1e-14)


def test_doubling_diameter_halves_ring_frequency():
    big = replace(G, D_c=2 * G.D_c, h_c=2 * G.h_c)
    for m in range(6):
        assert stator_resonance(m, big) == pytest.approx(stator_resonance(m, G) / 2, rel=1e-12)


def test_poisson_ratio_effect():
    ratio = stator_resonance(0, G, STEEL) / stator_resonance(0, G, replace(STEEL, nu=0.0))
    assert ratio == pytest.approx(math.sqrt(1 / (1 - 0.09)), rel=1e-12)
    assert ratio == pytest.approx(1.0483, abs=1e-4)


@given(st.integers(0, 8), st.floats(0.1, 10.0), st.floats(0.1, 10.0))
def test_stator_material_scaling(m, a, b):
    mat = MaterialSpec(E=STEEL.E * a, rho=STEEL.rho * b, nu=STEEL.nu)
    ratio = stator_resonance(m, G, mat) / stator_resonance(m, G)
    assert ratio == pytest.approx(math.sqrt(a / b), rel=1e-12)


def test_mass_addition_divides_frequency():
    assert stator_resonance(2, G, mass_addition=0.44) == pytest.approx(stator_resonance(2, G) / 1.2)


def test_published_stator_preset_reproduces_table():
    g = replace(G, D_c=0.186)
    mat = replace(STEEL, rho=7700 * 9.8)
    assert stator_resonance(0, g, mat) == pytest.approx(STATOR_MODES_HZ["m0"], abs=0.05)
    for m, f in enumerate(STATOR_MODES_HZ["lower"], start=1):
        assert stator_resonance(m, g, mat) == pytest.approx(f, abs=0.5)
    for m, f in enumerate(STATOR_MODES_HZ["upper"], start=1):
        assert stator_resonance(m, g, mat, branch="upper") == pytest.approx(f, abs=0.5)


# -- housing ----------------------------------------------------------------

def test_cubic_solver_known_roots():
    # (x - 1)(x - 2)(x - 3) = x^3 - 6 x^2 + 11 x - 6
    assert np.allclose(solve_cubic_real(-6.0, 11.0, -6.0), [1.0, 2.0, 3.0], atol=1e-13)
    assert np.allclose(solve_cubic_real(0.0, 0.0, -8.0), [2.0], atol=1e-13)


@pytest.mark.parametrize("m", range(0, 6))
@pytest.mark.parametrize("n", [1, 2, 3])
def test_housing_roots_contract(m, n):
    c = housing_coefficients(m, n, HG)
    roots = housing_roots(c)
    assert roots == sorted(roots)
    assert all(P >= 0 for P in roots)
    for P in roots:
        assert abs(c.residual(P)) < CUBIC_RESIDUAL_BOUND * c.scale
    f = housing_resonances(m, n, HG)
    assert f > 0


def test_housing_coefficient_definitions():
    c = housing_coefficients(2, 1, HG)
    L0 = HG.L_f * 0.3 / 1.3
    assert c.L0 == pytest.approx(L0)
    assert c.lam == pytest.approx(0.5 * math.pi * (HG.D_f - HG.h_f) / (HG.L_f - L0))
    assert c.kappa2 == pytest.approx(HG.h_f ** 2 / (12 * HG.R_f ** 2))


def test_housing_ring_limit():
    assert housing_limit_root(0, 0.3, 1e-4, lam=0.0) == pytest.approx(1.0, abs=1e-12)
    assert housing_limit_root(0, 0.3, 2e-3, lam=0.0) == pytest.approx(1.0, abs=1e-12)


@pytest.mark.parametrize("field, m, n", [("D_f", 2, 1), ("L_f", 3, 2), ("h_f", 0, 1), ("L_f", 4, 3)])
def test_housing_root_continuity(field, m, n):
    base = housing_resonances(m, n, HG)
    for s in (0.99, 1.01):
        hg = replace(HG, **{field: getattr(HG, field) * s})
        assert abs(housing_resonances(m, n, hg) / base - 1) < 0.05


# -- force frequencies ------------------------------------------------------

def test_tooth_orders():
    assert tooth_harmonic_orders(36, 2, 1).orders == (17, 19)
    assert tooth_harmonic_orders(36, 2, 2).orders == (17, 19, 35, 37)
    assert tooth_harmonic_orders(24, 2, 1).orders == (11, 13)
    t = tooth_harmonic_orders(36, 5, 1)
    assert not t.integral
    assert t.orders == (Fraction(31, 5), Fraction(41, 5))


@given(st.integers(1, 40), st.integers(1, 6))
def test_tooth_orders_odd_for_even_ratio(half, k):
    t = tooth_harmonic_orders(4 * half, 2, k)
    assert t.integral and all(o % 2 == 1 for o in t.orders)


def test_stator_force_frequencies():
    assert stator_force_frequencies(50, 3, 1) == [500.0, 700.0]
    assert set(stator_force_frequencies(50, 3, 2)) >= {1100.0, 1300.0}
    assert stator_force_frequencies(0.0, 3, 1) == [0.0]


def test_rotor_force_frequencies():
    out = rotor_force_frequencies(50, 3, 26, 2, 1)
    assert {6000.0, 7000.0} <= set(out)
    assert set(out) == {abs(2 * 50 * a * b) for a in (5, 7) for b in (12, 14)}
    deg = rotor_force_frequencies(50, 3, 2, 2, 1)
    assert 0.0 in deg and 1000.0 in deg and 1400.0 in deg


def test_carrier_sidebands():
    assert carrier_sideband_frequencies(750, 50, 1, 0) == [700.0, 800.0]
    assert carrier_sideband_frequencies(750, 50, 1, 2) == [600.0, 700.0, 800.0, 900.0]
    fam = set(carrier_sideband_frequencies(750, 50, 2, 4))
    fc, f = 750.0, 50.0
    for e in (fc + 4 * f, fc - 4 * f, 2 * fc + f, 2 * fc - f, 2 * fc + 3 * f, 2 * fc - 3 * f):
        assert {abs(e - f), e + f} <= fam
    assert all(x >= 0 for x in fam)


# -- risk -------------------------------------------------------------------

def test_risk_hits_resonance_at_1500():
    rep = resonance_risk(line_table(31, 5.0), [1500.0], window=75.0)
    assert rep.score > 0
    hit = [e for e in rep.entries if e.force_frequency == 1500.0]
    assert hit and hit[0].separation == 0.0 and hit[0].order == 31
    assert hit[0].contribution == pytest.approx(25.0)


def test_risk_zero_when_far():
    assert resonance_risk(line_table(31, 5.0), [3000.0], window=75.0).score == 0.0


def test_risk_empty_resonances():
    rep = resonance_risk(line_table(31, 5.0), [])
    assert rep.score == 0.0 and len(rep) == 0


def test_risk_window_validation():
    with pytest.raises(InvalidParameterError):
        resonance_risk(line_table(31, 5.0), [1500.0], window=0.0)


@given(st.floats(0.5, 40.0), st.floats(1400.0, 1700.0))
def test_doubling_percent_quadruples_score(pct, res):
    a = resonance_risk(line_table(31, pct), [Resonance(res)], threshold=0.0)
    b = resonance_risk(line_table(31, 2 * pct), [Resonance(res)], threshold=0.0)
    assert b.score == pytest.approx(4 * a.score, rel=1e-12)


@given(st.floats(1.0, 200.0), st.floats(1.0, 200.0), st.floats(1400.0, 1700.0))
def test_score_monotone_in_window(w1, w2, res):
    lo, hi = sorted((w1, w2))
    t = line_table(31, 3.0)
    assert resonance_risk(t, [res], window=lo).score <= resonance_risk(t, [res], window=hi).score
