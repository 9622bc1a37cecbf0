import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from hipwm.patterns import SwitchingPattern


def square(period=1.0):
    return SwitchingPattern(period, np.array([0.0, 0.5]), np.array([1, -1]), -1)


def test_level_at_takes_post_event_level():
    p = square()
    assert p.level_at(0.0) == 1
    assert p.level_at(0.5) == -1
    assert p.level_at(0.49999) == 1
    assert p.level_at(1.25) == 1  # wraps


def test_rejects_non_periodic_and_unsorted():
    with pytest.raises(ValueError):
        SwitchingPattern(1.0, np.array([0.1, 0.6]), np.array([1, 0]), 1)
    with pytest.raises(ValueError):
        SwitchingPattern(1.0, np.array([0.6, 0.1]), np.array([1, 0]), 0)
    with pytest.raises(ValueError):
        SwitchingPattern(1.0, np.array([0.1, 1.0]), np.array([1, 0]), 0)


def test_arrays_are_read_only():
    p = square()
    with pytest.raises(ValueError):
        p.times[0] = 0.2


def test_from_states_drops_repeats():
    p = SwitchingPattern.from_states(1.0, [0.1, 0.2, 0.3], [1, 1, 0], 0)
    assert p.events == [(0.1, 1), (0.3, 0)]


def test_mean_level_square_is_zero():
    assert square().mean_level() == 0.0
    assert SwitchingPattern.constant(2.0, 3).mean_level() == 3.0


def test_difference_merges_coincident_events():
    a = square()
    d = a - a
    assert d.n_events == 0 and d.initial_level == 0


def test_shift_by_half_period_negates_square():
    p = square()
    q = p.shifted(0.5)
    t = np.linspace(0, 1, 101, endpoint=False)
    assert np.array_equal(q.level_at(t), -p.level_at(t))


@st.composite
def patterns(draw):
    n = draw(st.integers(0, 12))
    times = sorted(set(draw(st.lists(st.floats(0.0, 0.999), min_size=n, max_size=n))))
    times = [t for i, t in enumerate(times) if i == 0 or t - times[i - 1] > 1e-6]
    levels = draw(st.lists(st.integers(-3, 3), min_size=len(times), max_size=len(times)))
    init = levels[-1] if levels else draw(st.integers(-3, 3))
    return SwitchingPattern.from_states(1.0, times, levels, init)


@given(patterns(), patterns())
def test_sum_matches_pointwise_sum(a, b):
    t = np.linspace(0.0, 1.0, 997, endpoint=False) + 1.3e-4
    assert np.array_equal((a + b).level_at(t), a.level_at(t) + b.level_at(t))


@given(patterns(), st.floats(0.0, 1.0))
def test_shift_is_delay(p, dt):
    t = np.linspace(0.0, 1.0, 499, endpoint=False) + 7.7e-4
    q = p.shifted(dt)
    # compare away from event instants, where the two representations may round differently
    near = np.min(np.abs(((t[:, None] - dt) - p.times[None, :] + 0.5) % 1.0 - 0.5), axis=1) \
        if p.n_events else np.full(t.size, 1.0)
    ok = near > 1e-9
    assert np.array_equal(q.level_at(t)[ok], p.level_at(t - dt)[ok])


@given(patterns())
def test_mean_level_matches_dense_average(p):
    t = (np.arange(200_000) + 0.5) / 200_000
    assert abs(p.mean_level() - p.level_at(t).mean()) < 3 * 6 * 12 / 200_000
