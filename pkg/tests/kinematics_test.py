import jax.numpy as jnp
import numpy as np
import pytest

from kinemark.corpus import MotionRecording, label_segments
from kinemark.errors import NonIntegralWindow, SeriesTooShort
from kinemark.kinematics import (
    ORDERS,
    KinematicStack,
    Order,
    build_stack,
    differentiate,
    segment_stack,
    stack_windows,
    window_stack,
)
from kinemark.test_utils import assert_allclose
from kinemark.units import unit_registry as ureg

RATE = 60.0


def test_constant_series():
    assert_allclose(differentiate(jnp.full(30, 4.2), 1 / RATE), 0.0, atol=1e-12)


def test_ramp_is_exact():
    t = np.arange(50) / RATE
    assert_allclose(differentiate(3.0 * t - 1.0, 1 / RATE), 3.0)


def test_sine_interior():
    t = np.arange(600) / RATE
    dx = differentiate(jnp.sin(2 * np.pi * t), 1 / RATE)
    expected = 2 * np.pi * np.cos(2 * np.pi * t)
    assert np.max(np.abs(dx[1:-1] - expected[1:-1])) < 0.02


def test_endpoints_are_one_sided():
    x = jnp.array([0.0, 1.0, 4.0, 9.0])
    assert_allclose(differentiate(x, 1.0), [1.0, 2.0, 4.0, 5.0])


def test_linearity_and_shift():
    rng = np.random.default_rng(3)
    x, y = rng.normal(size=(2, 40))
    a, b = 2.5, -0.75
    lhs = differentiate(a * x + b * y, 1 / RATE)
    rhs = a * differentiate(x, 1 / RATE) + b * differentiate(y, 1 / RATE)
    assert_allclose(lhs, rhs, atol=1e-10)
    assert_allclose(differentiate(x + 100.0, 1 / RATE), differentiate(x, 1 / RATE))


def test_stacked_series():
    rng = np.random.default_rng(4)
    x = rng.normal(size=(6, 20))
    stacked = differentiate(x, 0.5)
    for row, series in zip(stacked, x, strict=True):
        assert_allclose(row, differentiate(series, 0.5))


@pytest.mark.parametrize("n", [0, 1, 2])
def test_too_short(n):
    with pytest.raises(SeriesTooShort) as info:
        differentiate(jnp.zeros(n), 1.0)
    assert info.value.minimum == 3


def test_dt_units():
    x = jnp.arange(10.0) ** 2
    assert_allclose(differentiate(x, 500 * ureg.ms), differentiate(x, 0.5))


def test_build_stack():
    t = np.arange(120) / RATE
    channels = np.stack([k * t for k in range(1, 7)])
    stack = build_stack(channels, RATE, participant_id="P1", label=1)
    assert stack.series.shape == (4, 6, 120)
    assert_allclose(stack.order(Order.MOVEMENT), channels)
    assert_allclose(stack.order("velocity"), np.arange(1, 7)[:, None] * np.ones(120))
    assert_allclose(stack.order(Order.ACCELERATION), 0.0, atol=1e-9)
    assert_allclose(stack.order(Order.JERK), 0.0, atol=1e-6)
    assert stack.dt_s == 1 / RATE


def test_build_stack_too_short():
    with pytest.raises(SeriesTooShort):
        build_stack(np.zeros((6, 3)), RATE)


def test_stack_shape_check():
    with pytest.raises(ValueError):
        KinematicStack(series=jnp.zeros((3, 6, 10)), sample_rate=RATE)


def test_segment_stack_stays_within_segment():
    n = 1800
    channels = np.zeros((6, n))
    channels[:, n // 2 :] = 1e3
    rec = MotionRecording("P1", "Sick", RATE, channels)
    first, last = label_segments(rec, 10)
    stack = segment_stack(rec, first)
    assert stack.label == 0
    assert stack.participant_id == "P1"
    assert_allclose(stack.series, 0.0, atol=0)
    assert_allclose(segment_stack(rec, last).order("jerk"), 0.0, atol=0)


def test_windows_partition_the_segment():
    rng = np.random.default_rng(5)
    stack = build_stack(rng.normal(size=(6, 600)), RATE)
    windows = window_stack(stack, 1.0)
    assert len(windows) == 10
    assert [w.start for w in windows] == list(range(0, 600, 60))
    assert all(w.length == 60 for w in windows)
    rebuilt = jnp.concatenate([w.samples for w in windows], axis=-1)
    assert_allclose(rebuilt, stack.series, atol=0)


def test_trailing_partial_window_is_dropped():
    stack = build_stack(np.zeros((6, 130)), RATE)
    assert len(window_stack(stack, 1.0)) == 2


def test_overlapping_windows():
    stack = build_stack(np.zeros((6, 600)), RATE)
    windows = window_stack(stack, 1.0, stride=0.5)
    assert len(windows) == 19
    assert windows[1].start == 30


def test_window_units():
    stack = build_stack(np.zeros((6, 120)), RATE)
    windows = window_stack(stack, 500 * ureg.ms)
    assert len(windows) == 4
    assert windows[0].length == 30


def test_non_integral_window():
    stack = build_stack(np.zeros((6, 120)), RATE)
    with pytest.raises(NonIntegralWindow):
        window_stack(stack, 0.01234)


def test_stack_windows():
    stack = build_stack(np.random.default_rng(6).normal(size=(6, 240)), RATE)
    windows = window_stack(stack, 1.0)
    batch = stack_windows(windows)
    assert batch.shape == (4, 4, 6, 60)
    subset = stack_windows(windows, [Order.JERK, Order.MOVEMENT])
    assert subset.shape == (4, 2, 6, 60)
    assert_allclose(subset[2, 0], windows[2].samples[3], atol=0)
    assert stack_windows([], ORDERS).shape[0] == 0
