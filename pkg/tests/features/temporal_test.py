import jax.numpy as jnp
import numpy as np
import pytest

from kinemark.errors import SeriesTooShort
from kinemark.features import compute_temporal, series_labels
from kinemark.features.temporal import temporal_features, zero_crossings
from kinemark.test_utils import assert_allclose, assert_relclose
from kinemark.units import unit_registry as ureg

DT = 1.0 / 60.0


def _turning(x, sign):
    return sum(
        1
        for i in range(1, len(x) - 1)
        if sign * (x[i] - x[i - 1]) > 0 and sign * (x[i] - x[i + 1]) > 0
    )


def _peaks(x, radius=10):
    mu = np.mean(x)
    count = 0
    for i in range(radius, len(x) - radius):
        others = np.r_[x[i - radius : i], x[i + 1 : i + radius + 1]]
        count += bool(x[i] > mu and np.all(x[i] > others))
    return count


def _crossings(x):
    count, previous = 0, 0.0
    for v in x:
        s = np.sign(v)
        if s == 0:
            continue
        if previous != 0 and s != previous:
            count += 1
        previous = s
    return count


def temporal_reference(x, dt):
    n = len(x)
    t = np.arange(n) * dt
    d = np.diff(x)
    energy = np.sum(x**2)
    return {
        "Area under the curve": sum((x[i] + x[i + 1]) * dt / 2 for i in range(n - 1)),
        "Autocorrelation": np.sum(x[:-1] * x[1:]) / energy if energy else 0.0,
        "Centroid": np.sum(t * x**2) / energy if energy else 0.0,
        "Mean absolute diff": np.mean(np.abs(d)),
        "Mean diff": np.mean(d),
        "Median absolute diff": np.median(np.abs(d)),
        "Median diff": np.median(d),
        "Negative turning points": _turning(x, -1),
        "Neighbourhood peaks": _peaks(x),
        "Positive turning points": _turning(x, 1),
        "Signal distance": np.sum(np.sqrt(1 + d**2)),
        "Slope": np.polyfit(t, x, 1)[0],
        "Sum absolute diff": np.sum(np.abs(d)),
        "Zero crossing rate": _crossings(x),
    }


def _named(x, dt=DT):
    values = np.asarray(compute_temporal(x, dt))
    return dict(zip(series_labels("temporal"), values, strict=True))


def test_against_reference():
    rng = np.random.default_rng(30)
    for i in range(100):
        x = rng.normal(size=60)
        if i % 2:
            x = np.sin(np.linspace(0, rng.uniform(2, 20), 60)) + 0.3 * x
        if i % 5 == 0:
            x[rng.choice(60, 6, replace=False)] = 0.0
        calc = _named(x)
        expected = temporal_reference(x, DT)
        assert calc.keys() == expected.keys()
        for name, value in expected.items():
            assert_relclose(calc[name], value, 1e-9)


def test_hand_example():
    # Three samples are below the extraction minimum, so call the kernel directly
    values = temporal_features(jnp.array([0.0, 2.0, 1.0]), 1.0)
    calc = dict(zip(series_labels("temporal"), np.asarray(values), strict=True))
    assert_allclose(calc["Sum absolute diff"], 3.0)
    assert_allclose(calc["Mean diff"], 0.5)
    assert_allclose(calc["Area under the curve"], 2.5)
    assert calc["Positive turning points"] == 1


def test_alternating_signs():
    assert _named(jnp.array([1.0, -1.0, 1.0, -1.0]))["Zero crossing rate"] == 3


@pytest.mark.parametrize(
    "x, expected",
    [
        ([0.0, 0.0, 1.0, -1.0], 1),
        ([1.0, 0.0, -1.0, 0.0, 1.0], 2),
        ([1.0, 0.0, 0.0, 2.0], 0),
        ([0.0, 0.0, 0.0, 0.0], 0),
    ],
)
def test_zero_crossings_carry_sign(x, expected):
    assert int(zero_crossings(jnp.asarray(x))) == expected


@pytest.mark.parametrize("rate", [10.0, 60.0, 250.0])
def test_ramp(rate):
    t = np.arange(120) / rate
    calc = _named(3.0 * t + 1.0, 1.0 / rate)
    assert_allclose(calc["Slope"], 3.0, rtol=1e-9)
    assert calc["Negative turning points"] == 0
    assert calc["Positive turning points"] == 0


def test_slope_ignores_shift_but_crossings_do_not():
    rng = np.random.default_rng(31)
    x = rng.normal(size=60)
    base, shifted = _named(x), _named(x + 10.0)
    assert_allclose(shifted["Slope"], base["Slope"], rtol=1e-9)
    assert_allclose(shifted["Sum absolute diff"], base["Sum absolute diff"], rtol=1e-9)
    assert base["Zero crossing rate"] > 0
    assert shifted["Zero crossing rate"] == 0


def test_scale_invariant_counts():
    rng = np.random.default_rng(32)
    x = rng.normal(size=60)
    base, scaled = _named(x), _named(4.0 * x)
    for name in (
        "Zero crossing rate",
        "Negative turning points",
        "Positive turning points",
    ):
        assert scaled[name] == base[name]


def test_zero_series():
    calc = _named(jnp.zeros(60))
    assert calc["Autocorrelation"] == 0.0
    assert calc["Centroid"] == 0.0
    assert calc["Zero crossing rate"] == 0


def test_isolated_peak():
    x = np.zeros(41)
    x[20] = 1.0
    x[5] = 0.5
    assert _named(x)["Neighbourhood peaks"] == 1


def test_dt_units():
    x = np.random.default_rng(33).normal(size=30)
    assert_allclose(compute_temporal(x, 20 * ureg.ms), compute_temporal(x, 0.02))


def test_too_short():
    with pytest.raises(SeriesTooShort):
        compute_temporal(jnp.zeros(3))
