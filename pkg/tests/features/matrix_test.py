import io

import jax.numpy as jnp
import numpy as np
import pytest

from kinemark.errors import EmptyMatrix, FeatureError
from kinemark.features import (
    FeatureMatrix,
    extract_window,
    extract_windows,
    feature_names,
    series_features,
    validate_setting,
)
from kinemark.kinematics import ORDERS, Order, build_stack, window_stack
from kinemark.test_utils import assert_allclose, assert_relclose

RATE = 60.0


@pytest.fixture(scope="module")
def windows():
    rng = np.random.default_rng(50)
    t = np.arange(240) / RATE
    channels = rng.normal(size=(6, 240)) + np.sin(2 * np.pi * t)
    stack = build_stack(channels, RATE, participant_id="P1", label=1)
    return window_stack(stack, 1.0)


def test_vector_length(windows):
    movement = extract_window(windows[0], ["movement"])
    assert movement.values.shape == (6 * 143,)
    full = extract_window(windows[0])
    assert full.values.shape == (4 * 6 * 143,)
    assert full.names == feature_names(ORDERS)
    assert full.participant_id == "P1"
    assert full.label == 1


def test_layout(windows):
    w = windows[1]
    vector = extract_window(w, [Order.MOVEMENT, Order.JERK]).as_dict()
    offset = 6 * 143 + 4 * 143
    expected = series_features(w.samples[3, 4], RATE)
    calc = np.asarray(list(vector.values()))[offset : offset + 143]
    assert_relclose(calc, expected, 1e-9)
    assert list(vector)[offset] == "jerk_Roll_Absolute energy"


def test_setting_order_is_canonical(windows):
    a = extract_window(windows[0], ["velocity", "movement"])
    b = extract_window(windows[0], ["movement", "velocity"])
    assert a.names == b.names
    assert_allclose(a.values, b.values, atol=0)


def test_validate_setting():
    assert validate_setting(["jerk", "movement"]) == (Order.MOVEMENT, Order.JERK)
    with pytest.raises(ValueError):
        validate_setting(["velocity"])
    with pytest.raises(ValueError):
        validate_setting(["movement", "snap"])


def test_extract_windows(windows):
    matrix = extract_windows(windows, ["movement"], batch_size=3)
    assert matrix.n_rows == 4
    assert matrix.n_features == 6 * 143
    assert matrix.window_index == (0, 1, 2, 3)
    single = extract_window(windows[2], ["movement"])
    assert_relclose(matrix.X[2], single.values, 1e-9)
    np.testing.assert_array_equal(matrix.y, [1, 1, 1, 1])


def test_empty_windows():
    with pytest.raises(EmptyMatrix):
        extract_windows([])


def test_short_window_names_the_series():
    stack = build_stack(np.zeros((6, 12)), RATE)
    short = window_stack(stack, 0.1)
    with pytest.raises(FeatureError) as info:
        extract_window(short[0], ["movement"])
    assert info.value.order == "movement"
    assert info.value.channel == "X"


@pytest.fixture
def matrix():
    rng = np.random.default_rng(51)
    names = feature_names(["movement", "velocity"])[:3] + (
        "velocity_X_Mean",
        "velocity_Y_Mean",
    )
    return FeatureMatrix(
        rng.normal(size=(4, 5)) / 3.0,
        names,
        ["A", "A", "007", "B"],
        [0, 1, 0, 1],
        [0, 0, 1, 0],
    )


def test_select_and_orders(matrix):
    chosen = matrix.select(["velocity_Y_Mean", "movement_X_Absolute energy"])
    assert chosen.names == ("velocity_Y_Mean", "movement_X_Absolute energy")
    assert_allclose(chosen.X[:, 0], matrix.X[:, 4], atol=0)
    assert matrix.for_orders(["movement"]).n_features == 3
    assert matrix.for_orders(["movement", "velocity"]).names == matrix.names
    with pytest.raises(KeyError):
        matrix.select(["missing"])


def test_rows(matrix):
    subset = matrix.rows([True, False, False, True])
    assert subset.participant_ids == ("A", "B")
    assert subset.labels == (0, 1)
    assert_allclose(subset.X, matrix.X[[0, 3]], atol=0)


def test_csv_round_trip(matrix):
    buffer = io.StringIO()
    matrix.to_csv(buffer)
    buffer.seek(0)
    loaded = FeatureMatrix.read_csv(buffer)
    assert loaded.names == matrix.names
    assert loaded.participant_ids == ("A", "A", "007", "B")
    assert loaded.labels == matrix.labels
    assert loaded.window_index == matrix.window_index
    np.testing.assert_array_equal(loaded.X, matrix.X)


def test_shape_check():
    with pytest.raises(ValueError):
        FeatureMatrix(jnp.zeros((2, 3)), ["a", "b"], ["A", "B"], [0, 1], [0, 0])
