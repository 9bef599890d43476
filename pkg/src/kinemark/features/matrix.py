"""Feature vectors of windows and the tables built from them
"""

__all__ = [
    "FeatureVector",
    "FeatureMatrix",
    "series_features",
    "extract_window",
    "extract_windows",
    "validate_setting",
]

import logging
import os
from collections.abc import Iterable, Sequence
from functools import partial
from typing import IO

import equinox as eqx
import jax
import jax.numpy as jnp
import numpy as np
import pandas as pd

from kinemark.corpus.recording import CHANNELS, FLOAT_FORMAT
from kinemark.errors import EmptyMatrix, FeatureError, SeriesTooShort
from kinemark.features.registry import MIN_LENGTH, feature_names, series_labels
from kinemark.features.spectral import spectral_features
from kinemark.features.statistical import statistical_features
from kinemark.features.temporal import temporal_features
from kinemark.kinematics import ORDERS, Order, WindowInstance
from kinemark.types import Array

logger = logging.getLogger(__name__)

ID_COLUMNS = ("participant_id", "label", "window_index")


def validate_setting(setting: Iterable[Order | str]) -> tuple[Order, ...]:
    """Normalize an order set to canonical order, requiring movement"""
    try:
        chosen = {Order(o) for o in setting}
    except ValueError as e:
        raise ValueError(f"Unknown kinematic order in setting: {e}") from None
    if Order.MOVEMENT not in chosen:
        raise ValueError("A feature setting must include the movement order")
    return tuple(o for o in ORDERS if o in chosen)


def series_features(x: Array, sample_rate: float) -> Array:
    """All registry values of a single series, shape ``(143,)``"""
    return jnp.concatenate(
        [
            statistical_features(x, sample_rate),
            temporal_features(x, 1.0 / sample_rate),
            spectral_features(x, sample_rate),
        ]
    )


@partial(jax.jit, static_argnames=("sample_rate",))
def _batch_features(samples: Array, sample_rate: float) -> Array:
    # samples: (n_windows, n_orders, 6, W) -> (n_windows, n_orders * 6 * 143)
    n_windows, length = samples.shape[0], samples.shape[-1]
    flat = samples.reshape(-1, length)
    values = jax.vmap(partial(series_features, sample_rate=sample_rate))(flat)
    return values.reshape(n_windows, -1)


def _check_length(length: int, setting: Sequence[Order]) -> None:
    minimum = max(MIN_LENGTH.values())
    if length < minimum:
        raise FeatureError(
            setting[0].value, CHANNELS[0], SeriesTooShort(length, minimum)
        )


def _check_finite(values: np.ndarray, setting: Sequence[Order]) -> None:
    bad = ~np.isfinite(values)
    if bad.any():
        column = int(np.argwhere(bad)[0][1])
        per_series = len(series_labels())
        order = setting[column // (per_series * len(CHANNELS))]
        channel = CHANNELS[(column // per_series) % len(CHANNELS)]
        raise FeatureError(
            order.value, channel, ValueError("non-finite feature value")
        )


class FeatureVector(eqx.Module):
    values: Array
    names: tuple[str, ...] = eqx.field(static=True)
    participant_id: str | None = eqx.field(static=True)
    label: int | None = eqx.field(static=True)
    window_index: int = eqx.field(static=True)

    def as_dict(self) -> dict[str, float]:
        return dict(zip(self.names, np.asarray(self.values).tolist(), strict=True))


def extract_window(
    window: WindowInstance, setting: Iterable[Order | str] = ORDERS
) -> FeatureVector:
    """Concatenate every descriptor of every (order, channel) series of a window

    Values are laid out by order (in the canonical order of the setting), then
    channel (X, Y, Z, Pitch, Roll, Yaw), then registry position.

    Raises:
        FeatureError: naming the order and channel of a failing series
    """
    setting = validate_setting(setting)
    _check_length(window.length, setting)
    samples = window.samples[jnp.asarray([o.degree for o in setting])]
    values = _batch_features(samples[None], window.sample_rate)[0]
    _check_finite(np.asarray(values)[None], setting)
    return FeatureVector(
        values=values,
        names=feature_names(setting),
        participant_id=window.participant_id,
        label=window.label,
        window_index=window.window_index,
    )


class FeatureMatrix(eqx.Module):
    """A table of feature vectors with one row per window

    Args:
        values: Array with shape ``(n_windows, n_features)``
        names: The feature name of every column
        participant_ids: The participant of every row
        labels: The segment label (0 or 1) of every row
        window_index: The ordinal of every row's window within its segment
    """

    values: Array = eqx.field(converter=lambda v: jnp.asarray(v, dtype=jnp.float64))
    names: tuple[str, ...] = eqx.field(static=True, converter=tuple)
    participant_ids: tuple[str, ...] = eqx.field(static=True, converter=tuple)
    labels: tuple[int, ...] = eqx.field(
        static=True, converter=lambda v: tuple(int(x) for x in v)
    )
    window_index: tuple[int, ...] = eqx.field(
        static=True, converter=lambda v: tuple(int(x) for x in v)
    )

    def __check_init__(self) -> None:
        rows = len(self.participant_ids)
        if self.values.ndim != 2 or self.values.shape != (rows, len(self.names)):
            raise ValueError(
                f"values with shape {tuple(self.values.shape)} do not match "
                f"{rows} rows of {len(self.names)} named features"
            )
        if not len(self.labels) == len(self.window_index) == rows:
            raise ValueError("Every row needs a participant id, label and window index")

    @property
    def n_rows(self) -> int:
        return len(self.participant_ids)

    @property
    def n_features(self) -> int:
        return len(self.names)

    @property
    def X(self) -> np.ndarray:
        return np.asarray(self.values)

    @property
    def y(self) -> np.ndarray:
        return np.asarray(self.labels, dtype=int)

    def select(self, names: Sequence[str]) -> "FeatureMatrix":
        """A matrix with only the named columns, in the given order"""
        index = {name: i for i, name in enumerate(self.names)}
        missing = [name for name in names if name not in index]
        if missing:
            raise KeyError(f"Unknown feature names: {', '.join(missing[:5])}")
        columns = np.asarray([index[name] for name in names], dtype=int)
        return FeatureMatrix(
            self.X[:, columns],
            tuple(names),
            self.participant_ids,
            self.labels,
            self.window_index,
        )

    def for_orders(self, setting: Iterable[Order | str]) -> "FeatureMatrix":
        """The columns belonging to a cumulative setting of kinematic orders"""
        prefixes = tuple(f"{o.value}_" for o in validate_setting(setting))
        return self.select([name for name in self.names if name.startswith(prefixes)])

    def rows(self, mask: Sequence[bool] | np.ndarray) -> "FeatureMatrix":
        mask = np.asarray(mask, dtype=bool)
        return FeatureMatrix(
            self.X[mask],
            self.names,
            tuple(np.asarray(self.participant_ids, dtype=object)[mask]),
            np.asarray(self.labels, dtype=int)[mask],
            np.asarray(self.window_index, dtype=int)[mask],
        )

    def to_frame(self) -> pd.DataFrame:
        frame = pd.DataFrame(self.X, columns=list(self.names))
        frame.insert(0, "window_index", list(self.window_index))
        frame.insert(0, "label", list(self.labels))
        frame.insert(0, "participant_id", list(self.participant_ids))
        return frame

    def to_csv(self, dest: str | os.PathLike | IO) -> None:
        """Write the matrix with 17 significant digits for an exact round trip"""
        self.to_frame().to_csv(dest, index=False, float_format=FLOAT_FORMAT)

    @classmethod
    def read_csv(cls, source: str | os.PathLike | IO) -> "FeatureMatrix":
        frame = pd.read_csv(
            source, float_precision="round_trip", dtype={"participant_id": str}
        )
        for column in ID_COLUMNS:
            if column not in frame.columns:
                raise KeyError(f"Feature table has no '{column}' column")
        names = [c for c in frame.columns if c not in ID_COLUMNS]
        values = frame[names].to_numpy(np.float64).reshape(len(frame), len(names))
        return cls(
            values,
            names,
            frame["participant_id"].tolist(),
            frame["label"].tolist(),
            frame["window_index"].tolist(),
        )


def extract_windows(
    windows: Sequence[WindowInstance],
    setting: Iterable[Order | str] = ORDERS,
    batch_size: int = 512,
) -> FeatureMatrix:
    """Extract the feature vectors of many windows into one matrix

    The computation is compiled once per window length and vectorised over
    batches of windows, all series of a batch at once.

    Raises:
        EmptyMatrix: if no windows are given
        FeatureError: naming the order and channel of a failing series
    """
    setting = validate_setting(setting)
    if not windows:
        raise EmptyMatrix("No windows to extract features from")
    length, rate = windows[0].length, windows[0].sample_rate
    for w in windows:
        if w.length != length or w.sample_rate != rate:
            raise ValueError("All windows must share one length and sample rate")
    _check_length(length, setting)

    index = jnp.asarray([o.degree for o in setting])
    chunks = []
    for start in range(0, len(windows), batch_size):
        chunk = windows[start : start + batch_size]
        batch = jnp.stack([w.samples[index] for w in chunk])
        chunks.append(np.asarray(_batch_features(batch, rate)))
    values = np.concatenate(chunks)
    _check_finite(values, setting)
    logger.debug("Extracted %d x %d feature matrix", *values.shape)

    return FeatureMatrix(
        values,
        feature_names(setting),
        [w.participant_id for w in windows],
        [w.label for w in windows],
        [w.window_index for w in windows],
    )
