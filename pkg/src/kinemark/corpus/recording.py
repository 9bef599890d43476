"""Head-tracking recordings and their canonical delimited-text format
"""

__all__ = [
    "CHANNELS",
    "Outcome",
    "ColumnMapping",
    "MotionRecording",
    "load_recording",
    "save_recording",
]

import enum
import logging
import os
from collections.abc import Mapping
from dataclasses import dataclass, field
from pathlib import Path
from typing import IO, Any

import equinox as eqx
import jax.numpy as jnp
import numpy as np
import pandas as pd

from kinemark.errors import (
    EmptyRecording,
    InvalidOutcome,
    MissingColumn,
    NonFiniteSample,
    RateMismatch,
)
from kinemark.types import Array
from kinemark.units import magnitude, unit_registry as ureg

logger = logging.getLogger(__name__)

CHANNELS = ("X", "Y", "Z", "Pitch", "Roll", "Yaw")
TIME_COLUMN = "t"

# Float format that round-trips float64 exactly through text
FLOAT_FORMAT = "%.17g"


class Outcome(str, enum.Enum):
    WELL = "Well"
    SICK = "Sick"

    @classmethod
    def parse(cls, value: Any) -> "Outcome":
        if isinstance(value, Outcome):
            return value
        if isinstance(value, str):
            for outcome in cls:
                if value.strip().lower() == outcome.value.lower():
                    return outcome
        raise InvalidOutcome(value)


@dataclass(frozen=True)
class ColumnMapping:
    """How the columns of a source table map onto the canonical channels

    Args:
        columns: Canonical channel name to source header; channels that are not
            listed are looked up under their canonical name
        time_column: Name of the optional time column (seconds); it is used to
            verify the declared sample rate when present
        participant_id: Participant id; defaults to the file stem when loading
            from a path
        outcome: ``Well`` or ``Sick`` (case-insensitive)
        sample_rate: Declared sample rate [Hz]
    """

    columns: Mapping[str, str] = field(default_factory=dict)
    time_column: str | None = TIME_COLUMN
    participant_id: str | None = None
    outcome: Outcome | str | None = None
    sample_rate: float = 60.0

    def header(self, channel: str) -> str:
        return self.columns.get(channel, channel)


class MotionRecording(eqx.Module):
    """One participant's 6-channel head-movement signal and sickness outcome

    Args:
        participant_id: Opaque participant identifier
        outcome: The participant's :class:`Outcome`
        sample_rate: Sampling rate [frequency unit]
        channels: Array with shape ``(6, n_samples)`` in canonical channel order
            (X, Y, Z in cm, then Pitch, Roll, Yaw in degrees)
    """

    participant_id: str = eqx.field(static=True)
    outcome: Outcome = eqx.field(static=True, converter=Outcome.parse)
    sample_rate: float = eqx.field(
        static=True, converter=lambda v: magnitude(v, ureg.Hz)
    )
    channels: Array = eqx.field(
        converter=lambda v: jnp.asarray(v, dtype=jnp.float64)
    )

    def __check_init__(self) -> None:
        if not self.sample_rate > 0:
            raise ValueError(f"sample_rate must be positive, got {self.sample_rate}")
        if self.channels.ndim != 2 or self.channels.shape[0] != len(CHANNELS):
            raise ValueError(
                "channels must have shape (6, n_samples), got "
                f"{tuple(self.channels.shape)}"
            )
        if self.channels.shape[1] == 0:
            raise EmptyRecording(f"recording of '{self.participant_id}'")
        bad = ~np.isfinite(np.asarray(self.channels))
        if bad.any():
            channel, row = np.argwhere(bad.T)[0][::-1]
            raise NonFiniteSample(int(row), CHANNELS[int(channel)])

    @property
    def n_samples(self) -> int:
        return int(self.channels.shape[1])

    @property
    def duration_s(self) -> float:
        return self.n_samples / self.sample_rate

    def channel(self, name: str) -> Array:
        return self.channels[CHANNELS.index(name)]


def load_recording(
    source: str | os.PathLike | IO, schema: ColumnMapping | None = None
) -> MotionRecording:
    """Load one recording from a comma-delimited table with a header row

    Args:
        source: A path or an open (binary or text) file object
        schema: The :class:`ColumnMapping`; the participant id defaults to the
            file stem, or ``unknown`` for a buffer without a name, and the
            outcome must be given here or by the manifest

    Returns:
        The :class:`MotionRecording` with channels in canonical order

    Raises:
        MissingColumn: if a channel column is absent
        NonFiniteSample: for the first row holding a non-finite or non-numeric
            value
        RateMismatch: if the time column disagrees with the declared rate by
            more than 1%
        EmptyRecording: if the table has no rows
    """
    schema = ColumnMapping() if schema is None else schema
    participant_id = schema.participant_id
    if participant_id is None:
        participant_id = _source_stem(source)
    if schema.outcome is None:
        raise InvalidOutcome(None)

    try:
        table = pd.read_csv(source, float_precision="round_trip")
    except pd.errors.EmptyDataError:
        raise EmptyRecording(f"table for '{participant_id}'") from None
    if len(table) == 0:
        raise EmptyRecording(f"table for '{participant_id}'")

    headers = [schema.header(c) for c in CHANNELS]
    for header in headers:
        if header not in table.columns:
            raise MissingColumn(header)

    values = np.stack(
        [pd.to_numeric(table[h], errors="coerce").to_numpy(np.float64) for h in headers]
    )
    bad = ~np.isfinite(values)
    if bad.any():
        row = int(np.flatnonzero(bad.any(axis=0))[0])
        raise NonFiniteSample(row, headers[int(np.flatnonzero(bad[:, row])[0])])

    if schema.time_column is not None and schema.time_column in table.columns:
        _check_rate(table[schema.time_column], schema.sample_rate)

    logger.debug(
        "Loaded %d samples for participant '%s'", values.shape[1], participant_id
    )
    return MotionRecording(
        participant_id=str(participant_id),
        outcome=schema.outcome,
        sample_rate=schema.sample_rate,
        channels=values,
    )


def _source_stem(source: str | os.PathLike | IO) -> str:
    # Open files carry their path in ``name``; in-memory buffers have none
    name = source
    if not isinstance(source, str | os.PathLike):
        name = getattr(source, "name", None)
    if not isinstance(name, str | os.PathLike):
        return "unknown"
    return Path(name).stem


def _check_rate(time: pd.Series, declared_hz: float) -> None:
    t = pd.to_numeric(time, errors="coerce").to_numpy(np.float64)
    bad = ~np.isfinite(t)
    if bad.any():
        raise NonFiniteSample(int(np.flatnonzero(bad)[0]), str(time.name))
    if len(t) < 2:
        return
    mean_dt = float(np.mean(np.diff(t)))
    if mean_dt <= 0 or abs(mean_dt * declared_hz - 1) > 0.01:
        observed = 1 / mean_dt if mean_dt > 0 else float("nan")
        raise RateMismatch(observed, declared_hz)


def save_recording(
    recording: MotionRecording, dest: str | os.PathLike | IO, include_time: bool = True
) -> None:
    """Write a recording in the canonical table format

    Values are written with 17 significant digits so that reloading yields
    bit-identical channel values.
    """
    data = np.asarray(recording.channels)
    table = pd.DataFrame({name: data[i] for i, name in enumerate(CHANNELS)})
    if include_time:
        time = np.arange(recording.n_samples) / recording.sample_rate
        table.insert(0, TIME_COLUMN, time)
    table.to_csv(dest, index=False, float_format=FLOAT_FORMAT)
