"""Kinematic derivative stacks and their fixed-length windows

The movement signal of a labeled segment is differentiated three times to give
velocity, acceleration and jerk. All four orders keep the segment's length and
sample indices, so a single window index range selects aligned slices from
every order and channel.
"""

__all__ = [
    "Order",
    "ORDERS",
    "KinematicStack",
    "WindowInstance",
    "differentiate",
    "build_stack",
    "segment_stack",
    "window_stack",
    "stack_windows",
]

import enum
from collections.abc import Sequence

import equinox as eqx
import jax.numpy as jnp

from kinemark import units
from kinemark.corpus.recording import CHANNELS, MotionRecording
from kinemark.corpus.segments import LabeledSegment
from kinemark.errors import SeriesTooShort
from kinemark.types import Array, Quantity
from kinemark.units import unit_registry as ureg
from kinemark.units.registry import ANGLE_UNIT, POSITION_UNIT
from kinemark.utils import samples_for

MIN_DIFFERENTIATE = 3
MIN_STACK = 4


class Order(str, enum.Enum):
    MOVEMENT = "movement"
    VELOCITY = "velocity"
    ACCELERATION = "acceleration"
    JERK = "jerk"

    @property
    def degree(self) -> int:
        return ORDERS.index(self)


ORDERS = tuple(Order)


@units.quantity_input(dt=ureg.s)
def differentiate(x: Array, dt: Quantity) -> Array:
    """Differentiate a uniformly sampled series along its last axis

    Interior points use central differences ``(x[i+1] - x[i-1]) / (2 dt)`` and
    the endpoints use one-sided first differences, so the output has the same
    length as the input.

    Args:
        x: The series, or a stack of series along the leading axes
        dt: The sample spacing [time unit]

    Raises:
        SeriesTooShort: if the series has fewer than 3 samples
    """
    x = jnp.asarray(x, dtype=jnp.float64)
    n = x.shape[-1] if x.ndim else 0
    if n < MIN_DIFFERENTIATE:
        raise SeriesTooShort(n, MIN_DIFFERENTIATE)
    step = float(dt.magnitude)
    if not step > 0:
        raise ValueError(f"dt must be positive, got {step}")
    return jnp.gradient(x, step, axis=-1)


class KinematicStack(eqx.Module):
    """Movement, velocity, acceleration and jerk of one 6-channel segment

    Args:
        series: Array with shape ``(4, 6, n_samples)`` indexed by
            ``(order, channel, sample)``
        sample_rate: Sampling rate [Hz]
        participant_id: The participant the segment belongs to, if known
        label: The segment label, if known
    """

    series: Array
    sample_rate: float = eqx.field(static=True)
    participant_id: str | None = eqx.field(static=True, default=None)
    label: int | None = eqx.field(static=True, default=None)

    def __check_init__(self) -> None:
        expected = (len(ORDERS), len(CHANNELS))
        if self.series.ndim != 3 or self.series.shape[:2] != expected:
            raise ValueError(
                "A KinematicStack holds 4 orders of 6 channels; got shape "
                f"{tuple(self.series.shape)}"
            )

    @property
    def n_samples(self) -> int:
        return int(self.series.shape[-1])

    @property
    def dt_s(self) -> float:
        return 1.0 / self.sample_rate

    def order(self, order: Order | str) -> Array:
        return self.series[Order(order).degree]

    @staticmethod
    def unit(order: Order | str, channel: str):
        """The physical unit of a given order and channel"""
        base = POSITION_UNIT if CHANNELS.index(channel) < 3 else ANGLE_UNIT
        return base / ureg.s ** Order(order).degree


@units.quantity_input(sample_rate=ureg.Hz)
def build_stack(
    channels: Array,
    sample_rate: Quantity = 60.0,
    participant_id: str | None = None,
    label: int | None = None,
) -> KinematicStack:
    """Compute the four-order derivative stack of a 6-channel segment

    Args:
        channels: Array with shape ``(6, n_samples)``
        sample_rate: Sampling rate [frequency unit]

    Raises:
        SeriesTooShort: if the segment has fewer than 4 samples
    """
    movement = jnp.asarray(channels, dtype=jnp.float64)
    n = movement.shape[-1]
    if n < MIN_STACK:
        raise SeriesTooShort(n, MIN_STACK)
    rate = float(sample_rate.magnitude)
    dt = 1.0 / rate
    velocity = differentiate(movement, dt)
    acceleration = differentiate(velocity, dt)
    jerk = differentiate(acceleration, dt)
    return KinematicStack(
        series=jnp.stack([movement, velocity, acceleration, jerk]),
        sample_rate=rate,
        participant_id=participant_id,
        label=label,
    )


def segment_stack(
    recording: MotionRecording, segment: LabeledSegment
) -> KinematicStack:
    """Build the derivative stack of a single labeled segment

    Derivatives are computed within the segment only, so no window mixes
    labeled and unlabeled spans.
    """
    return build_stack(
        segment.slice(recording),
        recording.sample_rate,
        participant_id=segment.participant_id,
        label=int(segment.label),
    )


class WindowInstance(eqx.Module):
    """One fixed-length slice of a :class:`KinematicStack`

    ``samples`` has shape ``(4, 6, W)``; every order and channel is sliced over the
    same sample range ``[start, start + W)`` of the segment.
    """

    samples: Array
    participant_id: str | None = eqx.field(static=True)
    label: int | None = eqx.field(static=True)
    window_index: int = eqx.field(static=True)
    start: int = eqx.field(static=True)
    sample_rate: float = eqx.field(static=True)

    @property
    def length(self) -> int:
        return int(self.samples.shape[-1])


@units.quantity_input(window_len=ureg.s, stride=ureg.s)
def window_stack(
    stack: KinematicStack,
    window_len: Quantity = 1.0,
    stride: Quantity | None = None,
) -> list[WindowInstance]:
    """Slice a stack into fixed-length windows

    Windows start at samples ``0, S, 2S, ...`` and any trailing partial window is
    dropped.

    Args:
        stack: The derivative stack of one segment
        window_len: Window length [time unit]
        stride: Step between window starts [time unit]; defaults to the window
            length (non-overlapping windows)

    Raises:
        NonIntegralWindow: if the window or stride is not a whole number of
            samples at the stack's rate
        SeriesTooShort: if a window would hold fewer than 4 samples
    """
    rate = stack.sample_rate
    length = samples_for(float(window_len.magnitude), rate, what="window")
    if stride is None:
        step = length
    else:
        step = samples_for(float(stride.magnitude), rate, what="stride")
    if length < MIN_STACK:
        raise SeriesTooShort(length, MIN_STACK)

    n = stack.n_samples
    count = (n - length) // step + 1 if n >= length else 0
    return [
        WindowInstance(
            samples=stack.series[..., i * step : i * step + length],
            participant_id=stack.participant_id,
            label=stack.label,
            window_index=i,
            start=i * step,
            sample_rate=rate,
        )
        for i in range(count)
    ]


def stack_windows(
    windows: Sequence[WindowInstance], orders: Sequence[Order | str] = ORDERS
) -> Array:
    """Batch windows into an array with shape ``(n_windows, n_orders, 6, W)``"""
    index = jnp.asarray([Order(o).degree for o in orders])
    if not windows:
        return jnp.zeros((0, len(index), len(CHANNELS), 0))
    return jnp.stack([w.samples[index] for w in windows])
