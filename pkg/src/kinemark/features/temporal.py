__all__ = ["compute_temporal", "temporal_features", "zero_crossings"]

from functools import partial

import jax
import jax.numpy as jnp

from kinemark import units
from kinemark.errors import SeriesTooShort
from kinemark.features.registry import MIN_LENGTH, NEIGHBOURHOOD
from kinemark.types import Array, Quantity
from kinemark.units import unit_registry as ureg
from kinemark.utils import safe_divide


def zero_crossings(x: Array) -> Array:
    """Count sign changes between consecutive samples

    A zero takes the sign of the last non-zero sample before it; leading zeros
    have no sign and never count as a crossing.
    """
    sign = jnp.sign(x).astype(int)
    position = jnp.where(sign != 0, jnp.arange(x.shape[-1]), -1)
    last = jax.lax.cummax(position, axis=0)
    filled = jnp.where(last >= 0, sign[jnp.maximum(last, 0)], 0)
    return jnp.sum(filled[1:] * filled[:-1] < 0)


def _neighbourhood_peaks(x: Array, radius: int = NEIGHBOURHOOD) -> Array:
    n = x.shape[-1]
    if n < 2 * radius + 1:
        return jnp.zeros((), dtype=int)
    centre = x[radius : n - radius]
    peak = centre > jnp.mean(x)
    for r in range(1, radius + 1):
        peak &= centre > x[radius - r : n - radius - r]
        peak &= centre > x[radius + r : n - radius + r]
    return jnp.sum(peak)


@partial(jax.jit, static_argnames=("dt",))
def temporal_features(x: Array, dt: float) -> Array:
    """The temporal block of one series, in registry order"""
    n = x.shape[-1]
    t = jnp.arange(n) * dt
    diff = jnp.diff(x)
    energy = jnp.sum(x**2)

    mid = x[1:-1]
    negative_turning = jnp.sum((x[:-2] > mid) & (mid < x[2:]))
    positive_turning = jnp.sum((x[:-2] < mid) & (mid > x[2:]))

    tc = t - jnp.mean(t)
    slope = jnp.sum(tc * (x - jnp.mean(x))) / jnp.sum(tc**2)

    values = [
        jnp.sum((x[1:] + x[:-1]) * dt / 2.0),
        safe_divide(jnp.sum(x[:-1] * x[1:]), energy),
        safe_divide(jnp.sum(t * x**2), energy),
        jnp.mean(jnp.abs(diff)),
        jnp.mean(diff),
        jnp.median(jnp.abs(diff)),
        jnp.median(diff),
        negative_turning,
        _neighbourhood_peaks(x),
        positive_turning,
        jnp.sum(jnp.sqrt(1.0 + diff**2)),
        slope,
        jnp.sum(jnp.abs(diff)),
        zero_crossings(x),
    ]
    return jnp.stack([jnp.asarray(v, dtype=x.dtype) for v in values])


@units.quantity_input(dt=ureg.s)
def compute_temporal(x: Array, dt: Quantity = 1.0 / 60.0) -> Array:
    """Compute the 14 temporal descriptors of a series

    Args:
        x: The series
        dt: The sample spacing [time unit]

    Raises:
        SeriesTooShort: if the series has fewer than 4 samples
    """
    x = jnp.asarray(x, dtype=jnp.float64)
    if x.ndim != 1 or x.shape[0] < MIN_LENGTH["temporal"]:
        raise SeriesTooShort(x.shape[-1] if x.ndim else 0, MIN_LENGTH["temporal"])
    return temporal_features(x, float(dt.magnitude))
