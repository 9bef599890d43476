__all__ = ["compute_statistical", "statistical_features", "histogram_counts"]

from functools import partial

import jax
import jax.numpy as jnp

from kinemark import units
from kinemark.errors import SeriesTooShort
from kinemark.features.registry import MIN_LENGTH, N_ECDF, N_HIST, PERCENTILES
from kinemark.types import Array, Quantity
from kinemark.units import unit_registry as ureg
from kinemark.utils import entropy_bits, safe_divide


def histogram_counts(x: Array, bins: int = N_HIST) -> Array:
    """Counts in equal-width bins over ``[min, max]``

    Bin assignment matches ``numpy.histogram``: bins are half-open except the
    last, and a constant series is binned over ``[c - 0.5, c + 0.5]``.
    """
    lo, hi = jnp.min(x), jnp.max(x)
    flat = hi == lo
    lo = jnp.where(flat, lo - 0.5, lo)
    hi = jnp.where(flat, hi + 0.5, hi)
    edges = lo + (hi - lo) * jnp.arange(bins + 1) / bins
    edges = edges.at[-1].set(hi)
    idx = jnp.floor((x - lo) * (bins / (hi - lo))).astype(int)
    idx = jnp.clip(idx, 0, bins - 1)
    idx = jnp.where(x < edges[idx], idx - 1, idx)
    idx = jnp.where((x >= edges[idx + 1]) & (idx != bins - 1), idx + 1, idx)
    return jnp.sum(idx[:, None] == jnp.arange(bins)[None, :], axis=0).astype(x.dtype)


@partial(jax.jit, static_argnames=("sample_rate",))
def statistical_features(x: Array, sample_rate: float) -> Array:
    """The statistical block of one series, in registry order"""
    n = x.shape[-1]
    xs = jnp.sort(x)
    lo, hi = xs[0], xs[-1]
    flat = hi == lo

    energy = jnp.sum(x**2)
    average_power = energy * sample_rate / (n - 1)

    grid = lo + (hi - lo) * jnp.arange(N_ECDF) / (N_ECDF - 1)
    grid = grid.at[-1].set(hi)
    ecdf = jnp.sum(x[None, :] <= grid[:, None], axis=1) / n

    ranks = [-(-n * num // den) - 1 for num, den in PERCENTILES]
    percentile = xs[jnp.asarray(ranks)]
    percentile_count = jnp.sum(x[None, :] <= percentile[:, None], axis=1)

    hist = histogram_counts(x)
    entropy = entropy_bits(hist / n)

    mean = jnp.mean(x)
    d = x - mean
    m2 = jnp.where(flat, 0.0, jnp.mean(d**2))
    m3 = jnp.mean(d**3)
    m4 = jnp.mean(d**4)
    degenerate = m2 == 0
    skewness = jnp.where(degenerate, 0.0, safe_divide(m3, m2**1.5))
    kurtosis = jnp.where(degenerate, 0.0, safe_divide(m4, m2**2) - 3.0)

    median = jnp.median(x)
    q75, q25 = jnp.percentile(x, jnp.asarray([75.0, 25.0]))

    return jnp.concatenate(
        [
            jnp.stack([energy, average_power]),
            ecdf,
            percentile,
            percentile_count.astype(x.dtype),
            jnp.atleast_1d(entropy),
            hist,
            jnp.stack(
                [
                    q75 - q25,
                    kurtosis,
                    hi,
                    mean,
                    jnp.mean(jnp.abs(d)),
                    median,
                    jnp.median(jnp.abs(x - median)),
                    lo,
                    hi - lo,
                    jnp.sqrt(jnp.mean(x**2)),
                    skewness,
                    jnp.sqrt(m2),
                    m2,
                ]
            ),
        ]
    )


@units.quantity_input(sample_rate=ureg.Hz)
def compute_statistical(x: Array, sample_rate: Quantity = 60.0) -> Array:
    """Compute the 20 statistical descriptors (40 values) of a series

    Args:
        x: The series
        sample_rate: Sampling rate [frequency unit]; only the average power
            depends on it

    Raises:
        SeriesTooShort: if the series has fewer than 4 samples
    """
    x = jnp.asarray(x, dtype=jnp.float64)
    if x.ndim != 1 or x.shape[0] < MIN_LENGTH["statistical"]:
        raise SeriesTooShort(x.shape[-1] if x.ndim else 0, MIN_LENGTH["statistical"])
    return statistical_features(x, float(sample_rate.magnitude))
