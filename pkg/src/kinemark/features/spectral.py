"""Spectral, wavelet and cepstral descriptors

Every descriptor is computed from three representations of the series: the
one-sided magnitude spectrum ``M`` of the rectangular-window DFT, the
periodogram ``PSD`` and a continuous wavelet transform with the Ricker
wavelet. The frequency grid, filterbanks and wavelets depend only on the
series length and the sample rate, so they are built once on the host and
baked into the compiled function.
"""

__all__ = [
    "compute_spectral",
    "spectral_features",
    "magnitude_spectrum",
    "periodogram",
    "ricker",
    "cwt",
    "mel_filterbank",
    "lpc",
]

from functools import lru_cache, partial

import jax
import jax.numpy as jnp
import numpy as np
from jax.scipy.fft import dct

from kinemark import units
from kinemark.errors import SeriesTooShort
from kinemark.features.registry import (
    HUMAN_RANGE_HZ,
    MIN_LENGTH,
    N_CEPSTRAL,
    N_FFT_BINS,
    N_MEL_FILTERS,
    WAVELET_WIDTHS,
)
from kinemark.types import Array, Quantity
from kinemark.units import unit_registry as ureg
from kinemark.utils import entropy_bits, get_dtype_eps, safe_divide

# Relative prediction error below which the linear-prediction recursion stops
LPC_TOL = 1e-10


def ricker(points: int, a: float) -> np.ndarray:
    """The Ricker (Mexican hat) wavelet of width ``a`` sampled on ``points`` points"""
    amplitude = 2 / (np.sqrt(3 * a) * np.pi**0.25)
    t = np.arange(points) - (points - 1.0) / 2
    wsq = a**2
    return amplitude * (1 - t**2 / wsq) * np.exp(-(t**2) / (2 * wsq))


def cwt(x: Array, widths=WAVELET_WIDTHS) -> Array:
    """Ricker wavelet transform with 'same' alignment, shape ``(len(widths), n)``"""
    n = x.shape[-1]
    return jnp.stack(
        [
            jnp.convolve(x, jnp.asarray(ricker(min(10 * a, n), a)), mode="same")
            for a in widths
        ]
    )


def _hz_to_mel(f):
    return 2595.0 * np.log10(1.0 + f / 700.0)


def _mel_to_hz(m):
    return 700.0 * (10.0 ** (m / 2595.0) - 1.0)


@lru_cache
def mel_filterbank(
    n: int, sample_rate: float, n_filters: int = N_MEL_FILTERS
) -> np.ndarray:
    """Triangular mel filters over ``[0, fs/2]`` on the one-sided DFT grid

    Returns:
        Weights with shape ``(n_filters, n // 2 + 1)``
    """
    freq = np.fft.rfftfreq(n, 1.0 / sample_rate)
    mel = np.linspace(_hz_to_mel(0.0), _hz_to_mel(sample_rate / 2), n_filters + 2)
    edges = _mel_to_hz(mel)
    lower = (freq[None, :] - edges[:-2, None]) / np.diff(edges)[:-1, None]
    upper = (edges[2:, None] - freq[None, :]) / np.diff(edges)[1:, None]
    return np.maximum(0.0, np.minimum(lower, upper))


@lru_cache
def _grid(n: int, sample_rate: float):
    freq = np.fft.rfftfreq(n, 1.0 / sample_rate)
    k = freq.shape[0]
    one_sided = np.full(k, 2.0)
    one_sided[0] = 1.0
    if n % 2 == 0:
        one_sided[-1] = 1.0
    bins = np.minimum((2 * N_FFT_BINS * np.arange(k)) // n, N_FFT_BINS - 1)
    fft_bins = (bins[None, :] == np.arange(N_FFT_BINS)[:, None]).astype(float)
    lo, hi = HUMAN_RANGE_HZ
    human = ((freq >= lo) & (freq <= hi)).astype(float)
    return freq, one_sided, fft_bins, human


def magnitude_spectrum(x: Array) -> Array:
    return jnp.abs(jnp.fft.rfft(x))


def periodogram(x: Array, sample_rate: float) -> Array:
    """One-sided periodogram ``|X|^2 / (fs n)``, doubled off DC and Nyquist"""
    n = x.shape[-1]
    _, one_sided, _, _ = _grid(n, sample_rate)
    return jnp.asarray(one_sided) * jnp.abs(jnp.fft.rfft(x)) ** 2 / (sample_rate * n)


def lpc(x: Array, order: int = N_CEPSTRAL - 1) -> Array:
    """Linear prediction coefficients ``[1, a_1, ..., a_order]``

    Uses the Levinson-Durbin recursion on the biased autocorrelation. Once the
    prediction error drops below ``LPC_TOL`` times the signal energy the
    remaining reflection coefficients are zero.
    """
    n = x.shape[-1]
    r = [jnp.sum(x[: n - k] * x[k:]) for k in range(order + 1)]
    a = [jnp.ones_like(r[0])] + [jnp.zeros_like(r[0])] * order
    err = r[0]
    floor = LPC_TOL * r[0]
    for i in range(1, order + 1):
        acc = r[i] + sum(a[j] * r[i - j] for j in range(1, i))
        ok = err > floor
        k = jnp.where(ok, -acc / jnp.where(ok, err, 1.0), 0.0)
        a = [a[0]] + [a[j] + k * a[i - j] for j in range(1, i)] + [k] + a[i + 1 :]
        err = err * (1.0 - k**2)
    return jnp.stack(a)


def _first_at_least(cumulative: Array, fraction: float) -> Array:
    return jnp.argmax(cumulative >= fraction * cumulative[-1])


def _ols_slope(x: Array, y: Array) -> Array:
    xc = x - jnp.mean(x)
    return jnp.sum(xc * (y - jnp.mean(y))) / jnp.sum(xc**2)


def _turning_points(y: Array) -> Array:
    mid = y[1:-1]
    return jnp.sum((y[:-2] < mid) & (mid > y[2:]))


@partial(jax.jit, static_argnames=("sample_rate",))
def spectral_features(x: Array, sample_rate: float) -> Array:
    """The spectral block of one series, in registry order"""
    n = x.shape[-1]
    freq, one_sided, fft_bins, human = (jnp.asarray(v) for v in _grid(n, sample_rate))
    k = freq.shape[0]
    eps = get_dtype_eps(x)

    spectrum = jnp.fft.rfft(x)
    mag = jnp.abs(spectrum)
    power = jnp.abs(spectrum) ** 2
    psd = one_sided * power / (sample_rate * n)
    total = jnp.sum(mag)
    total_psd = jnp.sum(psd)

    fft_mean = safe_divide(fft_bins @ mag, jnp.sum(fft_bins, axis=1))
    fundamental = freq[1 + jnp.argmax(mag[1:])]

    coeffs = cwt(x)
    scale_energy = jnp.sum(coeffs**2, axis=1)
    wavelet_entropy = entropy_bits(safe_divide(scale_energy, jnp.sum(scale_energy)))

    a = lpc(x)
    lp_power = jnp.abs(jnp.fft.fft(a)) ** 2
    lpcc = jnp.abs(jnp.real(jnp.fft.ifft(jnp.log(jnp.maximum(lp_power, eps)))))

    filters = jnp.asarray(mel_filterbank(n, sample_rate))
    mel_energy = filters @ (power / n)
    mfcc = dct(jnp.log(jnp.maximum(mel_energy, eps)), type=2, norm="ortho")[:N_CEPSTRAL]

    peak = jnp.argmax(psd)
    idx = jnp.arange(k)
    below = psd < psd[peak] / 2
    left = jnp.max(jnp.where(below & (idx < peak), idx, -1)) + 1
    right = jnp.min(jnp.where(below & (idx > peak), idx, k)) - 1

    p = safe_divide(mag, total)
    centroid = jnp.sum(freq * p)
    spread = jnp.sqrt(jnp.sum((freq - centroid) ** 2 * p))
    flat = spread == 0
    safe_spread = jnp.where(flat, 1.0, spread)
    deviation = freq - centroid
    skewness = jnp.where(flat, 0.0, jnp.sum(deviation**3 * p) / safe_spread**3)
    kurtosis = jnp.where(flat, 0.0, jnp.sum(deviation**4 * p) / safe_spread**4)

    decrease = safe_divide(
        jnp.sum((mag[1:] - mag[0]) / jnp.arange(1, k)), jnp.sum(mag[1:])
    )
    cum_mag = jnp.cumsum(mag)
    distance = jnp.sum(cum_mag[-1] * jnp.arange(k) / (k - 1) - cum_mag)
    spectral_entropy = entropy_bits(safe_divide(psd, total_psd)) / jnp.log2(k)
    cum_sq = jnp.cumsum(mag**2)
    variation_den = jnp.sqrt(jnp.sum(mag[:-1] ** 2) * jnp.sum(mag[1:] ** 2))
    variation = jnp.where(
        variation_den == 0,
        0.0,
        1.0 - safe_divide(jnp.sum(mag[:-1] * mag[1:]), variation_den),
    )

    values = jnp.concatenate(
        [
            fft_mean,
            jnp.atleast_1d(fundamental),
            jnp.mean(jnp.abs(coeffs), axis=1),
            jnp.sqrt(jnp.mean(coeffs**2, axis=1)),
            jnp.atleast_1d(wavelet_entropy),
            jnp.std(coeffs, axis=1),
            jnp.var(coeffs, axis=1),
            jnp.atleast_1d(safe_divide(jnp.sum(psd * human), total_psd)),
            lpcc,
            mfcc,
            jnp.stack(
                [
                    jnp.max(psd),
                    freq[_first_at_least(cum_mag, 0.95)],
                    freq[_first_at_least(jnp.cumsum(psd), 0.5)],
                    freq[right] - freq[left],
                    centroid,
                    decrease,
                    distance,
                    spectral_entropy,
                    kurtosis,
                    _turning_points(mag).astype(x.dtype),
                    freq[_first_at_least(cum_sq, 0.95)],
                    freq[_first_at_least(cum_sq, 0.05)],
                    skewness,
                    _ols_slope(freq, p),
                    spread,
                    variation,
                ]
            ),
        ]
    )
    # An all-zero spectrum has every spectral descriptor defined as 0
    return jnp.where(total == 0, 0.0, values)


@units.quantity_input(sample_rate=ureg.Hz)
def compute_spectral(x: Array, sample_rate: Quantity = 60.0) -> Array:
    """Compute the 26 spectral descriptors (89 values) of a series

    Args:
        x: The series
        sample_rate: Sampling rate [frequency unit]

    Raises:
        SeriesTooShort: if the series has fewer than 8 samples
    """
    x = jnp.asarray(x, dtype=jnp.float64)
    if x.ndim != 1 or x.shape[0] < MIN_LENGTH["spectral"]:
        raise SeriesTooShort(x.shape[-1] if x.ndim else 0, MIN_LENGTH["spectral"])
    return spectral_features(x, float(sample_rate.magnitude))
