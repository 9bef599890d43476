"""The versioned catalog of per-series features

Each :class:`FeatureDescriptor` fixes a feature's name, category, output arity
and formula. The order of ``REGISTRY`` is the order in which values appear in
every feature vector; the formulas are documented in full in
``docs/registry.md``.
"""

__all__ = [
    "Category",
    "FeatureDescriptor",
    "REGISTRY",
    "REGISTRY_VERSION",
    "descriptors",
    "series_labels",
    "feature_names",
    "registry_table",
]

import enum
from collections.abc import Iterable
from dataclasses import dataclass

from kinemark.corpus.recording import CHANNELS

REGISTRY_VERSION = "1.0"

N_ECDF = 10
N_HIST = 10
N_FFT_BINS = 10
WAVELET_WIDTHS = tuple(range(1, 10))
N_CEPSTRAL = 12
N_MEL_FILTERS = 26
NEIGHBOURHOOD = 10
HUMAN_RANGE_HZ = (0.6, 2.5)
PERCENTILES = ((1, 5), (4, 5))

MIN_LENGTH = {"statistical": 4, "temporal": 4, "spectral": 8}


class Category(str, enum.Enum):
    STATISTICAL = "statistical"
    TEMPORAL = "temporal"
    SPECTRAL = "spectral"


@dataclass(frozen=True)
class FeatureDescriptor:
    name: str
    category: Category
    arity: int
    formula: str

    def __post_init__(self) -> None:
        if self.arity < 1:
            raise ValueError(f"Feature '{self.name}' must have arity >= 1")

    @property
    def labels(self) -> tuple[str, ...]:
        if self.arity == 1:
            return (self.name,)
        return tuple(f"{self.name}_{k}" for k in range(self.arity))


def _stat(name: str, formula: str, arity: int = 1) -> FeatureDescriptor:
    return FeatureDescriptor(name, Category.STATISTICAL, arity, formula)


def _temp(name: str, formula: str) -> FeatureDescriptor:
    return FeatureDescriptor(name, Category.TEMPORAL, 1, formula)


def _spec(name: str, formula: str, arity: int = 1) -> FeatureDescriptor:
    return FeatureDescriptor(name, Category.SPECTRAL, arity, formula)


_W = len(WAVELET_WIDTHS)

REGISTRY: tuple[FeatureDescriptor, ...] = (
    # statistical
    _stat("Absolute energy", "sum(x^2)"),
    _stat("Average power", "sum(x^2) / ((n - 1) dt)"),
    _stat(
        "ECDF",
        "fraction of samples <= g_j, g_j = min + (max - min) j / 9, j = 0..9",
        N_ECDF,
    ),
    _stat("ECDF Percentile", "sorted(x)[ceil(p n) - 1] for p = 0.2, 0.8", 2),
    _stat("ECDF Percentile Count", "#(x <= ECDF Percentile_k)", 2),
    _stat("Entropy", "Shannon entropy (bits) of the normalized 10-bin histogram"),
    _stat(
        "Histogram",
        "counts in 10 equal-width bins over [min, max] (last bin closed; "
        "[c - 0.5, c + 0.5] for a constant series)",
        N_HIST,
    ),
    _stat("Interquartile range", "q75 - q25 with linear interpolation"),
    _stat("Kurtosis", "m4 / m2^2 - 3 (population moments); 0 if m2 = 0"),
    _stat("Max", "max(x)"),
    _stat("Mean", "mean(x)"),
    _stat("Mean absolute deviation", "mean(|x - mean(x)|)"),
    _stat("Median", "median(x)"),
    _stat("Median absolute deviation", "median(|x - median(x)|)"),
    _stat("Min", "min(x)"),
    _stat("Peak to peak distance", "max(x) - min(x)"),
    _stat("Root mean square", "sqrt(mean(x^2))"),
    _stat("Skewness", "m3 / m2^1.5 (population moments); 0 if m2 = 0"),
    _stat("Standard deviation", "sqrt(m2)"),
    _stat("Variance", "m2 = mean((x - mean(x))^2)"),
    # temporal
    _temp("Area under the curve", "trapezoid rule over t_i = i dt"),
    _temp("Autocorrelation", "sum(x_i x_{i+1}) / sum(x_i^2); 0 if sum(x^2) = 0"),
    _temp("Centroid", "sum(t_i x_i^2) / sum(x_i^2); 0 if sum(x^2) = 0"),
    _temp("Mean absolute diff", "mean(|diff(x)|)"),
    _temp("Mean diff", "mean(diff(x))"),
    _temp("Median absolute diff", "median(|diff(x)|)"),
    _temp("Median diff", "median(diff(x))"),
    _temp("Negative turning points", "#(x_{i-1} > x_i < x_{i+1})"),
    _temp(
        "Neighbourhood peaks",
        "#(x_i > x_j for all 0 < |i - j| <= 10, and x_i > mean(x)); "
        "only samples with a full neighbourhood",
    ),
    _temp("Positive turning points", "#(x_{i-1} < x_i > x_{i+1})"),
    _temp("Signal distance", "sum(sqrt(1 + diff(x)^2))"),
    _temp("Slope", "least-squares slope of x against t"),
    _temp("Sum absolute diff", "sum(|diff(x)|)"),
    _temp(
        "Zero crossing rate",
        "#(sign changes between consecutive samples); zeros take the previous sign",
    ),
    # spectral
    _spec(
        "FFT mean coefficient",
        "mean of M over bins k with floor(20 k / n) = b (b = 0..9, last bin "
        "includes Nyquist); 0 for an empty bin",
        N_FFT_BINS,
    ),
    _spec("Fundamental frequency", "f at argmax of M excluding DC"),
    _spec("Wavelet absolute mean", "mean(|c_a|), Ricker CWT, widths a = 1..9", _W),
    _spec("Wavelet energy", "sqrt(mean(c_a^2))", _W),
    _spec(
        "Wavelet entropy",
        "Shannon entropy (bits) of E_a / sum(E), E_a = sum(c_a^2); 0 if sum(E) = 0",
    ),
    _spec("Wavelet standard deviation", "std(c_a) (population)", _W),
    _spec("Wavelet variance", "var(c_a) (population)", _W),
    _spec("Human range energy", "sum(PSD over 0.6 <= f <= 2.5 Hz) / sum(PSD)"),
    _spec(
        "LPCC",
        "|Re(IDFT(log |DFT(a)|^2))|, a = [1, a_1..a_11] from Levinson-Durbin",
        N_CEPSTRAL,
    ),
    _spec(
        "MFCC",
        "DCT-II (orthonormal) of log energies of 26 triangular mel filters over "
        "[0, fs/2] applied to |X|^2 / n; first 12",
        N_CEPSTRAL,
    ),
    _spec("Max power spectrum", "max(PSD)"),
    _spec("Maximum frequency", "smallest f with cumsum(M) >= 0.95 sum(M)"),
    _spec("Median frequency", "smallest f with cumsum(PSD) >= 0.5 sum(PSD)"),
    _spec(
        "Power bandwidth",
        "f_right - f_left of the contiguous band around argmax(PSD) with "
        "PSD >= max(PSD) / 2",
    ),
    _spec("Spectral centroid", "c = sum(f M) / sum(M)"),
    _spec("Spectral decrease", "sum_{k>=1} (M_k - M_0) / k / sum_{k>=1} M_k"),
    _spec(
        "Spectral distance",
        "sum(g_k - C_k), C = cumsum(M), g_k = C_last k / (K - 1)",
    ),
    _spec("Spectral entropy", "entropy (bits) of PSD / sum(PSD), divided by log2(K)"),
    _spec("Spectral kurtosis", "sum((f - c)^4 M) / sum(M) / s^4; 0 if s = 0"),
    _spec("Spectral positive turning points", "#(M_{k-1} < M_k > M_{k+1})"),
    _spec("Spectral roll-off", "smallest f with cumsum(M^2) >= 0.95 sum(M^2)"),
    _spec("Spectral roll-on", "smallest f with cumsum(M^2) >= 0.05 sum(M^2)"),
    _spec("Spectral skewness", "sum((f - c)^3 M) / sum(M) / s^3; 0 if s = 0"),
    _spec("Spectral slope", "least-squares slope of M / sum(M) against f"),
    _spec("Spectral spread", "s = sqrt(sum((f - c)^2 M) / sum(M))"),
    _spec(
        "Spectral variation",
        "1 - sum(M_k M_{k+1}) / sqrt(sum(M_k^2) sum(M_{k+1}^2)); 0 if the "
        "denominator is 0",
    ),
)


def _check_unique(registry: Iterable[FeatureDescriptor]) -> None:
    seen: set[str] = set()
    for descriptor in registry:
        if descriptor.name in seen:
            raise ValueError(f"Duplicate feature name '{descriptor.name}'")
        seen.add(descriptor.name)


_check_unique(REGISTRY)


def descriptors(
    category: Category | str | None = None,
) -> tuple[FeatureDescriptor, ...]:
    if category is None:
        return REGISTRY
    category = Category(category)
    return tuple(d for d in REGISTRY if d.category is category)


def series_labels(category: Category | str | None = None) -> tuple[str, ...]:
    """The output labels of one series, in vector order"""
    return tuple(label for d in descriptors(category) for label in d.labels)


def feature_names(orders: Iterable[str]) -> tuple[str, ...]:
    """Names ``{order}_{Channel}_{Feature}[_k]`` for every order and channel"""
    labels = series_labels()
    return tuple(
        f"{getattr(order, 'value', order)}_{channel}_{label}"
        for order in orders
        for channel in CHANNELS
        for label in labels
    )


def registry_table() -> list[dict]:
    """A machine-readable listing of the registry"""
    return [
        {
            "name": d.name,
            "category": d.category.value,
            "arity": d.arity,
            "formula": d.formula,
        }
        for d in REGISTRY
    ]
