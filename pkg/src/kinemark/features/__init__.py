from kinemark.features.matrix import (
    FeatureMatrix as FeatureMatrix,
    FeatureVector as FeatureVector,
    extract_window as extract_window,
    extract_windows as extract_windows,
    series_features as series_features,
    validate_setting as validate_setting,
)
from kinemark.features.registry import (
    REGISTRY as REGISTRY,
    REGISTRY_VERSION as REGISTRY_VERSION,
    Category as Category,
    FeatureDescriptor as FeatureDescriptor,
    feature_names as feature_names,
    registry_table as registry_table,
    series_labels as series_labels,
)
from kinemark.features.spectral import (
    compute_spectral as compute_spectral,
    magnitude_spectrum as magnitude_spectrum,
    periodogram as periodogram,
)
from kinemark.features.statistical import compute_statistical as compute_statistical
from kinemark.features.temporal import compute_temporal as compute_temporal
