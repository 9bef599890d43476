__all__ = ["smote", "minority_class"]

import logging

import numpy as np

from kinemark.errors import MinorityTooSmall, NonFiniteInput, SingleClassTraining
from kinemark.types import Array

logger = logging.getLogger(__name__)


def minority_class(y: Array) -> int:
    """The class with fewer rows; class 1 when the counts are equal"""
    y = np.asarray(y).astype(int)
    return 0 if np.sum(y == 1) > np.sum(y == 0) else 1


def smote(
    X: Array, y: Array, k_neighbors: int = 5, seed: int = 0
) -> tuple[np.ndarray, np.ndarray]:
    """Balance two classes with synthetic minority samples

    Each synthetic row is ``x + u * (x_nn - x)`` for a random minority row
    ``x``, one of its ``k_neighbors`` nearest minority neighbours ``x_nn``
    (Euclidean, ties toward the lower row) and ``u`` uniform on [0, 1). The
    original rows come first, unchanged, followed by the synthetic ones.

    Raises:
        SingleClassTraining: if only one class is present
        MinorityTooSmall: if the minority class has fewer than two rows
        NonFiniteInput: if any value is not finite
    """
    X = np.asarray(X, dtype=np.float64)
    y = np.asarray(y).astype(int).ravel()
    if X.ndim != 2 or X.shape[0] != y.size:
        raise ValueError(f"{y.size} labels do not match a matrix of shape {X.shape}")
    if not np.isfinite(X).all():
        raise NonFiniteInput("SMOTE requires finite feature values")
    classes = np.unique(y)
    if classes.size < 2:
        raise SingleClassTraining(int(classes[0]) if classes.size else None)

    minority = minority_class(y)
    members = X[y == minority]
    n_min, n_maj = members.shape[0], int(np.sum(y != minority))
    if n_min < 2:
        raise MinorityTooSmall(n_min)
    n_new = n_maj - n_min
    if n_new == 0:
        return X.copy(), y.copy()

    k = min(k_neighbors, n_min - 1)
    d2 = np.sum((members[:, None, :] - members[None, :, :]) ** 2, axis=-1)
    np.fill_diagonal(d2, np.inf)
    neighbors = np.argsort(d2, axis=1, kind="stable")[:, :k]

    rng = np.random.default_rng(seed)
    base = rng.integers(0, n_min, size=n_new)
    pick = rng.integers(0, k, size=n_new)
    u = rng.random(n_new)[:, None]
    origin = members[base]
    synthetic = origin + u * (members[neighbors[base, pick]] - origin)
    logger.debug("SMOTE added %d rows of class %d (k=%d)", n_new, minority, k)

    X_out = np.concatenate([X, synthetic])
    y_out = np.concatenate([y, np.full(n_new, minority, dtype=y.dtype)])
    return X_out, y_out
