"""Recursive feature elimination driven by random forest importances
"""

__all__ = ["FeatureMask", "rfe_select"]

import logging
import math
import os
from collections.abc import Sequence
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from kinemark.errors import SingleClassTraining
from kinemark.features.matrix import FeatureMatrix
from kinemark.models.forest import forest_importances
from kinemark.types import Array

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class FeatureMask:
    """An ordered selection of feature names

    ``names`` lists the selected features by decreasing importance in the
    last elimination round, or in matrix order when nothing was eliminated.
    """

    names: tuple[str, ...]
    k: int = 50
    seed: int | None = None

    def __len__(self) -> int:
        return len(self.names)

    def apply(self, matrix: FeatureMatrix) -> FeatureMatrix:
        return matrix.select(self.names)

    def to_text(self) -> str:
        return "".join(f"{name}\n" for name in self.names)

    def write(self, path: str | os.PathLike) -> None:
        Path(path).write_text(self.to_text())

    @classmethod
    def read_text(cls, text: str, seed: int | None = None) -> "FeatureMask":
        names = tuple(line.strip() for line in text.splitlines() if line.strip())
        return cls(names, k=len(names), seed=seed)

    @classmethod
    def read(cls, path: str | os.PathLike) -> "FeatureMask":
        return cls.read_text(Path(path).read_text())


def _ranked(importance: np.ndarray) -> np.ndarray:
    # Decreasing importance, lower column index first among ties
    return np.lexsort((np.arange(importance.size), -importance))


def rfe_select(
    X: FeatureMatrix | Array,
    y: Array | None = None,
    k: int = 50,
    step_fraction: float = 0.1,
    seed: int = 0,
    *,
    feature_names: Sequence[str] | None = None,
    n_estimators: int = 100,
    max_depth: int = 8,
) -> FeatureMask:
    """Select ``k`` features by recursive elimination

    Every round grows a random forest on the surviving columns and drops the
    ``max(1, ceil(step_fraction * remaining))`` least important of them. The
    round that would leave ``k`` or fewer columns keeps exactly the ``k`` most
    important instead.

    Args:
        X: A :class:`FeatureMatrix` or a 2D training array
        y: Training labels; taken from the matrix rows if omitted
        k: Number of features to keep
        step_fraction: Fraction of the surviving features dropped per round
        seed: Seed of the forests; the mask depends on nothing else
        feature_names: Column names when ``X`` is a plain array
        n_estimators: Trees per forest
        max_depth: Depth limit of the trees

    Raises:
        SingleClassTraining: if ``y`` holds a single class
    """
    if isinstance(X, FeatureMatrix):
        names = X.names
        y = X.y if y is None else y
        X = X.X
    else:
        X = np.asarray(X, dtype=np.float64)
        names = (
            tuple(feature_names)
            if feature_names is not None
            else tuple(f"f{i}" for i in range(X.shape[1]))
        )
    if y is None:
        raise ValueError("Labels are required when selecting on a plain array")
    y = np.asarray(y).astype(int).ravel()
    if k < 1:
        raise ValueError(f"k must be at least 1, got {k}")
    if not 0 < step_fraction < 1:
        raise ValueError(f"step_fraction must lie in (0, 1), got {step_fraction}")
    classes = np.unique(y)
    if classes.size < 2:
        raise SingleClassTraining(int(classes[0]) if classes.size else None)

    if k >= len(names):
        return FeatureMask(tuple(names), k=k, seed=seed)

    rng = np.random.default_rng(seed)
    remaining = np.arange(len(names))
    round_ = 0
    while True:
        importance = forest_importances(
            X[:, remaining],
            y,
            n_estimators=n_estimators,
            max_depth=max_depth,
            seed=int(rng.integers(2**63 - 1)),
        )
        order = _ranked(importance)
        drop = max(1, math.ceil(step_fraction * remaining.size))
        round_ += 1
        if remaining.size - drop <= k:
            selected = remaining[order[:k]]
            logger.debug("RFE round %d: kept the final %d features", round_, k)
            return FeatureMask(tuple(names[i] for i in selected), k=k, seed=seed)
        # Keep the survivors in column order so the next forest sees them as before
        remaining = np.sort(remaining[order[: remaining.size - drop]])
        logger.debug("RFE round %d: %d features remain", round_, remaining.size)
