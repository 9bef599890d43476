__all__ = ["RandomForest", "fit_random_forest", "forest_importances"]

import math
from collections.abc import Sequence

import equinox as eqx
import numpy as np

from kinemark.models.tree import TreeArrays, grow_forest, normalize_importances, presort
from kinemark.types import Array


def _bootstrap(n_trees: int, n: int, rng: np.random.Generator) -> np.ndarray:
    draws = rng.integers(0, n, size=(n_trees, n))
    counts = np.zeros((n_trees, n))
    np.add.at(counts, (np.arange(n_trees)[:, None], draws), 1.0)
    return counts


def _grow(
    X: np.ndarray,
    y: np.ndarray,
    n_estimators: int,
    max_depth: int,
    min_samples_leaf: int,
    max_features: int | None,
    seed: int,
    rank: np.ndarray | None = None,
) -> tuple[TreeArrays, np.ndarray]:
    rng = np.random.default_rng(seed)
    n, p = X.shape
    if max_features is None:
        max_features = max(1, int(math.sqrt(p)))
    weights = _bootstrap(n_estimators, n, rng)
    return grow_forest(
        X,
        y,
        weights,
        criterion="gini",
        max_depth=max_depth,
        min_samples_leaf=min_samples_leaf,
        max_features=max_features,
        rng=rng,
        rank=rank,
    )


def forest_importances(
    X: Array,
    y: Array,
    *,
    n_estimators: int = 100,
    max_depth: int = 8,
    min_samples_leaf: int = 1,
    max_features: int | None = None,
    seed: int = 0,
) -> np.ndarray:
    """Normalized impurity-decrease importances of a freshly grown forest"""
    X = np.asarray(X, dtype=np.float64)
    _, decrease = _grow(
        X,
        np.asarray(y, dtype=np.float64),
        n_estimators,
        max_depth,
        min_samples_leaf,
        max_features,
        seed,
        presort(X),
    )
    return normalize_importances(decrease)


class RandomForest(eqx.Module):
    """Bagged CART trees with random feature subsets at every node

    The score is the fraction of trees voting for class 1; a tree votes 1 when
    more than half of its leaf is class 1.
    """

    trees: TreeArrays
    feature_importances: np.ndarray
    feature_names: tuple[str, ...] = eqx.field(static=True)
    kind: str = eqx.field(static=True, default="RandomForest")
    threshold: float = eqx.field(static=True, default=0.5)

    def predict_score(self, X: Array) -> np.ndarray:
        return np.mean(self.trees.values(X) > 0.5, axis=0)

    def decision_function(self, X: Array) -> np.ndarray:
        return self.predict_score(X)

    def state_dict(self) -> dict:
        return {
            "trees": self.trees.state_dict(),
            "feature_importances": self.feature_importances.tolist(),
        }

    @classmethod
    def from_state(cls, state: dict, feature_names: Sequence[str]) -> "RandomForest":
        return cls(
            trees=TreeArrays.from_state(state["trees"]),
            feature_importances=np.asarray(state["feature_importances"]),
            feature_names=tuple(feature_names),
        )


def fit_random_forest(
    X: np.ndarray,
    y: np.ndarray,
    feature_names: Sequence[str],
    *,
    n_estimators: int = 100,
    max_depth: int = 8,
    min_samples_leaf: int = 1,
    max_features: int | None = None,
    seed: int = 0,
) -> RandomForest:
    trees, decrease = _grow(
        np.asarray(X, dtype=np.float64),
        np.asarray(y, dtype=np.float64),
        n_estimators,
        max_depth,
        min_samples_leaf,
        max_features,
        seed,
    )
    return RandomForest(
        trees=trees,
        feature_importances=normalize_importances(decrease),
        feature_names=tuple(feature_names),
    )
