__all__ = ["KNearestNeighbors", "fit_knn", "nearest_neighbors"]

from collections.abc import Sequence
from functools import partial

import equinox as eqx
import jax
import jax.numpy as jnp
import numpy as np

from kinemark.types import Array


@partial(jax.jit, static_argnames=("k",))
def nearest_neighbors(query: Array, reference: Array, k: int) -> Array:
    """Indices of the ``k`` nearest reference rows of every query row

    Distances are Euclidean; ties go to the lower reference index.
    """
    d2 = jnp.sum((query[:, None, :] - reference[None, :, :]) ** 2, axis=-1)
    return jnp.argsort(d2, axis=1, stable=True)[:, :k]


class KNearestNeighbors(eqx.Module):
    """Majority vote of the ``k`` nearest training rows

    The score is the fraction of neighbours in class 1. The threshold demands a
    strict majority, so a tied vote predicts class 0.
    """

    X_train: Array
    y_train: Array
    k: int = eqx.field(static=True)
    feature_names: tuple[str, ...] = eqx.field(static=True)
    kind: str = eqx.field(static=True, default="KNearestNeighbors")

    @property
    def threshold(self) -> float:
        return (self.k // 2 + 1) / self.k

    def predict_score(self, X: Array) -> np.ndarray:
        X = jnp.asarray(X, dtype=jnp.float64).reshape(-1, self.X_train.shape[1])
        if X.shape[0] == 0:
            return np.zeros(0)
        neighbors = nearest_neighbors(X, self.X_train, self.k)
        return np.asarray(jnp.mean(self.y_train[neighbors], axis=1))

    def decision_function(self, X: Array) -> np.ndarray:
        return self.predict_score(X)

    def state_dict(self) -> dict:
        return {
            "k": self.k,
            "X_train": np.asarray(self.X_train).tolist(),
            "y_train": np.asarray(self.y_train).astype(int).tolist(),
        }

    @classmethod
    def from_state(
        cls, state: dict, feature_names: Sequence[str]
    ) -> "KNearestNeighbors":
        n_features = len(feature_names)
        return cls(
            X_train=jnp.asarray(state["X_train"], dtype=jnp.float64).reshape(
                -1, n_features
            ),
            y_train=jnp.asarray(state["y_train"], dtype=jnp.float64),
            k=int(state["k"]),
            feature_names=tuple(feature_names),
        )


def fit_knn(
    X: np.ndarray, y: np.ndarray, feature_names: Sequence[str], *, k: int = 5
) -> KNearestNeighbors:
    return KNearestNeighbors(
        X_train=jnp.asarray(X, dtype=jnp.float64),
        y_train=jnp.asarray(y, dtype=jnp.float64),
        k=min(k, int(np.shape(X)[0])),
        feature_names=tuple(feature_names),
    )
