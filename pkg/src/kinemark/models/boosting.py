__all__ = ["GradientBoosting", "fit_gradient_boosting", "log_loss"]

from collections.abc import Sequence

import equinox as eqx
import numpy as np
from jax.scipy.special import expit as _expit

from kinemark.models.tree import TreeArrays, grow_forest, normalize_importances, presort
from kinemark.types import Array


def expit(x: Array) -> np.ndarray:
    return np.asarray(_expit(np.asarray(x, dtype=np.float64)))


def log_loss(y: Array, score: Array) -> float:
    """Mean logistic loss of raw scores (log-odds)"""
    y = np.asarray(y, dtype=np.float64)
    score = np.asarray(score, dtype=np.float64)
    return float(np.mean(np.logaddexp(0.0, score) - y * score))


class GradientBoosting(eqx.Module):
    """Additive regression trees on the log-odds with logistic loss

    The raw score is ``base_score + learning_rate * sum(stage outputs)`` and
    the probability is its logistic transform.
    """

    stages: TreeArrays
    base_score: float
    learning_rate: float
    feature_importances: np.ndarray
    feature_names: tuple[str, ...] = eqx.field(static=True)
    kind: str = eqx.field(static=True, default="GradientBoosting")
    threshold: float = eqx.field(static=True, default=0.5)

    def stage_outputs(self, X: Array) -> np.ndarray:
        """The unscaled output of every stage, shape ``(n_stages, n)``"""
        return self.stages.values(X)

    def staged_decision_function(self, X: Array) -> np.ndarray:
        """Cumulative raw scores after each stage, shape ``(n_stages, n)``"""
        return self.base_score + self.learning_rate * np.cumsum(
            self.stage_outputs(X), axis=0
        )

    def decision_function(self, X: Array) -> np.ndarray:
        outputs = self.stage_outputs(X)
        return self.base_score + self.learning_rate * outputs.sum(axis=0)

    def predict_score(self, X: Array) -> np.ndarray:
        return expit(self.decision_function(X))

    def state_dict(self) -> dict:
        return {
            "stages": self.stages.state_dict(),
            "base_score": self.base_score,
            "learning_rate": self.learning_rate,
            "feature_importances": self.feature_importances.tolist(),
        }

    @classmethod
    def from_state(
        cls, state: dict, feature_names: Sequence[str]
    ) -> "GradientBoosting":
        return cls(
            stages=TreeArrays.from_state(state["stages"]),
            base_score=float(state["base_score"]),
            learning_rate=float(state["learning_rate"]),
            feature_importances=np.asarray(state["feature_importances"]),
            feature_names=tuple(feature_names),
        )


def fit_gradient_boosting(
    X: np.ndarray,
    y: np.ndarray,
    feature_names: Sequence[str],
    *,
    n_estimators: int = 100,
    max_depth: int = 3,
    learning_rate: float = 0.1,
    min_samples_leaf: int = 1,
) -> GradientBoosting:
    """Fit gradient boosting on the logistic loss

    Every stage fits a regression tree to the negative gradient ``y - p`` and
    its leaves predict the mean residual of their samples, which is a descent
    step for the loss at any learning rate up to 1.
    """
    X = np.asarray(X, dtype=np.float64)
    y = np.asarray(y, dtype=np.float64)
    rank = presort(X)
    ones = np.ones((1, X.shape[0]))

    rate = y.mean()
    base = float(np.log(rate / (1.0 - rate)))
    score = np.full(X.shape[0], base)
    stages = []
    decrease = np.zeros(X.shape[1])
    for _ in range(n_estimators):
        residual = y - expit(score)
        tree, gain = grow_forest(
            X,
            residual,
            ones,
            criterion="mse",
            max_depth=max_depth,
            min_samples_leaf=min_samples_leaf,
            rank=rank,
        )
        stages.append(tree)
        decrease += gain[0]
        score = score + learning_rate * tree.values(X)[0]

    return GradientBoosting(
        stages=TreeArrays.concatenate(stages),
        base_score=base,
        learning_rate=float(learning_rate),
        feature_importances=normalize_importances(decrease),
        feature_names=tuple(feature_names),
    )
