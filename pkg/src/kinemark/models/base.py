"""Model specifications and the train/predict entry points
"""

__all__ = [
    "ModelKind",
    "ModelSpec",
    "DEFAULT_HYPERPARAMETERS",
    "train",
    "predict",
    "predict_score",
]

import enum
import logging
import re
from collections.abc import Mapping, Sequence
from dataclasses import dataclass, field
from types import MappingProxyType
from typing import Any

import numpy as np

from kinemark.errors import (
    EmptyMatrix,
    NonFiniteInput,
    SchemaMismatch,
    SingleClassTraining,
)
from kinemark.features.matrix import FeatureMatrix
from kinemark.models.boosting import fit_gradient_boosting
from kinemark.models.forest import fit_random_forest
from kinemark.models.linear import fit_linear_svm, fit_logistic_regression
from kinemark.models.neighbors import fit_knn
from kinemark.models.tree import fit_decision_tree
from kinemark.proto import Classifier
from kinemark.types import Array

logger = logging.getLogger(__name__)


class ModelKind(str, enum.Enum):
    LOGISTIC_REGRESSION = "LogisticRegression"
    RANDOM_FOREST = "RandomForest"
    GRADIENT_BOOSTING = "GradientBoosting"
    SUPPORT_VECTOR_MACHINE = "SupportVectorMachine"
    K_NEAREST_NEIGHBORS = "KNearestNeighbors"
    DECISION_TREE = "DecisionTree"

    @property
    def display_name(self) -> str:
        return _DISPLAY[self]

    @classmethod
    def parse(cls, value: "ModelKind | str") -> "ModelKind":
        if isinstance(value, ModelKind):
            return value
        key = _normalize(value)
        for kind in cls:
            names = (_normalize(kind.value), _normalize(_DISPLAY[kind]), _ALIASES[kind])
            if key in names:
                return kind
        raise ValueError(
            f"Unknown model kind {value!r}; expected one of "
            + ", ".join(k.value for k in cls)
        )


def _normalize(name: object) -> str:
    return re.sub(r"[\s_-]", "", str(name)).lower()


_DISPLAY = {
    ModelKind.LOGISTIC_REGRESSION: "Logistic Regression",
    ModelKind.RANDOM_FOREST: "Random Forest",
    ModelKind.GRADIENT_BOOSTING: "Gradient Boosting",
    ModelKind.SUPPORT_VECTOR_MACHINE: "SVM",
    ModelKind.K_NEAREST_NEIGHBORS: "K-Nearest Neighbors",
    ModelKind.DECISION_TREE: "Decision Tree",
}

_ALIASES = {
    ModelKind.LOGISTIC_REGRESSION: "lr",
    ModelKind.RANDOM_FOREST: "rf",
    ModelKind.GRADIENT_BOOSTING: "gb",
    ModelKind.SUPPORT_VECTOR_MACHINE: "svm",
    ModelKind.K_NEAREST_NEIGHBORS: "knn",
    ModelKind.DECISION_TREE: "dt",
}

DEFAULT_HYPERPARAMETERS: Mapping[ModelKind, Mapping[str, Any]] = MappingProxyType(
    {
        ModelKind.LOGISTIC_REGRESSION: {"l2": 1e-4, "max_epochs": 500, "tol": 1e-8},
        ModelKind.DECISION_TREE: {"max_depth": 8, "min_samples_leaf": 2},
        ModelKind.RANDOM_FOREST: {
            "n_estimators": 100,
            "max_depth": 8,
            "min_samples_leaf": 1,
            "max_features": None,
        },
        ModelKind.GRADIENT_BOOSTING: {
            "n_estimators": 100,
            "max_depth": 3,
            "learning_rate": 0.1,
            "min_samples_leaf": 1,
        },
        ModelKind.K_NEAREST_NEIGHBORS: {"k": 5},
        ModelKind.SUPPORT_VECTOR_MACHINE: {"l2": 1e-3, "epochs": 200},
    }
)

_COUNTS = {
    "max_epochs",
    "max_depth",
    "min_samples_leaf",
    "n_estimators",
    "max_features",
    "k",
    "epochs",
}
_RATES = {"learning_rate"}
_NON_NEGATIVE = {"l2", "tol"}


@dataclass(frozen=True)
class ModelSpec:
    """A model kind with validated hyperparameters

    Hyperparameters not given take the defaults in
    :data:`DEFAULT_HYPERPARAMETERS`; unknown names are rejected.
    """

    kind: ModelKind | str
    params: Mapping[str, Any] = field(default_factory=dict)
    seed: int = 0

    def __post_init__(self) -> None:
        kind = ModelKind.parse(self.kind)
        defaults = DEFAULT_HYPERPARAMETERS[kind]
        unknown = set(self.params) - set(defaults)
        if unknown:
            raise ValueError(
                f"Unknown hyperparameters for {kind.value}: "
                + ", ".join(sorted(unknown))
            )
        params = {**defaults, **self.params}
        for name, value in params.items():
            if value is None:
                continue
            if name in _COUNTS and not (int(value) == value and value >= 1):
                raise ValueError(f"{name} must be a positive integer, got {value!r}")
            if name in _RATES and not 0 < value <= 1:
                raise ValueError(f"{name} must lie in (0, 1], got {value!r}")
            if name in _NON_NEGATIVE and not value >= 0:
                raise ValueError(f"{name} must be non-negative, got {value!r}")
        object.__setattr__(self, "kind", kind)
        object.__setattr__(self, "params", MappingProxyType(params))


def _as_matrix(X: FeatureMatrix | Array, feature_names: Sequence[str] | None):
    if isinstance(X, FeatureMatrix):
        return X.X, X.names
    X = np.asarray(X, dtype=np.float64)
    if X.ndim != 2:
        raise ValueError(f"Expected a 2D matrix, got shape {X.shape}")
    if feature_names is None:
        feature_names = tuple(f"f{i}" for i in range(X.shape[1]))
    return X, tuple(feature_names)


def train(
    spec: ModelSpec,
    X: FeatureMatrix | Array,
    y: Array | None = None,
    feature_names: Sequence[str] | None = None,
) -> Classifier:
    """Fit the model a :class:`ModelSpec` describes

    Args:
        spec: The :class:`ModelSpec`
        X: A :class:`FeatureMatrix` or a 2D array
        y: Labels in {0, 1}; taken from the matrix rows if omitted
        feature_names: Column names when ``X`` is a plain array

    Raises:
        EmptyMatrix: if there are no training rows
        SingleClassTraining: if only one class is present
        NonFiniteInput: if any feature value is not finite
    """
    if y is None:
        if not isinstance(X, FeatureMatrix):
            raise ValueError("Labels are required when training on a plain array")
        y = X.y
    X, names = _as_matrix(X, feature_names)
    y = np.asarray(y).astype(int).ravel()
    if X.shape[0] == 0:
        raise EmptyMatrix("No training rows")
    if y.shape[0] != X.shape[0]:
        raise ValueError(f"{X.shape[0]} rows but {y.shape[0]} labels")
    if not np.isin(y, (0, 1)).all():
        raise ValueError("Labels must be 0 or 1")
    classes = np.unique(y)
    if classes.size < 2:
        raise SingleClassTraining(int(classes[0]))
    if not np.isfinite(X).all():
        raise NonFiniteInput("Training features must all be finite")

    kind, params = spec.kind, dict(spec.params)
    logger.debug("Training %s on %d x %d", kind.value, *X.shape)
    if kind is ModelKind.LOGISTIC_REGRESSION:
        return fit_logistic_regression(X, y, names, **params)
    if kind is ModelKind.DECISION_TREE:
        return fit_decision_tree(X, y, names, **params)
    if kind is ModelKind.RANDOM_FOREST:
        return fit_random_forest(X, y, names, seed=spec.seed, **params)
    if kind is ModelKind.GRADIENT_BOOSTING:
        return fit_gradient_boosting(X, y, names, **params)
    if kind is ModelKind.K_NEAREST_NEIGHBORS:
        return fit_knn(X, y, names, **params)
    return fit_linear_svm(X, y, names, **params)


def _checked(model: Classifier, X: FeatureMatrix | Array) -> np.ndarray:
    if isinstance(X, FeatureMatrix):
        if tuple(X.names) != tuple(model.feature_names):
            raise SchemaMismatch(
                "The matrix columns do not match the features the model was trained on"
            )
        return X.X
    X = np.asarray(X, dtype=np.float64)
    if X.size == 0:
        return X.reshape(0, len(model.feature_names))
    if X.ndim != 2 or X.shape[1] != len(model.feature_names):
        raise SchemaMismatch(
            f"Expected {len(model.feature_names)} feature columns, got shape {X.shape}"
        )
    return X


def predict_score(model: Classifier, X: FeatureMatrix | Array) -> np.ndarray:
    """Real-valued scores, increasing with confidence in class 1"""
    X = _checked(model, X)
    if X.shape[0] == 0:
        return np.zeros(0)
    return np.asarray(model.predict_score(X), dtype=np.float64)


def predict(model: Classifier, X: FeatureMatrix | Array) -> np.ndarray:
    """Labels in {0, 1}: 1 where the score reaches the model's threshold"""
    return (predict_score(model, X) >= model.threshold).astype(int)
