__all__ = [
    "DecisionTree",
    "GradientBoosting",
    "KNearestNeighbors",
    "LinearModel",
    "Metrics",
    "ModelKind",
    "ModelSpec",
    "RandomForest",
    "compute_metrics",
    "dumps",
    "load",
    "loads",
    "predict",
    "predict_score",
    "save",
    "train",
]

from kinemark.models.base import (
    ModelKind as ModelKind,
    ModelSpec as ModelSpec,
    predict as predict,
    predict_score as predict_score,
    train as train,
)
from kinemark.models.boosting import GradientBoosting as GradientBoosting
from kinemark.models.forest import RandomForest as RandomForest
from kinemark.models.io import (
    dumps as dumps,
    load as load,
    loads as loads,
    save as save,
)
from kinemark.models.linear import LinearModel as LinearModel
from kinemark.models.metrics import (
    Metrics as Metrics,
    compute_metrics as compute_metrics,
)
from kinemark.models.neighbors import KNearestNeighbors as KNearestNeighbors
from kinemark.models.tree import DecisionTree as DecisionTree
