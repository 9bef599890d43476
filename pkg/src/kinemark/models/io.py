"""Self-describing JSON blobs for fitted models

A blob records the model kind, the feature names it was trained on and its
fitted state. Floats are written by ``json`` with their shortest round-trip
representation, so a reloaded model predicts bit-identically.
"""

__all__ = ["FORMAT", "VERSION", "dumps", "loads", "save", "load"]

import json
import os
from pathlib import Path

from kinemark.errors import ModelFormatError
from kinemark.models.base import ModelKind
from kinemark.models.boosting import GradientBoosting
from kinemark.models.forest import RandomForest
from kinemark.models.linear import LinearModel
from kinemark.models.neighbors import KNearestNeighbors
from kinemark.models.tree import DecisionTree
from kinemark.proto import Classifier

FORMAT = "kinemark.model"
VERSION = 1

_CLASSES = {
    ModelKind.DECISION_TREE: DecisionTree,
    ModelKind.RANDOM_FOREST: RandomForest,
    ModelKind.GRADIENT_BOOSTING: GradientBoosting,
    ModelKind.K_NEAREST_NEIGHBORS: KNearestNeighbors,
}


def dumps(model: Classifier) -> str:
    return json.dumps(
        {
            "format": FORMAT,
            "version": VERSION,
            "kind": ModelKind.parse(model.kind).value,
            "feature_names": list(model.feature_names),
            "state": model.state_dict(),
        }
    )


def loads(text: str) -> Classifier:
    try:
        blob = json.loads(text)
    except json.JSONDecodeError as e:
        raise ModelFormatError(f"Not a model blob: {e}") from None
    if not isinstance(blob, dict) or blob.get("format") != FORMAT:
        raise ModelFormatError("Not a kinemark model blob")
    if blob.get("version") != VERSION:
        raise ModelFormatError(
            f"Unsupported model blob version {blob.get('version')!r}; "
            f"this release reads version {VERSION}"
        )
    try:
        kind = ModelKind.parse(blob["kind"])
        names = blob["feature_names"]
        state = blob["state"]
    except (KeyError, ValueError) as e:
        raise ModelFormatError(f"Malformed model blob: {e}") from None
    if kind in (ModelKind.LOGISTIC_REGRESSION, ModelKind.SUPPORT_VECTOR_MACHINE):
        return LinearModel.from_state(state, names, kind.value)
    return _CLASSES[kind].from_state(state, names)


def save(model: Classifier, path: str | os.PathLike) -> None:
    Path(path).write_text(dumps(model))


def load(path: str | os.PathLike) -> Classifier:
    return loads(Path(path).read_text())
