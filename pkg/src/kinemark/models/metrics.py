__all__ = ["Metrics", "compute_metrics"]

from dataclasses import asdict, dataclass

import numpy as np

from kinemark.errors import LengthMismatch
from kinemark.types import Array

METRIC_NAMES = ("accuracy", "precision", "recall", "f1")


def _ratio(num: float, den: float) -> float:
    return num / den if den > 0 else 0.0


@dataclass(frozen=True)
class Metrics:
    """Confusion counts of a binary prediction, class 1 being positive

    Precision, recall and F1 are 0 when their denominator is 0.
    """

    tp: int
    fp: int
    fn: int
    tn: int

    @property
    def total(self) -> int:
        return self.tp + self.fp + self.fn + self.tn

    @property
    def accuracy(self) -> float:
        return _ratio(self.tp + self.tn, self.total)

    @property
    def precision(self) -> float:
        return _ratio(self.tp, self.tp + self.fp)

    @property
    def recall(self) -> float:
        return _ratio(self.tp, self.tp + self.fn)

    @property
    def f1(self) -> float:
        p, r = self.precision, self.recall
        return _ratio(2 * p * r, p + r)

    def as_dict(self) -> dict:
        return {**asdict(self), **{name: getattr(self, name) for name in METRIC_NAMES}}


def compute_metrics(y_true: Array, y_pred: Array) -> Metrics:
    y_true = np.asarray(y_true).astype(int).ravel()
    y_pred = np.asarray(y_pred).astype(int).ravel()
    if y_true.shape != y_pred.shape:
        raise LengthMismatch(
            f"{y_true.size} true labels but {y_pred.size} predictions were given"
        )
    if y_true.size == 0:
        raise LengthMismatch("Metrics need at least one prediction")
    return Metrics(
        tp=int(np.sum((y_true == 1) & (y_pred == 1))),
        fp=int(np.sum((y_true == 0) & (y_pred == 1))),
        fn=int(np.sum((y_true == 1) & (y_pred == 0))),
        tn=int(np.sum((y_true == 0) & (y_pred == 0))),
    )
