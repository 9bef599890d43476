"""Reference results, printed next to measured values

Values are percentages as ``(mean, standard deviation)`` over 50 Monte Carlo
repetitions, per setting and model.
"""

__all__ = ["REFERENCE_RESULTS", "reference_row"]

from kinemark.models.base import ModelKind

LR = ModelKind.LOGISTIC_REGRESSION.value
RF = ModelKind.RANDOM_FOREST.value
GB = ModelKind.GRADIENT_BOOSTING.value
SVM = ModelKind.SUPPORT_VECTOR_MACHINE.value
KNN = ModelKind.K_NEAREST_NEIGHBORS.value
DT = ModelKind.DECISION_TREE.value


def _row(accuracy, precision, recall, f1):
    return {"accuracy": accuracy, "precision": precision, "recall": recall, "f1": f1}


REFERENCE_RESULTS = {
    "s1": {
        LR: _row((54.3, 8.6), (53.1, 11.3), (48.5, 19.2), (49.8, 14.7)),
        RF: _row((58.0, 9.6), (64.0, 19.4), (30.5, 18.3), (39.7, 19.2)),
        GB: _row((63.4, 9.3), (69.5, 13.2), (44.6, 18.6), (58.0, 16.7)),
        SVM: _row((58.8, 8.0), (60.3, 9.6), (47.7, 17.2), (52.2, 13.3)),
        KNN: _row((59.6, 7.9), (60.1, 9.0), (54.0, 16.7), (56.0, 12.6)),
        DT: _row((61.5, 7.1), (64.9, 11.0), (47.0, 14.8), (53.8, 13.1)),
    },
    "s2": {
        LR: _row((53.3, 9.3), (51.4, 14.2), (47.4, 20.1), (48.4, 16.7)),
        RF: _row((64.7, 8.8), (76.6, 14.2), (41.6, 14.8), (52.9, 14.9)),
        GB: _row((72.7, 7.8), (80.8, 9.9), (60.1, 13.9), (68.0, 10.9)),
        SVM: _row((59.5, 8.0), (61.8, 12.6), (45.8, 15.3), (51.9, 13.7)),
        KNN: _row((56.3, 6.3), (55.3, 5.7), (64.8, 13.6), (59.2, 8.3)),
        DT: _row((62.1, 6.8), (65.1, 11.9), (48.6, 13.2), (55.2, 12.7)),
    },
    "s3": {
        LR: _row((54.3, 8.0), (53.7, 10.5), (44.0, 18.2), (47.4, 14.6)),
        RF: _row((66.1, 7.9), (77.7, 11.0), (44.3, 14.6), (55.4, 13.8)),
        GB: _row((74.5, 6.6), (81.5, 7.0), (63.6, 12.6), (70.8, 9.4)),
        SVM: _row((60.5, 7.7), (65.5, 10.6), (42.1, 16.5), (50.0, 14.2)),
        KNN: _row((56.9, 6.1), (55.4, 5.1), (67.5, 14.0), (60.5, 8.3)),
        DT: _row((63.2, 6.5), (66.7, 7.2), (51.3, 13.1), (57.4, 10.5)),
    },
    "s4": {
        LR: _row((55.6, 9.0), (55.0, 12.3), (46.6, 18.0), (49.6, 15.3)),
        RF: _row((68.2, 8.1), (80.2, 10.5), (47.9, 14.6), (59.1, 13.5)),
        GB: _row((76.0, 5.9), (82.7, 6.9), (66.3, 11.5), (73.0, 8.1)),
        SVM: _row((62.0, 7.7), (66.5, 10.8), (46.3, 16.2), (53.5, 14.1)),
        KNN: _row((58.3, 5.6), (56.3, 5.1), (72.0, 13.0), (62.8, 8.1)),
        DT: _row((64.3, 6.7), (67.4, 7.3), (54.0, 12.9), (59.5, 10.7)),
    },
}


def reference_row(setting: str, kind: ModelKind | str) -> dict | None:
    return REFERENCE_RESULTS.get(setting, {}).get(ModelKind.parse(kind).value)
