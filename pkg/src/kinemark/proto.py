__all__ = ["Classifier"]

from typing import Protocol

from kinemark.types import Array


class Classifier(Protocol):
    """An interface for fitted binary classifiers used by the harness"""

    @property
    def kind(self) -> str: ...

    @property
    def feature_names(self) -> tuple[str, ...]: ...

    @property
    def threshold(self) -> float: ...

    def predict_score(self, X: Array) -> Array: ...

    def state_dict(self) -> dict: ...
