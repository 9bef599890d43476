import json

import numpy as np
import pytest

from kinemark.errors import ModelFormatError
from kinemark.models import ModelKind, ModelSpec, dumps, load, loads, save, train

SMALL = {
    ModelKind.RANDOM_FOREST: {"n_estimators": 5},
    ModelKind.GRADIENT_BOOSTING: {"n_estimators": 5},
    ModelKind.LOGISTIC_REGRESSION: {"max_epochs": 50},
    ModelKind.SUPPORT_VECTOR_MACHINE: {"epochs": 20},
}


@pytest.fixture(scope="module")
def data():
    rng = np.random.default_rng(92)
    X = rng.normal(size=(60, 3)) / 3.0
    y = (X[:, 0] - X[:, 2] > 0).astype(int)
    return X, y


@pytest.mark.parametrize("kind", list(ModelKind))
def test_round_trip(tmp_path, data, kind):
    X, y = data
    model = train(ModelSpec(kind, SMALL.get(kind, {}), seed=1), X, y, ["a", "b", "c"])
    path = tmp_path / "model.json"
    save(model, path)
    loaded = load(path)
    assert loaded.kind == kind.value
    assert loaded.feature_names == ("a", "b", "c")
    assert loaded.threshold == model.threshold
    np.testing.assert_array_equal(loaded.predict_score(X), model.predict_score(X))


def _blob(data):
    X, y = data
    return json.loads(dumps(train(ModelSpec("dt"), X, y)))


@pytest.mark.parametrize(
    "mutate",
    [
        lambda blob: blob.update(format="something"),
        lambda blob: blob.update(version=99),
        lambda blob: blob.pop("state"),
        lambda blob: blob.update(kind="Perceptron"),
    ],
)
def test_rejects_bad_blobs(data, mutate):
    blob = _blob(data)
    mutate(blob)
    with pytest.raises(ModelFormatError):
        loads(json.dumps(blob))


def test_rejects_non_json():
    with pytest.raises(ModelFormatError):
        loads("not json")
