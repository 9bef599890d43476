import numpy as np

from kinemark.models import KNearestNeighbors, ModelSpec, predict, predict_score, train
from kinemark.models.neighbors import nearest_neighbors


def test_one_neighbour_reproduces_training_labels():
    rng = np.random.default_rng(90)
    X = rng.normal(size=(40, 3))
    y = rng.integers(0, 2, size=40)
    y[:2] = [0, 1]
    model = train(ModelSpec("knn", {"k": 1}), X, y)
    np.testing.assert_array_equal(predict(model, X), y)


def test_tied_vote_predicts_zero():
    X = np.array([[0.0], [1.0], [10.0]])
    y = np.array([1, 0, 0])
    model = train(ModelSpec("knn", {"k": 2}), X, y)
    assert model.threshold == 1.0
    assert predict_score(model, [[0.4]])[0] == 0.5
    assert predict(model, [[0.4]])[0] == 0


def test_distance_ties_go_to_lower_index():
    reference = np.array([[-1.0], [1.0], [1.0]])
    index = nearest_neighbors(np.array([[0.0]]), reference, 2)
    np.testing.assert_array_equal(index, [[0, 1]])
    model = train(ModelSpec("knn", {"k": 1}), reference[:2], np.array([1, 0]))
    assert predict(model, [[0.0]])[0] == 1


def test_majority():
    X = np.array([[0.0], [0.1], [0.2], [5.0], [5.1]])
    y = np.array([1, 1, 0, 0, 0])
    model = train(ModelSpec("knn", {"k": 3}), X, y)
    np.testing.assert_allclose(predict_score(model, [[0.05], [5.05]]), [2 / 3, 0.0])
    np.testing.assert_array_equal(predict(model, [[0.05], [5.05]]), [1, 0])


def test_k_is_capped_by_training_size():
    X, y = np.array([[0.0], [1.0]]), np.array([0, 1])
    model = train(ModelSpec("knn", {"k": 5}), X, y)
    assert isinstance(model, KNearestNeighbors)
    assert model.k == 2
