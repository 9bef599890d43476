import numpy as np
import pytest

from kinemark.errors import LengthMismatch
from kinemark.models import Metrics, compute_metrics
from kinemark.test_utils import assert_allclose


def test_perfect():
    m = compute_metrics([0, 1, 1, 0], [0, 1, 1, 0])
    assert (m.accuracy, m.precision, m.recall, m.f1) == (1.0, 1.0, 1.0, 1.0)


def test_confusion_example():
    m = compute_metrics([1, 1, 0, 1, 0], [1, 1, 1, 0, 0])
    assert (m.tp, m.fp, m.fn, m.tn) == (2, 1, 1, 1)
    assert_allclose(m.accuracy, 0.6)
    assert_allclose(m.precision, 2 / 3)
    assert_allclose(m.recall, 2 / 3)
    assert_allclose(m.f1, 2 / 3)


def test_all_negative_predictions():
    m = compute_metrics([1, 0, 1, 0], [0, 0, 0, 0])
    assert (m.precision, m.recall, m.f1) == (0.0, 0.0, 0.0)
    assert m.accuracy == 0.5


def test_identities():
    rng = np.random.default_rng(91)
    for tp, fp, fn, tn in rng.integers(0, 6, size=(500, 4)):
        if tp + fp + fn + tn == 0:
            continue
        m = Metrics(int(tp), int(fp), int(fn), int(tn))
        assert_allclose(m.accuracy * m.total, tp + tn)
        assert 0.0 <= m.f1 <= 1.0
        if tp > 0:
            assert_allclose(m.f1, 2 * tp / (2 * tp + fp + fn))
            low, high = sorted((m.precision, m.recall))
            assert low - 1e-12 <= m.f1 <= high + 1e-12
        else:
            assert m.f1 == 0.0


def test_as_dict():
    d = compute_metrics([1, 0], [1, 1]).as_dict()
    assert d == {
        "tp": 1,
        "fp": 1,
        "fn": 0,
        "tn": 0,
        "accuracy": 0.5,
        "precision": 0.5,
        "recall": 1.0,
        "f1": 2 / 3,
    }


@pytest.mark.parametrize("y_true, y_pred", [([1, 0], [1]), ([], [])])
def test_length_mismatch(y_true, y_pred):
    with pytest.raises(LengthMismatch):
        compute_metrics(y_true, y_pred)
