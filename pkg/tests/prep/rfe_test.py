import numpy as np
import pytest

from kinemark.errors import SingleClassTraining
from kinemark.features import FeatureMatrix
from kinemark.prep import FeatureMask, rfe_select


def _planted(seed, n=200, p=30, informative=10, noise=0.1):
    rng = np.random.default_rng(seed)
    X = rng.normal(size=(n, p))
    y = (X[:, :informative].sum(axis=1) > 0).astype(int)
    flip = rng.random(n) < noise
    return X, np.where(flip, 1 - y, y)


def test_keeps_everything_when_k_is_large():
    X, y = _planted(0, n=40, p=6)
    names = [f"c{i}" for i in (5, 3, 1, 0, 2, 4)]
    mask = rfe_select(X, y, k=6, feature_names=names)
    assert mask.names == tuple(names)
    assert rfe_select(X, y, k=50, feature_names=names).names == tuple(names)


def test_recovers_planted_features():
    hits = 0
    for seed in range(20):
        X, y = _planted(seed)
        mask = rfe_select(X, y, k=10, seed=seed, n_estimators=100, max_depth=3)
        assert len(mask) == 10
        recovered = sum(int(name[1:]) < 10 for name in mask.names)
        hits += recovered >= 8
    assert hits >= 18


def test_deterministic():
    X, y = _planted(1, n=80, p=20)
    a = rfe_select(X, y, k=5, seed=3, n_estimators=10)
    b = rfe_select(X, y, k=5, seed=3, n_estimators=10)
    assert a == b
    assert a.seed == 3


def test_feature_matrix_input():
    X, y = _planted(2, n=60, p=12)
    names = [f"movement_X_f{i}" for i in range(12)]
    matrix = FeatureMatrix(X, names, [f"P{i}" for i in range(60)], y, [0] * 60)
    mask = rfe_select(matrix, k=4, seed=0, n_estimators=10)
    assert len(set(mask.names)) == 4
    assert set(mask.names) <= set(names)
    assert mask.apply(matrix).names == mask.names


def test_wide_matrix():
    rng = np.random.default_rng(4)
    X = rng.normal(size=(40, 984))
    y = np.arange(40) % 2
    X[:, 7] += 2.0 * y
    mask = rfe_select(X, y, k=50, n_estimators=5, max_depth=3)
    assert len(mask) == 50
    assert len(set(mask.names)) == 50


def test_single_class():
    with pytest.raises(SingleClassTraining):
        rfe_select(np.zeros((5, 3)), np.ones(5), k=1)


@pytest.mark.parametrize("kwargs", [{"k": 0}, {"step_fraction": 0.0}])
def test_invalid_arguments(kwargs):
    X, y = _planted(5, n=20, p=4)
    with pytest.raises(ValueError):
        rfe_select(X, y, **kwargs)


def test_mask_file(tmp_path):
    mask = FeatureMask(("jerk_Roll_Spectral roll-on", "movement_X_Mean"), k=2, seed=9)
    path = tmp_path / "mask.txt"
    mask.write(path)
    assert path.read_text() == "jerk_Roll_Spectral roll-on\nmovement_X_Mean\n"
    assert FeatureMask.read(path).names == mask.names
