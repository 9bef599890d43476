import numpy as np
import pytest

from kinemark.corpus import Outcome, load_corpus
from kinemark.errors import AbortedRepetition, InsufficientClass
from kinemark.features import series_labels
from kinemark.harness.config import ExperimentConfig
from kinemark.harness.experiment import (
    Dataset,
    prepare_dataset,
    run_experiment,
    run_repetition,
)
from kinemark.harness.synth import synth_corpus
from kinemark.prep import split_participants
from kinemark.test_utils import assert_allclose

PER_SERIES = len(series_labels())

CONFIG = ExperimentConfig(
    setting="s1",
    window_len_s=2.0,
    repetitions=2,
    k_features=5,
    rfe_estimators=5,
    models=("dt", "knn", "lr"),
)


@pytest.fixture(scope="module")
def manifest(tmp_path_factory):
    root = tmp_path_factory.mktemp("corpus")
    synth_corpus(root, 8, 0.5, seed=1)
    return root / "manifest.csv"


@pytest.fixture(scope="module")
def dataset(manifest):
    return prepare_dataset(load_corpus(manifest), CONFIG)


def _test_rows(dataset, plan):
    return sum(pid in plan.test for pid in dataset.matrix.participant_ids)


def test_prepare_dataset(dataset):
    matrix = dataset.matrix
    # Well participants contribute one 10 s segment and Sick ones two, in 2 s windows
    assert matrix.n_rows == 4 * 5 + 4 * 10
    assert matrix.n_features == 6 * PER_SERIES
    assert int(matrix.y.sum()) == 4 * 5
    assert len(dataset.outcomes) == 8
    assert sum(o is Outcome.SICK for o in dataset.outcomes.values()) == 4
    assert dataset.skipped == ()
    assert all(name.startswith("movement_") for name in matrix.names)


def test_run_repetition(dataset):
    result = run_repetition(dataset, CONFIG, 1)
    assert result.setting == "s1"
    assert result.index == 1
    assert result.seed == 1
    assert result.plan == split_participants(dataset.outcomes, 0.2, seed=1)
    assert len(result.plan.test) == 2

    assert len(result.mask) == 5
    assert set(result.mask.names) <= set(dataset.matrix.names)
    assert list(result.metrics) == list(CONFIG.models)
    for metrics in result.metrics.values():
        assert metrics.total == _test_rows(dataset, result.plan)
        assert 0 <= metrics.accuracy <= 1

    assert list(result.importances) == ["DecisionTree"]
    importances = result.importances["DecisionTree"]
    assert list(importances) == list(result.mask.names)
    assert_allclose(sum(importances.values()), 1.0)


def test_run_repetition_is_deterministic(dataset):
    first = run_repetition(dataset, CONFIG, 0)
    second = run_repetition(dataset, CONFIG, 0)
    assert first == second


def test_repetition_depends_on_the_seed_only(dataset):
    shifted = run_repetition(dataset, CONFIG.replace(base_seed=3), 0)
    direct = run_repetition(dataset, CONFIG, 3)
    assert shifted.seed == direct.seed == 3
    assert shifted.plan == direct.plan
    assert shifted.mask == direct.mask
    assert shifted.metrics == direct.metrics


def test_aborted_repetition(dataset):
    pids = sorted(dataset.outcomes)
    outcomes = {pid: Outcome.WELL for pid in pids}
    outcomes[pids[0]] = Outcome.SICK
    broken = Dataset(dataset.matrix, outcomes)
    with pytest.raises(AbortedRepetition, match="Repetition 4") as info:
        run_repetition(broken, CONFIG, 4)
    assert info.value.index == 4
    assert isinstance(info.value.cause, InsufficientClass)


def test_aborted_repetition_wraps_numerical_errors(dataset, monkeypatch):
    def fail(*args, **kwargs):
        raise FloatingPointError("overflow in exp")

    monkeypatch.setattr("kinemark.harness.experiment.compute_metrics", fail)
    with pytest.raises(AbortedRepetition, match="overflow in exp") as info:
        run_repetition(dataset, CONFIG, 2)
    assert info.value.index == 2
    assert isinstance(info.value.cause, FloatingPointError)


def test_run_experiment(dataset):
    report = run_experiment(CONFIG, dataset=dataset)
    assert report.config_hash == CONFIG.config_hash()
    assert report.config["repetitions"] == 2
    setting = report.setting("s1")
    assert setting.n_features == 6 * PER_SERIES
    assert [r["seed"] for r in setting.repetitions] == [0, 1]
    assert [m.kind for m in setting.models] == list(CONFIG.models)
    assert setting.importance_model == "DecisionTree"
    for model in setting.models:
        accuracy = [rep["accuracy"] for rep in model.repetitions]
        assert model.summary["accuracy"].mean == np.mean(accuracy)
        assert_allclose(model.summary["accuracy"].sd, np.std(accuracy))

    rep = run_repetition(dataset, CONFIG, 1)
    assert setting.repetitions[1]["test"] == list(rep.plan.test)
    assert setting.repetitions[1]["mask"] == list(rep.mask.names)
    for model in setting.models:
        assert model.repetitions[1] == rep.metrics[model.kind].as_dict()


def test_run_experiment_all_settings(manifest):
    config = CONFIG.replace(setting="all", repetitions=1, models=("dt",))
    dataset = prepare_dataset(load_corpus(manifest), config)
    assert dataset.matrix.n_features == 24 * PER_SERIES

    report = run_experiment(config, dataset=dataset)
    assert [s.setting for s in report.settings] == ["s1", "s2", "s3", "s4"]
    shared = report.settings[0].repetitions[0]["test"]
    for n_orders, setting in enumerate(report.settings, 1):
        assert setting.n_features == 6 * n_orders * PER_SERIES
        # Every setting of a repetition shares the split
        assert setting.repetitions[0]["test"] == shared
    s1 = report.setting("s1").repetitions[0]["mask"]
    assert all(name.startswith("movement_") for name in s1)
    masks = {tuple(s.repetitions[0]["mask"]) for s in report.settings}
    assert len(masks) > 1


def test_run_experiment_loads_the_configured_corpus(manifest):
    config = CONFIG.replace(corpus=str(manifest), repetitions=1, models=("knn",))
    report = run_experiment(config)
    assert report.config["corpus"] == str(manifest)
    assert [m.kind for m in report.setting("s1").models] == ["KNearestNeighbors"]


def test_run_experiment_without_corpus():
    with pytest.raises(ValueError, match="No corpus"):
        run_experiment(CONFIG)


@pytest.mark.slow
def test_gradient_boosting_on_the_default_corpus(tmp_path):
    # Threshold frozen against the default synthetic effect size
    synth_corpus(tmp_path, 20, 0.5, seed=0)
    config = ExperimentConfig(
        corpus=str(tmp_path / "manifest.csv"), setting="s4", repetitions=10
    )
    report = run_experiment(config)
    accuracy = report.setting("s4").model("gb").summary["accuracy"]
    assert accuracy.mean > 0.65
    # Imperfect signal: not every repetition classifies every window
    assert accuracy.mean < 1.0
