import json

import numpy as np
import pytest

from kinemark.errors import UnsupportedFormat
from kinemark.harness.config import ExperimentConfig
from kinemark.harness.experiment import RepetitionResult
from kinemark.harness.report import (
    EvaluationReport,
    MetricSummary,
    aggregate,
    report_render,
)
from kinemark.models.metrics import Metrics
from kinemark.prep import FeatureMask, SplitPlan
from kinemark.test_utils import assert_allclose

GB = "GradientBoosting"
DT = "DecisionTree"


def _with_accuracy(percent: int) -> Metrics:
    wrong = 100 - percent
    return Metrics(percent // 2, wrong // 2, wrong - wrong // 2, percent - percent // 2)


def _result(setting, index, metrics, importances=None):
    plan = SplitPlan(("A", "B", "C"), (f"D{index}",), 0.2, index)
    mask = FeatureMask(("f0", "f1"), 2, index)
    return RepetitionResult(
        setting, index, index, plan, mask, metrics, importances or {}
    )


@pytest.fixture
def single_setting():
    config = ExperimentConfig(setting="s1", repetitions=3, models=("gb", "dt"))
    gb = [Metrics(5, 0, 0, 5), Metrics(3, 2, 2, 3), Metrics(4, 1, 1, 4)]
    weights = [0.7, 0.5, 0.9]
    results = [
        _result(
            "s1",
            i,
            {GB: gb[i], DT: Metrics(2, 3, 3, 2)},
            {DT: {"f0": w, "f1": 1 - w}},
        )
        for i, w in enumerate(weights)
    ]
    return config, results


def test_metric_summary():
    summary = MetricSummary.of([1.0, 2.0, 3.0, 4.0])
    assert summary.mean == 2.5
    assert_allclose(summary.sd, np.sqrt(1.25))
    assert MetricSummary.of([0.7]) == MetricSummary(0.7, 0.0)


def test_aggregate(single_setting):
    config, results = single_setting
    report = aggregate(results, config, {"s1": 858})
    assert report.config_hash == config.config_hash()
    assert len(report.settings) == 1

    setting = report.setting("s1")
    assert setting.label == "S1 Movement"
    assert setting.n_features == 858
    assert [m.kind for m in setting.models] == [GB, DT]

    accuracy = setting.model("gb").summary["accuracy"]
    values = [1.0, 0.6, 0.8]
    assert_allclose(accuracy.mean, np.mean(values))
    assert_allclose(accuracy.sd, np.std(values, ddof=0))
    f1 = setting.model(DT).summary["f1"]
    assert_allclose(f1.mean, 0.4)
    assert_allclose(f1.sd, 0.0, atol=1e-12)
    assert setting.model("gb").repetitions[1]["tp"] == 3

    assert setting.best_model == GB
    assert setting.importance_model == DT
    names = [name for name, _ in setting.importances]
    assert names == ["f0", "f1"]
    assert_allclose(np.array([v for _, v in setting.importances]), np.array([0.7, 0.3]))

    assert [r["index"] for r in setting.repetitions] == [0, 1, 2]
    assert setting.repetitions[2]["test"] == ["D2"]
    assert setting.repetitions[0]["mask"] == ["f0", "f1"]

    with pytest.raises(KeyError):
        setting.model("rf")
    with pytest.raises(KeyError):
        report.setting("s2")


def test_aggregate_ignores_arrival_order(single_setting):
    config, results = single_setting
    forward = aggregate(results, config, {"s1": 858})
    backward = aggregate(results[::-1], config, {"s1": 858})
    assert forward.to_dict() == backward.to_dict()


def test_aggregate_missing_repetition(single_setting):
    config, results = single_setting
    with pytest.raises(ValueError, match="missing"):
        aggregate(results[:2], config, {"s1": 858})
    with pytest.raises(ValueError, match="missing"):
        aggregate(results + results[:1], config, {"s1": 858})


def test_single_repetition_has_zero_sd():
    config = ExperimentConfig(setting="s2", repetitions=1, models=("knn",))
    result = _result("s2", 0, {"KNearestNeighbors": Metrics(1, 1, 0, 2)})
    setting = aggregate([result], config, {"s2": 1716}).setting("s2")
    for summary in setting.model("knn").summary.values():
        assert summary.sd == 0.0
    assert setting.importance_model is None
    assert setting.importances == ()


def test_best_model_ties_keep_roster_order():
    config = ExperimentConfig(setting="s1", repetitions=1, models=("dt", "gb"))
    metrics = {DT: Metrics(1, 0, 0, 1), GB: Metrics(1, 0, 0, 1)}
    report = aggregate([_result("s1", 0, metrics)], config, {"s1": 858})
    assert report.setting("s1").best_model == DT


def test_json_round_trip(single_setting):
    config, results = single_setting
    report = aggregate(results, config, {"s1": 858})
    restored = EvaluationReport.from_json(report.to_json())
    assert restored.to_dict() == report.to_dict()
    summary = report.setting("s1").model(GB).summary
    assert restored.setting("s1").model(GB).summary == summary

    data = json.loads(report_render(report, "json"))
    assert data["format"] == "kinemark.report"
    assert data["report_version"] == 1
    assert data["settings"][0]["orders"] == ["movement"]

    with pytest.raises(ValueError, match="Not a kinemark report"):
        EvaluationReport.from_json(json.dumps({"format": "other"}))


def test_render_text(single_setting):
    config, results = single_setting
    text = report_render(aggregate(results, config, {"s1": 858})).decode()
    assert "S1 Movement" in text
    assert "858 features" in text
    assert "Gradient Boosting" in text
    assert "80.0 (16.3)" in text
    # Reference values for the same setting and model
    assert "63.4 (9.3)" in text
    assert "Best model: Gradient Boosting" in text
    assert "Top features by Decision Tree importance:" in text
    assert "across settings" not in text
    assert text.endswith("\n")


def test_render_unsupported_format(single_setting):
    config, results = single_setting
    report = aggregate(results, config, {"s1": 858})
    with pytest.raises(UnsupportedFormat, match="xml"):
        report_render(report, "xml")


@pytest.mark.parametrize(
    "accuracies, expected", [((60, 70, 69, 80), True), ((60, 70, 65, 80), False)]
)
def test_monotonicity(accuracies, expected):
    config = ExperimentConfig(setting="all", repetitions=1, models=("gb",))
    results = [
        _result(s, 0, {GB: _with_accuracy(a)})
        for s, a in zip(config.settings, accuracies, strict=True)
    ]
    counts = {"s1": 858, "s2": 1716, "s3": 2574, "s4": 3432}
    report = aggregate(results, config, counts)
    ok, path = report.monotonicity()
    assert ok is expected
    assert_allclose(np.array(path), np.array(accuracies) / 100)

    text = report_render(report).decode()
    assert "Gradient Boosting accuracy across settings" in text
    assert ("yes" if expected else "no") + ")" in text
