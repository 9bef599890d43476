"""Aggregated evaluation reports and their text and JSON renderings
"""

__all__ = [
    "FORMATS",
    "MetricSummary",
    "ModelResult",
    "SettingResult",
    "EvaluationReport",
    "aggregate",
    "report_render",
]

import json
from collections import defaultdict
from collections.abc import Iterable, Mapping, Sequence
from dataclasses import asdict, dataclass
from typing import TYPE_CHECKING, Any

import numpy as np

from kinemark.errors import UnsupportedFormat
from kinemark.harness.config import SETTING_LABELS, SETTINGS, ExperimentConfig
from kinemark.harness.reference import reference_row
from kinemark.kinemark_version import __version__
from kinemark.models.base import ModelKind
from kinemark.models.metrics import METRIC_NAMES

if TYPE_CHECKING:
    from kinemark.harness.experiment import RepetitionResult

FORMATS = ("text", "json")
REPORT_VERSION = 1
MONOTONE_SLACK = 0.02
TOP_FEATURES = 10
COLUMNS = ("Accuracy", "Precision", "Recall", "F1")


@dataclass(frozen=True)
class MetricSummary:
    mean: float
    sd: float

    @classmethod
    def of(cls, values: Sequence[float]) -> "MetricSummary":
        # Population standard deviation over the repetitions
        return cls(float(np.mean(values)), float(np.std(values)))


@dataclass(frozen=True)
class ModelResult:
    """Metrics of one model in every repetition of a setting

    ``repetitions`` holds the confusion counts and metric values of each
    repetition in index order; ``summary`` their mean and SD per metric.
    """

    kind: str
    summary: Mapping[str, MetricSummary]
    repetitions: tuple[Mapping[str, float], ...]

    @property
    def display_name(self) -> str:
        return ModelKind.parse(self.kind).display_name

    def to_dict(self) -> dict[str, Any]:
        return {
            "kind": self.kind,
            "summary": {k: asdict(v) for k, v in self.summary.items()},
            "repetitions": [dict(r) for r in self.repetitions],
        }

    @classmethod
    def from_dict(cls, data: Mapping[str, Any]) -> "ModelResult":
        return cls(
            data["kind"],
            {k: MetricSummary(**v) for k, v in data["summary"].items()},
            tuple(dict(r) for r in data["repetitions"]),
        )


@dataclass(frozen=True)
class SettingResult:
    """Everything measured for one experiment setting

    Args:
        setting: The setting key, ``s1`` to ``s4``
        n_features: Width of the feature matrix before selection
        models: One :class:`ModelResult` per model of the roster
        best_model: The model with the highest mean accuracy
        importance_model: The most accurate model exposing feature
            importances, if any
        importances: ``(name, mean importance)`` over the repetitions of the
            importance model, by decreasing importance
        repetitions: Seed, split and mask of every repetition
    """

    setting: str
    n_features: int
    models: tuple[ModelResult, ...]
    best_model: str
    importance_model: str | None
    importances: tuple[tuple[str, float], ...]
    repetitions: tuple[Mapping[str, Any], ...]

    @property
    def label(self) -> str:
        return SETTING_LABELS[self.setting]

    def model(self, kind: ModelKind | str) -> ModelResult:
        kind = ModelKind.parse(kind).value
        for result in self.models:
            if result.kind == kind:
                return result
        raise KeyError(kind)

    def to_dict(self) -> dict[str, Any]:
        return {
            "setting": self.setting,
            "label": self.label,
            "orders": [o.value for o in SETTINGS[self.setting]],
            "n_features": self.n_features,
            "best_model": self.best_model,
            "importance_model": self.importance_model,
            "importances": [[name, value] for name, value in self.importances],
            "models": [m.to_dict() for m in self.models],
            "repetitions": [dict(r) for r in self.repetitions],
        }

    @classmethod
    def from_dict(cls, data: Mapping[str, Any]) -> "SettingResult":
        return cls(
            setting=data["setting"],
            n_features=int(data["n_features"]),
            models=tuple(ModelResult.from_dict(m) for m in data["models"]),
            best_model=data["best_model"],
            importance_model=data["importance_model"],
            importances=tuple((str(n), float(v)) for n, v in data["importances"]),
            repetitions=tuple(dict(r) for r in data["repetitions"]),
        )


@dataclass(frozen=True)
class EvaluationReport:
    config: Mapping[str, Any]
    config_hash: str
    settings: tuple[SettingResult, ...]
    version: str = __version__

    def setting(self, key: str) -> SettingResult:
        for result in self.settings:
            if result.setting == key:
                return result
        raise KeyError(key)

    def monotonicity(
        self,
        kind: ModelKind | str = ModelKind.GRADIENT_BOOSTING,
        slack: float = MONOTONE_SLACK,
    ) -> tuple[bool, tuple[float, ...]]:
        """Whether a model's mean accuracy never drops by more than ``slack``
        from one setting to the next
        """
        accuracy = tuple(s.model(kind).summary["accuracy"].mean for s in self.settings)
        ok = all(b >= a - slack for a, b in zip(accuracy, accuracy[1:]))
        return ok, accuracy

    def to_dict(self) -> dict[str, Any]:
        return {
            "format": "kinemark.report",
            "report_version": REPORT_VERSION,
            "version": self.version,
            "config": dict(self.config),
            "config_hash": self.config_hash,
            "settings": [s.to_dict() for s in self.settings],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=False)

    @classmethod
    def from_dict(cls, data: Mapping[str, Any]) -> "EvaluationReport":
        if data.get("format") != "kinemark.report":
            raise ValueError("Not a kinemark report")
        return cls(
            config=dict(data["config"]),
            config_hash=data["config_hash"],
            settings=tuple(SettingResult.from_dict(s) for s in data["settings"]),
            version=data.get("version", __version__),
        )

    @classmethod
    def from_json(cls, text: str) -> "EvaluationReport":
        return cls.from_dict(json.loads(text))


def _mean_importances(
    results: Sequence["RepetitionResult"], kind: str
) -> tuple[tuple[str, float], ...]:
    totals: dict[str, float] = defaultdict(float)
    for result in results:
        for name, value in result.importances[kind].items():
            totals[name] += value
    ranked = sorted(totals.items(), key=lambda item: (-item[1], item[0]))
    return tuple((name, total / len(results)) for name, total in ranked)


def _setting_result(
    setting: str, results: Sequence["RepetitionResult"], n_features: int
) -> SettingResult:
    kinds = list(results[0].metrics)
    models = []
    for kind in kinds:
        values = tuple(r.metrics[kind].as_dict() for r in results)
        summary = {
            name: MetricSummary.of([v[name] for v in values]) for name in METRIC_NAMES
        }
        models.append(ModelResult(kind, summary, values))

    # Highest mean accuracy, roster order among ties
    by_accuracy = sorted(models, key=lambda m: -m.summary["accuracy"].mean)
    best = by_accuracy[0].kind
    with_importance = [m.kind for m in by_accuracy if m.kind in results[0].importances]
    importance_model = with_importance[0] if with_importance else None
    importances = (
        _mean_importances(results, importance_model) if importance_model else ()
    )
    repetitions = tuple(
        {
            "index": r.index,
            "seed": r.seed,
            "train": list(r.plan.train),
            "test": list(r.plan.test),
            "mask": list(r.mask.names),
        }
        for r in results
    )
    return SettingResult(
        setting,
        n_features,
        tuple(models),
        best,
        importance_model,
        importances,
        repetitions,
    )


def aggregate(
    results: Iterable["RepetitionResult"],
    config: ExperimentConfig,
    n_features: Mapping[str, int],
) -> EvaluationReport:
    """Summarize repetition results per setting and model

    The order in which results arrive does not matter.

    Raises:
        ValueError: if a configured repetition is missing
    """
    grouped: dict[str, list] = defaultdict(list)
    for result in results:
        grouped[result.setting].append(result)
    settings = []
    for setting in config.settings:
        reps = sorted(grouped[setting], key=lambda r: r.index)
        if [r.index for r in reps] != list(range(config.repetitions)):
            raise ValueError(
                f"Repetitions of setting {setting} are missing or repeated"
            )
        settings.append(_setting_result(setting, reps, n_features[setting]))
    return EvaluationReport(config.to_dict(), config.config_hash(), tuple(settings))


def _cell(summary: Mapping[str, Any], name: str) -> str:
    value = summary[name]
    if isinstance(value, MetricSummary):
        value = (100 * value.mean, 100 * value.sd)
    return f"{value[0]:.1f} ({value[1]:.1f})"


def _render_setting(result: SettingResult) -> list[str]:
    lines = [
        f"{result.label}  ({', '.join(o.value for o in SETTINGS[result.setting])}; "
        f"{result.n_features} features)",
        f"{'Model':<22}" + "".join(f"{h:>14}" for h in COLUMNS),
    ]
    for model in result.models:
        lines.append(
            f"{model.display_name:<22}"
            + "".join(f"{_cell(model.summary, name):>14}" for name in METRIC_NAMES)
        )
        reference = reference_row(result.setting, model.kind)
        if reference is not None:
            lines.append(
                f"{'  reference':<22}"
                + "".join(f"{_cell(reference, name):>14}" for name in METRIC_NAMES)
            )
    lines.append(f"Best model: {ModelKind.parse(result.best_model).display_name}")
    if result.importance_model is not None:
        name = ModelKind.parse(result.importance_model).display_name
        lines.append(f"Top features by {name} importance:")
        for rank, (feature, value) in enumerate(result.importances[:TOP_FEATURES], 1):
            lines.append(f"  {rank:>2}  {feature:<48} {value:.4f}")
    return lines


def _render_text(report: EvaluationReport) -> str:
    config = report.config
    first, reps = config["base_seed"], config["repetitions"]
    lines = [
        f"kinemark {report.version} evaluation report",
        f"config hash: {report.config_hash}",
        f"repetitions: {reps} (seeds {first}..{first + reps - 1}), "
        f"{config['k_features']} selected features, "
        f"test fraction {config['test_fraction']:g}",
        "values: mean (SD) in percent over the repetitions",
    ]
    for result in report.settings:
        lines.append("")
        lines.extend(_render_setting(result))

    gb = ModelKind.GRADIENT_BOOSTING.value
    if len(report.settings) > 1 and all(
        gb in (m.kind for m in s.models) for s in report.settings
    ):
        ok, accuracy = report.monotonicity(gb)
        path = " -> ".join(f"{100 * a:.1f}" for a in accuracy)
        lines.append("")
        lines.append(
            f"Gradient Boosting accuracy across settings: {path} "
            f"(non-decreasing within {100 * MONOTONE_SLACK:g} pp: "
            f"{'yes' if ok else 'no'})"
        )
    return "\n".join(lines) + "\n"


def report_render(report: EvaluationReport, format: str = "text") -> bytes:
    """Render a report as an aligned text table or as JSON

    Raises:
        UnsupportedFormat: for formats other than ``text`` and ``json``
    """
    if format == "text":
        return _render_text(report).encode("utf-8")
    if format == "json":
        return (report.to_json() + "\n").encode("utf-8")
    raise UnsupportedFormat(format, FORMATS)
