__all__ = [
    "SETTINGS",
    "Dataset",
    "EvaluationReport",
    "ExperimentConfig",
    "RepetitionResult",
    "load_config",
    "prepare_dataset",
    "report_render",
    "run_experiment",
    "run_repetition",
    "synth_corpus",
]

from kinemark.harness.config import (
    SETTINGS as SETTINGS,
    ExperimentConfig as ExperimentConfig,
    load_config as load_config,
)
from kinemark.harness.experiment import (
    Dataset as Dataset,
    RepetitionResult as RepetitionResult,
    prepare_dataset as prepare_dataset,
    run_experiment as run_experiment,
    run_repetition as run_repetition,
)
from kinemark.harness.report import (
    EvaluationReport as EvaluationReport,
    report_render as report_render,
)
from kinemark.harness.synth import synth_corpus as synth_corpus
