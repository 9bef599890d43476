"""Monte Carlo cross-validation over participant-disjoint splits
"""

__all__ = [
    "Dataset",
    "RepetitionResult",
    "prepare_dataset",
    "run_repetition",
    "run_experiment",
]

import logging
import multiprocessing
import time
from collections.abc import Mapping
from concurrent.futures import ProcessPoolExecutor, as_completed
from dataclasses import dataclass, field

from tqdm.auto import tqdm

from kinemark.corpus import Corpus, Outcome, label_corpus, load_corpus
from kinemark.errors import AbortedRepetition, EmptyMatrix
from kinemark.features import FeatureMatrix, extract_windows
from kinemark.harness.config import SETTINGS, ExperimentConfig
from kinemark.harness.report import EvaluationReport, aggregate
from kinemark.kinematics import segment_stack, window_stack
from kinemark.models import ModelSpec, compute_metrics, predict, train
from kinemark.models.metrics import Metrics
from kinemark.prep import (
    FeatureMask,
    SplitPlan,
    fit_standardizer,
    rfe_select,
    route_windows,
    smote,
    split_participants,
)

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class Dataset:
    """The windowed feature matrix of a corpus and its participants' outcomes

    Only participants that yielded at least one labeled segment are listed.
    """

    matrix: FeatureMatrix
    outcomes: Mapping[str, Outcome]
    skipped: tuple[str, ...] = ()


@dataclass(frozen=True)
class RepetitionResult:
    setting: str
    index: int
    seed: int
    plan: SplitPlan
    mask: FeatureMask
    metrics: Mapping[str, Metrics]
    importances: Mapping[str, Mapping[str, float]] = field(default_factory=dict)


def prepare_dataset(corpus: Corpus, config: ExperimentConfig) -> Dataset:
    """Label, window and featurize a corpus once for every configured setting

    Features are extracted for all the orders of the widest configured setting;
    narrower settings are column subsets of the same matrix.

    Raises:
        EmptyMatrix: if no participant yields a window
    """
    orders = SETTINGS[config.settings[-1]]
    segments, skipped = label_corpus(corpus, config.segment_len_s)
    windows = []
    for segment in segments:
        stack = segment_stack(corpus.get(segment.participant_id), segment)
        windows.extend(window_stack(stack, config.window_len_s, config.stride_s))
    if not windows:
        raise EmptyMatrix("The corpus yields no windows")

    start = time.perf_counter()
    matrix = extract_windows(windows, orders)
    logger.debug(
        "Extracted %d x %d features in %.1f s",
        matrix.n_rows,
        matrix.n_features,
        time.perf_counter() - start,
    )
    kept = set(matrix.participant_ids)
    outcomes = {pid: o for pid, o in corpus.outcomes().items() if pid in kept}
    return Dataset(matrix, outcomes, tuple(e.participant_id for e in skipped))


def _repetition(
    dataset: Dataset, config: ExperimentConfig, setting: str, rep_index: int
) -> RepetitionResult:
    seed = config.seed(rep_index)
    start = time.perf_counter()
    plan = split_participants(dataset.outcomes, config.test_fraction, seed)
    train_rows, test_rows = route_windows(
        dataset.matrix.for_orders(SETTINGS[setting]), plan
    )

    scaler = fit_standardizer(train_rows)
    train_rows, test_rows = scaler(train_rows), scaler(test_rows)
    mask = rfe_select(
        train_rows,
        k=config.k_features,
        step_fraction=config.rfe_step,
        seed=seed,
        n_estimators=config.rfe_estimators,
    )
    train_rows, test_rows = mask.apply(train_rows), mask.apply(test_rows)
    X, y = smote(
        train_rows.X, train_rows.y, k_neighbors=config.smote_neighbors, seed=seed
    )
    logger.debug("Rep %d prepared in %.1f s", rep_index, time.perf_counter() - start)

    metrics, importances = {}, {}
    for kind in config.models:
        model = train(ModelSpec(kind, seed=seed), X, y, mask.names)
        metrics[kind] = compute_metrics(test_rows.y, predict(model, test_rows.X))
        if hasattr(model, "feature_importances"):
            importances[kind] = dict(
                zip(mask.names, map(float, model.feature_importances), strict=True)
            )
    return RepetitionResult(setting, rep_index, seed, plan, mask, metrics, importances)


def run_repetition(
    dataset: Dataset,
    config: ExperimentConfig,
    rep_index: int,
    setting: str | None = None,
) -> RepetitionResult:
    """Split, standardize, select, balance, then train and score every model

    Every model of the roster sees the same split and feature mask. The result
    is a function of the dataset, the configuration and ``rep_index`` only.

    Raises:
        AbortedRepetition: wrapping any error raised by the pipeline, numerical
            failures included, with the repetition index
    """
    setting = config.settings[0] if setting is None else setting
    try:
        return _repetition(dataset, config, setting, rep_index)
    except Exception as e:
        raise AbortedRepetition(rep_index, e) from e


def run_experiment(
    config: ExperimentConfig,
    corpus: Corpus | None = None,
    *,
    dataset: Dataset | None = None,
    progress: bool = False,
) -> EvaluationReport:
    """Run every repetition of every configured setting and aggregate them

    Args:
        config: The :class:`ExperimentConfig`
        corpus: The corpus; loaded from ``config.corpus`` when omitted
        dataset: A dataset prepared earlier for the same configuration
        progress: Show a progress bar

    Raises:
        AbortedRepetition: if any repetition fails
    """
    if dataset is None:
        if corpus is None:
            if config.corpus is None:
                raise ValueError("No corpus was given and the configuration names none")
            corpus = load_corpus(config.corpus, config.sample_rate_hz)
        dataset = prepare_dataset(corpus, config)

    tasks = [(s, i) for s in config.settings for i in range(config.repetitions)]
    results = []
    bar = tqdm(total=len(tasks), desc="repetitions", unit="rep", disable=not progress)
    with bar:
        if config.workers > 1:
            context = multiprocessing.get_context("spawn")
            with ProcessPoolExecutor(config.workers, mp_context=context) as pool:
                futures = [
                    pool.submit(run_repetition, dataset, config, i, s) for s, i in tasks
                ]
                for future in as_completed(futures):
                    results.append(_completed(future.result(), bar))
        else:
            for s, i in tasks:
                results.append(_completed(run_repetition(dataset, config, i, s), bar))

    return aggregate(results, config, _feature_counts(dataset, config))


def _completed(result: RepetitionResult, bar: tqdm) -> RepetitionResult:
    logger.info(
        "Finished %s repetition %d (seed %d)", result.setting, result.index, result.seed
    )
    bar.update()
    return result


def _feature_counts(dataset: Dataset, config: ExperimentConfig) -> dict[str, int]:
    return {
        s: dataset.matrix.for_orders(SETTINGS[s]).n_features for s in config.settings
    }
