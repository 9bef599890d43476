"""The ``kinemark`` command line interface
"""

__all__ = ["main", "build_parser"]

import argparse
import json
import logging
import sys
from collections.abc import Sequence
from pathlib import Path

from kinemark.corpus import Outcome, label_corpus, load_corpus, summarize_corpus
from kinemark.errors import ConfigError, KinemarkError, UnsupportedFormat
from kinemark.features import REGISTRY_VERSION, registry_table
from kinemark.harness import (
    SETTINGS,
    EvaluationReport,
    load_config,
    prepare_dataset,
    report_render,
    run_experiment,
    synth_corpus,
)
from kinemark.harness.report import FORMATS
from kinemark.kinemark_version import __version__
from kinemark.prep import FeatureMask, SplitPlan

SETTING_CHOICES = (*SETTINGS, "all")


def _add_corpus_args(parser: argparse.ArgumentParser, required: bool = True) -> None:
    parser.add_argument(
        "--corpus", required=required, help="Path of the corpus manifest CSV"
    )
    parser.add_argument(
        "--sample-rate", type=float, default=None, help="Declared sample rate [Hz]"
    )
    parser.add_argument(
        "--segment-s", type=float, default=None, help="Labeled segment length [s]"
    )


def _add_window_args(parser: argparse.ArgumentParser) -> None:
    parser.add_argument(
        "--window-s", type=float, default=None, help="Window length [s]"
    )
    parser.add_argument(
        "--stride-s",
        type=float,
        default=None,
        help="Step between windows [s]; defaults to the window length",
    )


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="kinemark",
        description="Cybersickness detection from head-movement kinematics",
    )
    parser.add_argument(
        "--version", action="version", version=f"%(prog)s {__version__}"
    )
    verbosity = parser.add_mutually_exclusive_group()
    verbosity.add_argument(
        "-v", "--verbose", action="count", default=0, help="More logging (repeatable)"
    )
    verbosity.add_argument(
        "-q", "--quiet", action="store_true", help="Only errors; no progress bar"
    )
    commands = parser.add_subparsers(dest="command", required=True)

    synth = commands.add_parser("synth", help="Write a synthetic corpus")
    synth.add_argument("--out", required=True, help="Destination directory")
    synth.add_argument("--participants", type=int, default=20)
    synth.add_argument("--sick-fraction", type=float, default=0.5)
    synth.add_argument("--seed", type=int, default=0)
    synth.add_argument("--duration-s", type=float, default=30.0)
    synth.add_argument("--segment-s", type=float, default=10.0)
    synth.set_defaults(handler=_synth)

    features = commands.add_parser("features", help="Inspect or extract features")
    feature_commands = features.add_subparsers(dest="features_command", required=True)
    listing = feature_commands.add_parser("list", help="Print the feature registry")
    listing.add_argument("--format", choices=FORMATS, default="text")
    listing.set_defaults(handler=_features_list)
    extract = feature_commands.add_parser(
        "extract", help="Write the windowed feature matrix of a corpus"
    )
    _add_corpus_args(extract)
    _add_window_args(extract)
    extract.add_argument("--setting", choices=tuple(SETTINGS), default="s4")
    extract.add_argument("--out", required=True, help="Destination CSV file")
    extract.set_defaults(handler=_features_extract)

    run = commands.add_parser("run", help="Run the Monte Carlo cross-validation")
    run.add_argument("--config", help="YAML configuration; flags override it")
    _add_corpus_args(run, required=False)
    _add_window_args(run)
    run.add_argument("--setting", type=str.lower, choices=SETTING_CHOICES, default=None)
    run.add_argument("--reps", type=int, default=None, help="Number of repetitions")
    run.add_argument("--k-features", type=int, default=None)
    run.add_argument("--test-fraction", type=float, default=None)
    run.add_argument("--seed", type=int, default=None, help="Seed of repetition 0")
    run.add_argument(
        "--models", nargs="+", default=None, help="Model roster, e.g. gb rf knn"
    )
    run.add_argument("--rfe-estimators", type=int, default=None)
    run.add_argument("--workers", type=int, default=None, help="Worker processes")
    run.add_argument("--out", required=True, help="Output directory")
    run.set_defaults(handler=_run)

    report = commands.add_parser("report", help="Render a stored report")
    report.add_argument("--out", default=".", help="Directory holding report.json")
    report.add_argument("--input", default=None, help="Explicit report.json path")
    report.add_argument("--format", default="text", help="text or json")
    report.set_defaults(handler=_report)

    corpus = commands.add_parser("corpus", help="Validate a corpus and summarize it")
    _add_corpus_args(corpus)
    corpus.set_defaults(handler=_corpus)
    return parser


def _synth(args: argparse.Namespace) -> int:
    entries = synth_corpus(
        args.out,
        args.participants,
        args.sick_fraction,
        args.seed,
        duration_s=args.duration_s,
        segment_len_s=args.segment_s,
    )
    print(f"Wrote {len(entries)} participants to {Path(args.out) / 'manifest.csv'}")
    return 0


def _features_list(args: argparse.Namespace) -> int:
    table = registry_table()
    if args.format == "json":
        print(json.dumps({"version": REGISTRY_VERSION, "features": table}, indent=2))
        return 0
    print(f"Feature registry {REGISTRY_VERSION}")
    for row in table:
        category, arity, name = row["category"], row["arity"], row["name"]
        print(f"{category:<12} {arity:>3}  {name:<36} {row['formula']}")
    return 0


def _features_extract(args: argparse.Namespace) -> int:
    config = load_config(None, {**_corpus_overrides(args), "setting": args.setting})
    corpus = load_corpus(config.corpus, config.sample_rate_hz)
    matrix = prepare_dataset(corpus, config).matrix
    matrix.to_csv(args.out)
    print(f"Wrote {matrix.n_rows} windows x {matrix.n_features} features to {args.out}")
    return 0


def _corpus_overrides(args: argparse.Namespace) -> dict:
    return {
        "corpus": args.corpus,
        "sample_rate_hz": args.sample_rate,
        "segment_len_s": args.segment_s,
        "window_len_s": getattr(args, "window_s", None),
        "stride_s": getattr(args, "stride_s", None),
    }


def _run(args: argparse.Namespace) -> int:
    config = load_config(
        args.config,
        {
            **_corpus_overrides(args),
            "setting": args.setting,
            "repetitions": args.reps,
            "k_features": args.k_features,
            "test_fraction": args.test_fraction,
            "base_seed": args.seed,
            "models": args.models,
            "rfe_estimators": args.rfe_estimators,
            "workers": args.workers,
        },
    )
    if config.corpus is None:
        raise ConfigError("No corpus given; pass --corpus or set it in --config")
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)

    report = run_experiment(config, progress=not args.quiet)
    (out / "report.txt").write_bytes(report_render(report, "text"))
    (out / "report.json").write_bytes(report_render(report, "json"))
    for result in report.settings:
        first = result.repetitions[0]
        mask = FeatureMask(tuple(first["mask"]), config.k_features, first["seed"])
        mask.write(out / f"mask_{result.setting}.txt")
    # Splits depend on the seed alone, so every setting shares them
    for rep in report.settings[0].repetitions:
        _write_split(out / f"split_{rep['index']}.csv", rep)

    sys.stdout.write(report_render(report, "text").decode("utf-8"))
    return 0


def _write_split(path: Path, rep: dict) -> None:
    SplitPlan(tuple(rep["train"]), tuple(rep["test"]), seed=rep["seed"]).to_csv(path)


def _report(args: argparse.Namespace) -> int:
    if args.format not in FORMATS:
        raise UnsupportedFormat(args.format, FORMATS)
    path = Path(args.input) if args.input else Path(args.out) / "report.json"
    report = EvaluationReport.from_json(path.read_text())
    sys.stdout.write(report_render(report, args.format).decode("utf-8"))
    return 0


def _corpus(args: argparse.Namespace) -> int:
    config = load_config(None, _corpus_overrides(args))
    corpus = load_corpus(config.corpus, config.sample_rate_hz)
    _, skipped = label_corpus(corpus, config.segment_len_s)
    print(summarize_corpus(corpus).to_string(index=False))
    sick = sum(r.outcome is Outcome.SICK for r in corpus)
    print(f"{len(corpus)} participants, {sick} Sick, {len(skipped)} too short")
    return 0


def _configure_logging(verbose: int, quiet: bool) -> None:
    if quiet:
        level = logging.ERROR
    else:
        level = (logging.WARNING, logging.INFO, logging.DEBUG)[min(verbose, 2)]
    logging.basicConfig(
        level=level, format="%(asctime)s %(levelname)s %(name)s: %(message)s"
    )


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    _configure_logging(args.verbose, args.quiet)
    try:
        return args.handler(args)
    except KinemarkError as e:
        print(f"kinemark: error: {e}", file=sys.stderr)
        return 2
    except (OSError, KeyError, ValueError) as e:
        print(f"kinemark: error: {e}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
