import json

import numpy as np
import pytest

from kinemark.cli import main
from kinemark.features import REGISTRY_VERSION, FeatureMatrix, series_labels
from kinemark.kinemark_version import __version__
from kinemark.prep import FeatureMask, SplitPlan


@pytest.fixture(scope="module")
def manifest(tmp_path_factory):
    root = tmp_path_factory.mktemp("corpus")
    assert main(["-q", "synth", "--out", str(root), "--participants", "8"]) == 0
    return root / "manifest.csv"


def test_version(capsys):
    with pytest.raises(SystemExit) as info:
        main(["--version"])
    assert info.value.code == 0
    assert __version__ in capsys.readouterr().out


def test_synth(tmp_path, capsys):
    args = ["synth", "--out", str(tmp_path), "--participants", "6", "--seed", "2"]
    assert main(args) == 0
    assert "Wrote 6 participants" in capsys.readouterr().out
    assert (tmp_path / "manifest.csv").exists()


def test_features_list(capsys):
    assert main(["features", "list"]) == 0
    lines = capsys.readouterr().out.splitlines()
    assert lines[0] == f"Feature registry {REGISTRY_VERSION}"
    assert len(lines) == 61

    assert main(["features", "list", "--format", "json"]) == 0
    data = json.loads(capsys.readouterr().out)
    assert data["version"] == REGISTRY_VERSION
    assert len(data["features"]) == 60
    assert sum(row["arity"] for row in data["features"]) == len(series_labels())


def test_corpus_summary(manifest, capsys):
    assert main(["corpus", "--corpus", str(manifest)]) == 0
    out = capsys.readouterr().out
    assert "P007" in out
    assert "8 participants, 4 Sick, 0 too short" in out


def test_features_extract(manifest, tmp_path, capsys):
    dest = tmp_path / "features.csv"
    args = ["features", "extract", "--corpus", str(manifest), "--window-s", "2"]
    assert main([*args, "--setting", "s1", "--out", str(dest)]) == 0
    assert "60 windows" in capsys.readouterr().out
    matrix = FeatureMatrix.read_csv(dest)
    assert matrix.n_rows == 60
    assert matrix.n_features == 6 * len(series_labels())


def test_run_and_report(manifest, tmp_path, capsys):
    config = tmp_path / "config.yaml"
    config.write_text(
        f"corpus: {manifest.as_posix()}\n"
        "setting: s1\n"
        "window_len_s: 2.0\n"
        "repetitions: 50\n"
        "k_features: 5\n"
        "rfe_estimators: 5\n"
        "models: [dt, knn]\n"
    )
    out = tmp_path / "run"
    args = ["-q", "run", "--config", str(config), "--reps", "2", "--out", str(out)]
    assert main(args) == 0
    printed = capsys.readouterr().out
    assert "S1 Movement" in printed
    assert "Decision Tree" in printed
    assert (out / "report.txt").read_text() == printed

    report = json.loads((out / "report.json").read_text())
    assert report["config"]["repetitions"] == 2
    assert report["config"]["models"] == ["DecisionTree", "KNearestNeighbors"]
    assert len(report["settings"][0]["repetitions"]) == 2
    for model in report["settings"][0]["models"]:
        for name, summary in model["summary"].items():
            values = [rep[name] for rep in model["repetitions"]]
            assert summary["mean"] == np.mean(values)

    mask = FeatureMask.read(out / "mask_s1.txt")
    assert len(mask) == 5
    assert list(mask.names) == report["settings"][0]["repetitions"][0]["mask"]
    for index in range(2):
        plan = SplitPlan.read_csv(out / f"split_{index}.csv")
        assert list(plan.test) == report["settings"][0]["repetitions"][index]["test"]

    assert main(["report", "--out", str(out), "--format", "json"]) == 0
    assert json.loads(capsys.readouterr().out) == report
    assert main(["report", "--input", str(out / "report.json")]) == 0
    assert capsys.readouterr().out == printed


def test_error_exit_status(tmp_path, capsys):
    out = tmp_path / "run"
    assert main(["-q", "run", "--out", str(out)]) == 2
    assert "No corpus given" in capsys.readouterr().err

    report = tmp_path / "report.json"
    report.write_text(json.dumps({"format": "other"}))
    assert main(["report", "--input", str(report), "--format", "xml"]) == 2
    assert "kinemark: error" in capsys.readouterr().err

    assert main(["report", "--input", str(report)]) == 1
    assert "Not a kinemark report" in capsys.readouterr().err
    assert main(["report", "--input", str(tmp_path / "missing.json")]) == 1


def test_unknown_setting_is_a_usage_error(manifest):
    with pytest.raises(SystemExit) as info:
        main(["run", "--corpus", str(manifest), "--setting", "s9", "--out", "x"])
    assert info.value.code == 2
