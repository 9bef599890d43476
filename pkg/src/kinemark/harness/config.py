"""Experiment configuration

An :class:`ExperimentConfig` can be built from keyword arguments, from a YAML
file, or from a file with command line overrides on top. Every field has a
default, so an empty file is a valid configuration.
"""

__all__ = [
    "SETTINGS",
    "SETTING_LABELS",
    "ExperimentConfig",
    "load_config",
    "resolve_settings",
]

import dataclasses
import hashlib
import json
import os
from collections.abc import Mapping
from dataclasses import dataclass
from pathlib import Path
from typing import Any

import yaml

from kinemark.errors import ConfigError
from kinemark.kinematics import Order
from kinemark.models.base import ModelKind
from kinemark.utils import samples_for

SETTINGS: Mapping[str, tuple[Order, ...]] = {
    "s1": (Order.MOVEMENT,),
    "s2": (Order.MOVEMENT, Order.VELOCITY),
    "s3": (Order.MOVEMENT, Order.VELOCITY, Order.ACCELERATION),
    "s4": (Order.MOVEMENT, Order.VELOCITY, Order.ACCELERATION, Order.JERK),
}

SETTING_LABELS = {
    "s1": "S1 Movement",
    "s2": "S2 +Velocity",
    "s3": "S3 +Acceleration",
    "s4": "S4 +Jerk",
}

DEFAULT_ROSTER = tuple(kind.value for kind in ModelKind)

# Fields that change how a run executes but not its results
_EXECUTION_ONLY = frozenset({"workers"})
_COUNTS = ("k_features", "repetitions", "rfe_estimators", "smote_neighbors", "workers")
_REALS = (
    "segment_len_s",
    "window_len_s",
    "stride_s",
    "sample_rate_hz",
    "test_fraction",
    "rfe_step",
)


def resolve_settings(setting: str) -> tuple[str, ...]:
    key = str(setting).strip().lower()
    if key == "all":
        return tuple(SETTINGS)
    if key not in SETTINGS:
        raise ConfigError(
            f"Unknown setting {setting!r}; expected one of "
            f"{', '.join(SETTINGS)} or all"
        )
    return (key,)


@dataclass(frozen=True)
class ExperimentConfig:
    """Parameters of a Monte Carlo cross-validation experiment

    Args:
        corpus: Path of the corpus manifest
        setting: ``s1`` to ``s4``, or ``all`` for the four settings in turn
        segment_len_s: Length of the labeled segments [s]
        window_len_s: Window length [s]
        stride_s: Step between windows [s]; defaults to the window length
        sample_rate_hz: Declared sample rate of the recordings [Hz]
        k_features: Number of features kept by recursive elimination
        repetitions: Number of random participant splits
        test_fraction: Fraction of participants in every test group
        base_seed: Repetition ``i`` uses the seed ``base_seed + i``
        models: The model roster, by kind name or alias
        rfe_estimators: Trees per forest during feature elimination
        rfe_step: Fraction of the surviving features dropped per round
        smote_neighbors: Neighbours considered by SMOTE
        workers: Number of worker processes for the repetitions
    """

    corpus: str | None = None
    setting: str = "s4"
    segment_len_s: float = 10.0
    window_len_s: float = 1.0
    stride_s: float | None = None
    sample_rate_hz: float = 60.0
    k_features: int = 50
    repetitions: int = 50
    test_fraction: float = 0.2
    base_seed: int = 0
    models: tuple[str, ...] = DEFAULT_ROSTER
    rfe_estimators: int = 100
    rfe_step: float = 0.1
    smote_neighbors: int = 5
    workers: int = 1

    def __post_init__(self) -> None:
        if self.corpus is not None:
            object.__setattr__(self, "corpus", os.fspath(self.corpus))
        object.__setattr__(self, "setting", str(self.setting).strip().lower())
        resolve_settings(self.setting)
        if isinstance(self.models, str):
            object.__setattr__(self, "models", (self.models,))
        if not self.models:
            raise ConfigError("The model roster is empty")
        try:
            roster = tuple(ModelKind.parse(m).value for m in self.models)
        except ValueError as e:
            raise ConfigError(str(e)) from None
        if len(set(roster)) != len(roster):
            raise ConfigError("The model roster lists a model twice")
        object.__setattr__(self, "models", roster)

        for name in _COUNTS:
            value = getattr(self, name)
            if isinstance(value, bool) or not isinstance(value, int) or value < 1:
                raise ConfigError(f"{name} must be a positive integer, got {value!r}")
        if isinstance(self.base_seed, bool) or not isinstance(self.base_seed, int):
            raise ConfigError(f"base_seed must be an integer, got {self.base_seed!r}")
        for name in _REALS:
            value = getattr(self, name)
            if value is None:
                continue
            try:
                object.__setattr__(self, name, float(value))
            except (TypeError, ValueError):
                raise ConfigError(f"{name} must be a number, got {value!r}") from None
        for name in ("test_fraction", "rfe_step"):
            value = getattr(self, name)
            if not 0 < value < 1:
                raise ConfigError(f"{name} must lie in (0, 1), got {value!r}")
        for name in ("segment_len_s", "window_len_s", "sample_rate_hz"):
            value = getattr(self, name)
            if not value > 0:
                raise ConfigError(f"{name} must be positive, got {value!r}")
        if self.stride_s is not None and not self.stride_s > 0:
            raise ConfigError(f"stride_s must be positive, got {self.stride_s!r}")
        try:
            window = samples_for(self.window_len_s, self.sample_rate_hz, "window")
            segment = samples_for(self.segment_len_s, self.sample_rate_hz, "segment")
            if self.stride_s is not None:
                samples_for(self.stride_s, self.sample_rate_hz, "stride")
        except ValueError as e:
            raise ConfigError(str(e)) from None
        if window > segment:
            raise ConfigError(
                f"A {self.window_len_s:g} s window does not fit a "
                f"{self.segment_len_s:g} s segment"
            )

    @property
    def settings(self) -> tuple[str, ...]:
        return resolve_settings(self.setting)

    def seed(self, rep_index: int) -> int:
        return self.base_seed + rep_index

    def to_dict(self) -> dict[str, Any]:
        data = dataclasses.asdict(self)
        data["models"] = list(self.models)
        return data

    def config_hash(self) -> str:
        """SHA-256 of the canonical JSON of every result-relevant field"""
        data = {k: v for k, v in self.to_dict().items() if k not in _EXECUTION_ONLY}
        canonical = json.dumps(data, sort_keys=True, separators=(",", ":"))
        return hashlib.sha256(canonical.encode("utf-8")).hexdigest()

    def replace(self, **changes: Any) -> "ExperimentConfig":
        return dataclasses.replace(self, **changes)

    @classmethod
    def from_mapping(cls, data: Mapping[str, Any]) -> "ExperimentConfig":
        """Build a configuration, rejecting unknown keys

        Keys may use dashes or underscores.
        """
        fields = {f.name for f in dataclasses.fields(cls)}
        values = {}
        for key, value in data.items():
            name = str(key).replace("-", "_")
            if name not in fields:
                raise ConfigError(f"Unknown configuration key '{key}'")
            values[name] = value
        if "models" in values and not isinstance(values["models"], str):
            values["models"] = tuple(values["models"])
        try:
            return cls(**values)
        except TypeError as e:
            raise ConfigError(str(e)) from None


def load_config(
    path: str | os.PathLike | None = None,
    overrides: Mapping[str, Any] | None = None,
) -> ExperimentConfig:
    """Read a YAML configuration and apply explicit overrides on top

    Overrides whose value is ``None`` are ignored, so unset command line flags
    leave the file's values in place.

    Raises:
        ConfigError: for unreadable files, non-mapping documents and unknown keys
    """
    data: dict[str, Any] = {}
    if path is not None:
        try:
            document = yaml.safe_load(Path(path).read_text())
        except (OSError, yaml.YAMLError) as e:
            raise ConfigError(f"Cannot read configuration {path}: {e}") from None
        if document is None:
            document = {}
        if not isinstance(document, Mapping):
            raise ConfigError(f"Configuration {path} must map keys to values")
        data.update(document)
    for key, value in (overrides or {}).items():
        if value is not None:
            data[str(key).replace("-", "_")] = value
    return ExperimentConfig.from_mapping(data)
