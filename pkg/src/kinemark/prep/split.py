"""Participant-disjoint, outcome-stratified train/test splits
"""

__all__ = [
    "SplitPlan",
    "split_participants",
    "route_windows",
    "assert_disjoint",
    "outcome_fraction",
]

import logging
import math
import os
from collections.abc import Iterable, Mapping
from dataclasses import dataclass
from typing import IO

import numpy as np
import pandas as pd

from kinemark.corpus.recording import Outcome
from kinemark.errors import InsufficientClass, LeakageError
from kinemark.features.matrix import FeatureMatrix

logger = logging.getLogger(__name__)

ROLES = ("train", "test")


@dataclass(frozen=True)
class SplitPlan:
    """The train and test participants of one repetition

    Both tuples are sorted; their union is the whole corpus.
    """

    train: tuple[str, ...]
    test: tuple[str, ...]
    test_fraction: float = 0.2
    seed: int | None = None

    def __post_init__(self) -> None:
        overlap = set(self.train) & set(self.test)
        if overlap:
            raise LeakageError(overlap)

    @property
    def participants(self) -> tuple[str, ...]:
        return tuple(sorted(self.train + self.test))

    def role(self, participant_id: str) -> str:
        if participant_id in self.test:
            return "test"
        if participant_id in self.train:
            return "train"
        raise KeyError(f"Participant '{participant_id}' is not part of the split")

    def to_frame(self) -> pd.DataFrame:
        return pd.DataFrame(
            {
                "participant_id": list(self.train) + list(self.test),
                "role": ["train"] * len(self.train) + ["test"] * len(self.test),
            }
        )

    def to_csv(self, dest: str | os.PathLike | IO) -> None:
        self.to_frame().to_csv(dest, index=False)

    @classmethod
    def read_csv(cls, source: str | os.PathLike | IO) -> "SplitPlan":
        frame = pd.read_csv(source, dtype={"participant_id": str, "role": str})
        for column in ("participant_id", "role"):
            if column not in frame.columns:
                raise KeyError(f"Split table has no '{column}' column")
        bad = set(frame["role"]) - set(ROLES)
        if bad:
            raise ValueError(f"Unknown split roles: {', '.join(sorted(bad))}")
        train = frame.loc[frame["role"] == "train", "participant_id"]
        test = frame.loc[frame["role"] == "test", "participant_id"]
        n = len(train) + len(test)
        return cls(
            tuple(sorted(train)),
            tuple(sorted(test)),
            test_fraction=len(test) / n if n else 0.0,
        )


def _n_test(n: int, test_fraction: float) -> int:
    # Round half up, and keep at least one participant on each side
    return min(max(math.floor(test_fraction * n + 0.5), 1), n - 1)


def split_participants(
    outcomes: Mapping[str, Outcome | str], test_fraction: float = 0.2, seed: int = 0
) -> SplitPlan:
    """Split participants into train and test groups, stratified by outcome

    Each outcome class is shuffled on its own and contributes
    ``round(test_fraction * n_class)`` participants to the test group, so the
    Sick share of the test group matches the corpus share up to rounding.

    Args:
        outcomes: The outcome of every participant
        test_fraction: Target fraction of participants in the test group
        seed: Seed of the shuffle; equal seeds give equal plans

    Raises:
        InsufficientClass: if an outcome class has fewer than two participants
    """
    if not 0 < test_fraction < 1:
        raise ValueError(f"test_fraction must lie in (0, 1), got {test_fraction}")
    strata = {outcome: [] for outcome in Outcome}
    for pid, outcome in outcomes.items():
        strata[Outcome.parse(outcome)].append(str(pid))

    rng = np.random.default_rng(seed)
    train, test = [], []
    for outcome, members in strata.items():
        if len(members) < 2:
            raise InsufficientClass(
                f"At least 2 {outcome.value} participants are required for a "
                f"disjoint split, found {len(members)}"
            )
        shuffled = rng.permutation(np.asarray(sorted(members), dtype=object))
        k = _n_test(len(members), test_fraction)
        test.extend(shuffled[:k])
        train.extend(shuffled[k:])

    plan = SplitPlan(tuple(sorted(train)), tuple(sorted(test)), test_fraction, seed)
    logger.debug(
        "Split seed %d: %d train, %d test", seed, len(plan.train), len(plan.test)
    )
    return plan


def assert_disjoint(train: FeatureMatrix, test: FeatureMatrix) -> None:
    """Raise :class:`LeakageError` if a participant has rows on both sides"""
    shared = set(train.participant_ids) & set(test.participant_ids)
    if shared:
        raise LeakageError(shared)


def route_windows(
    matrix: FeatureMatrix, plan: SplitPlan
) -> tuple[FeatureMatrix, FeatureMatrix]:
    """Route every row to the train or test matrix by its participant

    Raises:
        LeakageError: if the resulting matrices share a participant
        KeyError: if a row belongs to a participant outside the plan
    """
    ids = matrix.participant_ids
    train_ids, test_ids = set(plan.train), set(plan.test)
    unknown = set(ids) - train_ids - test_ids
    if unknown:
        raise KeyError(
            "Rows of participants outside the split: " + ", ".join(sorted(unknown))
        )
    train = matrix.rows([pid in train_ids for pid in ids])
    test = matrix.rows([pid in test_ids for pid in ids])
    assert_disjoint(train, test)
    return train, test


def outcome_fraction(
    ids: Iterable[str], outcomes: Mapping[str, Outcome | str]
) -> float:
    ids = list(ids)
    if not ids:
        return 0.0
    return sum(Outcome.parse(outcomes[i]) is Outcome.SICK for i in ids) / len(ids)
