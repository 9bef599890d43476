"""Carving labeled segments out of recordings

Every participant contributes a "not sick" segment taken from the start of the
recording. Participants whose outcome is Sick (including those who stopped the
session early) also contribute a "sick" segment from the end of the recording.
"""

__all__ = [
    "SegmentLabel",
    "LabeledSegment",
    "label_segments",
    "label_corpus",
    "summarize_corpus",
]

import enum
import logging
from collections.abc import Iterable
from dataclasses import dataclass

import pandas as pd

from kinemark import units
from kinemark.corpus.recording import MotionRecording, Outcome
from kinemark.errors import RecordingTooShort
from kinemark.types import Array, Quantity
from kinemark.units import unit_registry as ureg
from kinemark.utils import samples_for

logger = logging.getLogger(__name__)


class SegmentLabel(enum.IntEnum):
    NOT_SICK = 0
    SICK = 1


@dataclass(frozen=True)
class LabeledSegment:
    """A half-open sample span ``[start, stop)`` of one participant's recording"""

    participant_id: str
    label: SegmentLabel
    start: int
    stop: int

    @property
    def length(self) -> int:
        return self.stop - self.start

    def slice(self, recording: MotionRecording) -> Array:
        if recording.participant_id != self.participant_id:
            raise ValueError(
                f"Segment of '{self.participant_id}' applied to the recording of "
                f"'{recording.participant_id}'"
            )
        return recording.channels[:, self.start : self.stop]


@units.quantity_input(segment_len=ureg.s)
def label_segments(
    recording: MotionRecording, segment_len: Quantity = 10.0
) -> list[LabeledSegment]:
    """Extract the labeled segments of one recording

    Args:
        recording: The participant's recording
        segment_len: Length of each segment [time unit]

    Returns:
        ``[NotSick]`` for a Well participant and ``[NotSick, Sick]`` for a Sick
        participant, where NotSick spans ``[0, L)`` and Sick spans ``[N - L, N)``

    Raises:
        RecordingTooShort: if the recording cannot hold the required segments
            without overlap; it is never truncated
    """
    segment_s = float(segment_len.magnitude)
    length = samples_for(segment_s, recording.sample_rate, what="segment")
    n = recording.n_samples
    sick = recording.outcome is Outcome.SICK
    required = 2 * length if sick else length
    if n < required:
        raise RecordingTooShort(
            recording.participant_id,
            required / recording.sample_rate,
            recording.duration_s,
        )

    pid = recording.participant_id
    segments = [LabeledSegment(pid, SegmentLabel.NOT_SICK, 0, length)]
    if sick:
        segments.append(LabeledSegment(pid, SegmentLabel.SICK, n - length, n))
    return segments


def label_corpus(
    recordings: Iterable[MotionRecording], segment_len: Quantity = 10.0
) -> tuple[list[LabeledSegment], list[RecordingTooShort]]:
    """Label every recording, reporting and skipping the ones that are too short"""
    segments: list[LabeledSegment] = []
    skipped: list[RecordingTooShort] = []
    for recording in recordings:
        try:
            segments.extend(label_segments(recording, segment_len))
        except RecordingTooShort as e:
            logger.warning("Skipping participant: %s", e)
            skipped.append(e)
    return segments, skipped


def summarize_corpus(recordings: Iterable[MotionRecording]) -> pd.DataFrame:
    rows = [
        (r.participant_id, r.outcome.value, r.n_samples, r.duration_s, r.sample_rate)
        for r in recordings
    ]
    return pd.DataFrame(
        rows,
        columns=["participant_id", "outcome", "n_samples", "duration_s", "sample_rate"],
    )
