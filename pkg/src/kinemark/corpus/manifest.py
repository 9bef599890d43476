__all__ = ["ManifestEntry", "Corpus", "load_manifest", "write_manifest", "load_corpus"]

import logging
import os
from collections.abc import Iterator, Sequence
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from pathlib import Path

import pandas as pd

from kinemark.corpus.recording import (
    ColumnMapping,
    MotionRecording,
    Outcome,
    load_recording,
)
from kinemark.errors import DuplicateParticipant, EmptyRecording, MissingColumn

logger = logging.getLogger(__name__)

MANIFEST_COLUMNS = ("participant_id", "outcome", "path")


@dataclass(frozen=True)
class ManifestEntry:
    participant_id: str
    outcome: Outcome
    path: Path


@dataclass(frozen=True)
class Corpus:
    """An immutable, participant-sorted collection of recordings"""

    recordings: tuple[MotionRecording, ...]

    def __post_init__(self) -> None:
        ids = [r.participant_id for r in self.recordings]
        seen: set[str] = set()
        for pid in ids:
            if pid in seen:
                raise DuplicateParticipant(pid)
            seen.add(pid)
        ordered = tuple(sorted(self.recordings, key=lambda r: r.participant_id))
        object.__setattr__(self, "recordings", ordered)

    def __iter__(self) -> Iterator[MotionRecording]:
        return iter(self.recordings)

    def __len__(self) -> int:
        return len(self.recordings)

    def outcomes(self) -> dict[str, Outcome]:
        return {r.participant_id: r.outcome for r in self.recordings}

    def get(self, participant_id: str) -> MotionRecording:
        for recording in self.recordings:
            if recording.participant_id == participant_id:
                return recording
        raise KeyError(participant_id)


def load_manifest(path: str | os.PathLike) -> list[ManifestEntry]:
    """Read a ``participant_id,outcome,path`` manifest

    Relative recording paths are resolved against the manifest's directory.
    Outcomes other than Well/Sick (case-insensitive) are a load error.
    """
    path = Path(path)
    try:
        table = pd.read_csv(path, dtype=str, keep_default_na=False)
    except pd.errors.EmptyDataError:
        raise EmptyRecording(f"manifest {path}") from None
    for column in MANIFEST_COLUMNS:
        if column not in table.columns:
            raise MissingColumn(column)

    entries = []
    seen: set[str] = set()
    for row in table.itertuples(index=False):
        pid = str(row.participant_id).strip()
        if pid in seen:
            raise DuplicateParticipant(pid)
        seen.add(pid)
        file_path = Path(str(row.path).strip())
        if not file_path.is_absolute():
            file_path = path.parent / file_path
        entries.append(ManifestEntry(pid, Outcome.parse(row.outcome), file_path))
    if not entries:
        raise EmptyRecording(f"manifest {path}")
    return entries


def write_manifest(
    entries: Sequence[ManifestEntry], path: str | os.PathLike, relative: bool = True
) -> None:
    path = Path(path)
    rows = []
    for entry in entries:
        file_path = entry.path
        if relative:
            file_path = Path(os.path.relpath(file_path, path.parent))
        rows.append((entry.participant_id, entry.outcome.value, file_path.as_posix()))
    pd.DataFrame(rows, columns=list(MANIFEST_COLUMNS)).to_csv(path, index=False)


def load_corpus(
    manifest: str | os.PathLike | Sequence[ManifestEntry],
    sample_rate: float = 60.0,
    max_workers: int | None = None,
) -> Corpus:
    """Load every recording listed in a manifest

    Args:
        manifest: A manifest path or already parsed entries
        sample_rate: The declared sample rate of every recording [Hz]
        max_workers: Load recordings concurrently in a thread pool of this size

    Returns:
        The :class:`Corpus`, sorted by participant id
    """
    if isinstance(manifest, str | os.PathLike):
        entries = load_manifest(manifest)
    else:
        entries = list(manifest)

    def load(entry: ManifestEntry) -> MotionRecording:
        schema = ColumnMapping(
            participant_id=entry.participant_id,
            outcome=entry.outcome,
            sample_rate=sample_rate,
        )
        return load_recording(entry.path, schema)

    if max_workers is not None and max_workers > 1:
        with ThreadPoolExecutor(max_workers=max_workers) as pool:
            recordings = list(pool.map(load, entries))
    else:
        recordings = [load(entry) for entry in entries]

    logger.info("Loaded %d recordings", len(recordings))
    return Corpus(tuple(recordings))
