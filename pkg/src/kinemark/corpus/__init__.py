__all__ = [
    "CHANNELS",
    "ColumnMapping",
    "Corpus",
    "LabeledSegment",
    "ManifestEntry",
    "MotionRecording",
    "Outcome",
    "SegmentLabel",
    "label_corpus",
    "label_segments",
    "load_corpus",
    "load_manifest",
    "load_recording",
    "save_recording",
    "summarize_corpus",
    "write_manifest",
]

from kinemark.corpus.manifest import (
    Corpus as Corpus,
    ManifestEntry as ManifestEntry,
    load_corpus as load_corpus,
    load_manifest as load_manifest,
    write_manifest as write_manifest,
)
from kinemark.corpus.recording import (
    CHANNELS as CHANNELS,
    ColumnMapping as ColumnMapping,
    MotionRecording as MotionRecording,
    Outcome as Outcome,
    load_recording as load_recording,
    save_recording as save_recording,
)
from kinemark.corpus.segments import (
    LabeledSegment as LabeledSegment,
    SegmentLabel as SegmentLabel,
    label_corpus as label_corpus,
    label_segments as label_segments,
    summarize_corpus as summarize_corpus,
)
