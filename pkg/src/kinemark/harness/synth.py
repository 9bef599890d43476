"""A synthetic corpus with a learnable, imperfect sickness signal

Every channel is a sum of slow sinusoids with a little drift and sensor noise.
On top of that every participant fidgets for the whole session: a faster
oscillation with short abrupt bursts, at a strength drawn per participant. The
final segment of a Sick participant carries a second, higher pitched layer of
the same kind. Both strengths start at zero, so a calm Sick participant looks
like a restless Well one and no window feature separates the classes exactly.
"""

__all__ = ["synth_recording", "synth_corpus"]

import logging
import math
import os
from pathlib import Path

import numpy as np

from kinemark.corpus.manifest import ManifestEntry, write_manifest
from kinemark.corpus.recording import CHANNELS, MotionRecording, Outcome, save_recording
from kinemark.utils import samples_for

logger = logging.getLogger(__name__)

# Typical sway amplitudes: cm for X, Y, Z and degrees for Pitch, Roll, Yaw
AMPLITUDES = np.array([1.5, 1.0, 2.0, 4.0, 3.0, 5.0])
NOISE = 0.01
BURST_WIDTH_S = 0.05

# Strength range, dominant frequency range [Hz] and burst rate [1/s]
FIDGET = ((0.0, 0.8), (0.8, 1.6), 1.0)
SICKNESS = ((0.0, 0.8), (1.2, 2.0), 1.5)


def _sway(rng: np.random.Generator, t: np.ndarray) -> np.ndarray:
    freq = rng.uniform(0.1, 0.6, size=(len(CHANNELS), 3, 1))
    phase = rng.uniform(0, 2 * np.pi, size=(len(CHANNELS), 3, 1))
    weight = rng.dirichlet(np.ones(3), size=len(CHANNELS))[..., None]
    signal = np.sum(weight * np.sin(2 * np.pi * freq * t + phase), axis=1)
    drift = np.cumsum(rng.normal(0, 0.002, size=(len(CHANNELS), t.size)), axis=1)
    return AMPLITUDES[:, None] * (signal + drift)


def _restlessness(
    rng: np.random.Generator,
    t: np.ndarray,
    strength: float,
    freq_range: tuple[float, float],
    bursts_per_s: float,
) -> np.ndarray:
    freq = rng.uniform(*freq_range)
    phase = rng.uniform(0, 2 * np.pi, size=(len(CHANNELS), 1))
    oscillation = 0.5 * np.sin(2 * np.pi * freq * t + phase)

    duration = t[-1] - t[0]
    n_bursts = int(rng.poisson(bursts_per_s * duration))
    centers = rng.uniform(t[0], t[-1], size=n_bursts)
    heights = rng.normal(0, 0.4, size=(len(CHANNELS), n_bursts))
    pulses = np.exp(-0.5 * ((t[None, :] - centers[:, None]) / BURST_WIDTH_S) ** 2)
    bursts = heights @ pulses
    return strength * AMPLITUDES[:, None] * (oscillation + bursts)


def synth_recording(
    participant_id: str,
    outcome: Outcome | str,
    rng: np.random.Generator,
    duration_s: float = 30.0,
    segment_len_s: float = 10.0,
    sample_rate: float = 60.0,
) -> MotionRecording:
    """Generate one participant's recording

    For a Sick participant the last ``segment_len_s`` seconds carry the
    sickness layer on top of the participant's fidgeting.
    """
    outcome = Outcome.parse(outcome)
    n = samples_for(duration_s, sample_rate, "recording")
    t = np.arange(n) / sample_rate
    channels = _sway(rng, t)
    bounds, freq_range, rate = FIDGET
    channels += _restlessness(rng, t, rng.uniform(*bounds), freq_range, rate)
    if outcome is Outcome.SICK:
        length = min(samples_for(segment_len_s, sample_rate, "segment"), n)
        bounds, freq_range, rate = SICKNESS
        channels[:, n - length :] += _restlessness(
            rng, t[n - length :], rng.uniform(*bounds), freq_range, rate
        )
    channels += NOISE * AMPLITUDES[:, None] * rng.normal(size=channels.shape)
    return MotionRecording(participant_id, outcome, sample_rate, channels)


def synth_corpus(
    dest: str | os.PathLike,
    n_participants: int = 20,
    sick_fraction: float = 0.5,
    seed: int = 0,
    *,
    duration_s: float = 30.0,
    segment_len_s: float = 10.0,
    sample_rate: float = 60.0,
) -> list[ManifestEntry]:
    """Write a synthetic corpus in the canonical layout

    Recordings go to ``dest/recordings/<id>.csv`` and the manifest to
    ``dest/manifest.csv``. The same arguments produce byte-identical files.

    Returns:
        The manifest entries
    """
    if n_participants < 4:
        raise ValueError(f"At least 4 participants are required, got {n_participants}")
    if not 0 <= sick_fraction <= 1:
        raise ValueError(f"sick_fraction must lie in [0, 1], got {sick_fraction}")
    if duration_s < 2 * segment_len_s:
        raise ValueError("Recordings must hold two non-overlapping segments")

    dest = Path(dest)
    (dest / "recordings").mkdir(parents=True, exist_ok=True)
    rng = np.random.default_rng(seed)
    n_sick = math.floor(sick_fraction * n_participants + 0.5)
    sick = set(rng.choice(n_participants, size=n_sick, replace=False).tolist())
    width = max(3, len(str(n_participants - 1)))

    entries = []
    for i in range(n_participants):
        pid = f"P{i:0{width}d}"
        outcome = Outcome.SICK if i in sick else Outcome.WELL
        recording = synth_recording(
            pid, outcome, rng, duration_s, segment_len_s, sample_rate
        )
        path = dest / "recordings" / f"{pid}.csv"
        save_recording(recording, path)
        entries.append(ManifestEntry(pid, outcome, path))

    write_manifest(entries, dest / "manifest.csv")
    logger.info("Wrote %d participants (%d Sick) to %s", n_participants, n_sick, dest)
    return entries
