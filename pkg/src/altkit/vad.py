"""RMS-based vocal activity detection and transcription-window segmentation.

The segmenter turns separated-vocal audio into non-overlapping windows of at
most ``max_len`` seconds: frame-level RMS scores are max-normalized (so any
positive input gain cancels exactly in the comparisons that follow),
binarized with onset/offset hysteresis, over-long active regions are cut at
their interior score minimum, and adjacent regions are greedily merged back
up to the length limit.

Frame ``t`` covers samples ``[t*hop, t*hop + frame_size)`` with the final
partial frame zero-padded.  When regions are converted to seconds, a
boundary created by threshold crossing is placed at the midpoint of its
uncertainty interval: activity that starts inside frame ``s`` (whose
predecessor was silent) started somewhere in
``(s*hop + frame_size - hop, s*hop + frame_size)``, and activity last seen
in frame ``e`` ended in ``(e*hop, (e+1)*hop)``.  This keeps boundaries
within half a hop of the true onset/offset instead of biasing them a full
analysis window early.  Boundaries created by cutting map to the exact
frame edge, so the two pieces of a cut meet at the cut point.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from pathlib import Path
from typing import NamedTuple

import numpy as np

from .audio import AudioBuffer
from .errors import AudioTooShort, SilentSignal, UnsplittableRegion

__all__ = [
    "VadConfig",
    "VadScores",
    "Segment",
    "FrameRegion",
    "compute_rms",
    "normalize_scores",
    "binarize",
    "cut_long_regions",
    "merge_adjacent",
    "rms_vad",
    "segments_to_json",
    "segments_from_json",
]


@dataclass(frozen=True)
class VadConfig:
    onset: float = 0.1
    offset: float = 0.1
    min_silence: float = 1.0
    max_len: float = 30.0
    frame_size: int = 2048
    hop: int = 512

    def __post_init__(self):
        if not 0 < self.offset <= self.onset < 1:
            raise ValueError("thresholds must satisfy 0 < offset <= onset < 1")
        if self.min_silence <= 0 or self.max_len <= 0:
            raise ValueError("min_silence and max_len must be positive")
        if self.frame_size <= 0 or self.hop <= 0:
            raise ValueError("frame_size and hop must be positive")

    @classmethod
    def from_json(cls, path: str | Path) -> "VadConfig":
        with open(path, encoding="utf-8") as fh:
            return cls(**json.load(fh))


@dataclass(frozen=True)
class VadScores:
    """Max-normalized frame scores plus the framing metadata behind them."""

    scores: np.ndarray
    hop: int
    frame_size: int
    sample_rate: int
    n_samples: int

    @property
    def n_frames(self) -> int:
        return len(self.scores)


class FrameRegion(NamedTuple):
    """Half-open span of active frames.

    ``onset_start`` / ``offset_end`` record whether the boundary came from a
    threshold crossing (and should get the midpoint refinement) or from a
    cut (and must map to the exact frame edge).
    """

    start: int
    end: int
    onset_start: bool = True
    offset_end: bool = True


@dataclass(frozen=True)
class Segment:
    """A transcription window in seconds."""

    start: float
    end: float

    def __post_init__(self):
        if not 0 <= self.start < self.end:
            raise ValueError(f"invalid segment [{self.start}, {self.end})")

    @property
    def duration(self) -> float:
        return self.end - self.start


def compute_rms(audio: AudioBuffer, frame_size: int, hop: int) -> np.ndarray:
    """Frame-level RMS amplitude of a mono signal.

    Frame ``t`` covers ``[t*hop, t*hop + frame_size)``; the trailing partial
    frame is zero-padded so trailing audio is never dropped.  Raises
    :class:`AudioTooShort` when the signal is shorter than one frame.
    """
    x = audio.samples
    if frame_size > len(x):
        raise AudioTooShort(
            f"signal of {len(x)} samples is shorter than one frame ({frame_size})"
        )
    n_frames = -(-len(x) // hop)
    padded_len = (n_frames - 1) * hop + frame_size
    sq = np.zeros(padded_len + 1)
    np.cumsum(np.square(x), out=sq[1 : len(x) + 1])
    sq[len(x) + 1 :] = sq[len(x)]
    starts = np.arange(n_frames) * hop
    energy = sq[starts + frame_size] - sq[starts]
    return np.sqrt(energy / frame_size)


def normalize_scores(
    rms: np.ndarray, *, hop: int, frame_size: int, sample_rate: int, n_samples: int
) -> VadScores:
    """Divide by the global maximum so the loudest frame scores exactly 1.

    Raises :class:`SilentSignal` when the signal carries no energy at all.
    """
    if len(rms) == 0:
        raise AudioTooShort("no frames to normalize")
    peak = rms.max()
    if peak == 0:
        raise SilentSignal("signal is all zeros; no vocal activity to segment")
    return VadScores(rms / peak, hop, frame_size, sample_rate, n_samples)


def binarize(scores: VadScores, cfg: VadConfig) -> list[FrameRegion]:
    """Hysteresis thresholding of the score track into active frame regions.

    A region opens at the first frame >= onset and closes once scores stay
    below offset for at least ``min_silence`` worth of frames; shorter gaps
    are bridged.  Region boundaries are the first/last supra-threshold
    frames.
    """
    min_silence_frames = math.ceil(cfg.min_silence * scores.sample_rate / scores.hop)
    regions: list[FrameRegion] = []
    active = False
    start = last_active = 0
    for i, s in enumerate(scores.scores):
        if not active:
            if s >= cfg.onset:
                active = True
                start = last_active = i
        elif s >= cfg.offset:
            last_active = i
        elif i - last_active >= min_silence_frames:
            regions.append(FrameRegion(start, last_active + 1))
            active = False
    if active:
        regions.append(FrameRegion(start, last_active + 1))
    return regions


def _boundary_times(region: FrameRegion, scores: VadScores) -> tuple[float, float]:
    """Map a frame region to a time interval in seconds (see module docstring)."""
    hop = scores.hop
    frame_size = scores.frame_size
    sr = scores.sample_rate

    if not region.onset_start:
        start = region.start * hop
    elif region.start == 0:
        start = 0.0
    else:
        start = region.start * hop + frame_size - 0.5 * hop

    if not region.offset_end:
        end = region.end * hop
    elif region.end >= scores.n_frames:
        end = float(scores.n_samples)
    else:
        end = (region.end - 1) * hop + 0.5 * hop

    if end <= start:
        # active span shorter than one analysis window; fall back to frame centers
        start = region.start * hop + 0.5 * frame_size
        end = (region.end - 1) * hop + 0.5 * frame_size + hop
    return start / sr, end / sr


def _region_duration(region: FrameRegion, scores: VadScores) -> float:
    start, end = _boundary_times(region, scores)
    return end - start


def cut_long_regions(
    regions: list[FrameRegion], scores: VadScores, max_len: float
) -> list[FrameRegion]:
    """Recursively split over-long regions at their interior score minimum.

    Candidate cut frames exclude a 0.5 s margin at each region edge so no
    piece degenerates.  Raises :class:`UnsplittableRegion` when an over-long
    region has no candidate frame, which signals a pathological config
    (margins wider than the region).
    """
    margin = max(1, round(0.5 * scores.sample_rate / scores.hop))
    out: list[FrameRegion] = []

    def split(region: FrameRegion) -> None:
        if _region_duration(region, scores) <= max_len:
            out.append(region)
            return
        lo = region.start + margin
        hi = region.end - margin
        if lo >= hi:
            raise UnsplittableRegion(
                f"region {region.start}..{region.end} exceeds {max_len}s "
                "but has no interior cut point outside the margins"
            )
        cut = lo + int(np.argmin(scores.scores[lo:hi]))
        split(FrameRegion(region.start, cut, region.onset_start, False))
        split(FrameRegion(cut, region.end, False, region.offset_end))

    for region in regions:
        split(region)
    return out


def merge_adjacent(
    regions: list[FrameRegion], scores: VadScores, max_len: float
) -> list[Segment]:
    """Greedy left-to-right merge of regions whose combined span fits max_len."""
    segments: list[Segment] = []
    if not regions:
        return segments
    cur = regions[0]
    for nxt in regions[1:]:
        candidate = FrameRegion(cur.start, nxt.end, cur.onset_start, nxt.offset_end)
        if _region_duration(candidate, scores) <= max_len:
            cur = candidate
        else:
            segments.append(Segment(*_boundary_times(cur, scores)))
            cur = nxt
    segments.append(Segment(*_boundary_times(cur, scores)))
    return segments


def rms_vad(vocals: AudioBuffer, cfg: VadConfig | None = None) -> list[Segment]:
    """Segment a song into transcription windows from its (separated) vocals.

    Composition of :func:`compute_rms`, :func:`normalize_scores`,
    :func:`binarize`, :func:`cut_long_regions` and :func:`merge_adjacent`.
    The result is sorted, non-overlapping, and every segment lasts at most
    ``cfg.max_len`` seconds.  Propagates :class:`SilentSignal` for all-zero
    input.
    """
    cfg = cfg or VadConfig()
    rms = compute_rms(vocals, cfg.frame_size, cfg.hop)
    scores = normalize_scores(
        rms,
        hop=cfg.hop,
        frame_size=cfg.frame_size,
        sample_rate=vocals.sample_rate,
        n_samples=len(vocals.samples),
    )
    regions = binarize(scores, cfg)
    regions = cut_long_regions(regions, scores, cfg.max_len)
    return merge_adjacent(regions, scores, cfg.max_len)


def segments_to_json(segments: list[Segment]) -> list[dict]:
    return [{"start": s.start, "end": s.end} for s in segments]


def segments_from_json(data: list[dict]) -> list[Segment]:
    return [Segment(float(d["start"]), float(d["end"])) for d in data]
