"""RMS computation, hysteresis, cut & merge, and full segmenter tests."""

import math
import random

import numpy as np
import pytest

from altkit.audio import AudioBuffer
from altkit.errors import AudioTooShort, SilentSignal, UnsplittableRegion
from altkit.vad import (
    FrameRegion,
    Segment,
    VadConfig,
    VadScores,
    binarize,
    compute_rms,
    cut_long_regions,
    merge_adjacent,
    normalize_scores,
    rms_vad,
)

SR = 44100
HOP = 512
FRAME = 2048


def make_scores(values, sr=SR, hop=HOP, frame_size=FRAME):
    arr = np.asarray(values, dtype=float)
    return VadScores(arr, hop, frame_size, sr, n_samples=len(arr) * hop)


def sine(freq, duration, sr=SR, amplitude=1.0):
    t = np.arange(int(duration * sr)) / sr
    return amplitude * np.sin(2 * np.pi * freq * t)


def burst_track(bursts, duration, sr=SR, freq=440.0, amplitude=1.0):
    x = np.zeros(int(duration * sr))
    for a, b in bursts:
        lo, hi = int(a * sr), int(b * sr)
        t = np.arange(hi - lo) / sr
        x[lo:hi] = amplitude * np.sin(2 * np.pi * freq * t)
    return AudioBuffer(x, sr)


# --- compute_rms ---


def test_constant_signal_full_frames_exact():
    buf = AudioBuffer(np.full(4096, 0.5), SR)
    rms = compute_rms(buf, FRAME, HOP)
    # frames 0..4 are fully inside the signal; the rest are zero-padded
    assert np.all(rms[:5] == 0.5)
    assert rms[5] == pytest.approx(0.5 * math.sqrt(1536 / 2048))
    assert rms[7] == pytest.approx(0.25)


def test_zero_signal_all_zero_frames():
    rms = compute_rms(AudioBuffer(np.zeros(8192), SR), FRAME, HOP)
    assert np.all(rms == 0.0)


def test_full_scale_sine_rms_close_to_invsqrt2():
    buf = AudioBuffer(sine(1000.0, 1.0), SR)
    rms = compute_rms(buf, 8192, 2048)
    full = rms[: (len(buf.samples) - 8192) // 2048 + 1]
    assert np.all(np.abs(full - 1 / math.sqrt(2)) < 1e-3)


def test_signal_shorter_than_frame_raises():
    with pytest.raises(AudioTooShort):
        compute_rms(AudioBuffer(np.ones(100), SR), FRAME, HOP)


def test_frame_count_covers_trailing_samples():
    buf = AudioBuffer(np.ones(FRAME + 1), SR)
    assert len(compute_rms(buf, FRAME, HOP)) == math.ceil((FRAME + 1) / HOP)


def test_concatenation_property_when_frame_equals_hop():
    rng = random.Random(3)
    hop = 256
    # dyadic sample values keep every intermediate sum exact
    def dyadic(n):
        return np.array([rng.choice([0.0, 0.25, 0.5, -0.5]) for _ in range(n)])

    a, b = dyadic(4 * hop), dyadic(6 * hop)
    joined = AudioBuffer(np.concatenate([a, b]), SR)
    ra = compute_rms(AudioBuffer(a, SR), hop, hop)
    rb = compute_rms(AudioBuffer(b, SR), hop, hop)
    assert np.array_equal(compute_rms(joined, hop, hop), np.concatenate([ra, rb]))


# --- normalize_scores ---


def test_normalize_divides_by_max():
    scores = normalize_scores(
        np.array([0.2, 0.4, 0.1]), hop=HOP, frame_size=FRAME, sample_rate=SR, n_samples=3 * HOP
    )
    assert np.allclose(scores.scores, [0.5, 1.0, 0.25])
    assert scores.scores.max() == 1.0


def test_normalize_singleton():
    scores = normalize_scores(
        np.array([0.3]), hop=HOP, frame_size=FRAME, sample_rate=SR, n_samples=HOP
    )
    assert scores.scores[0] == 1.0


def test_normalize_silent_raises():
    with pytest.raises(SilentSignal):
        normalize_scores(
            np.zeros(3), hop=HOP, frame_size=FRAME, sample_rate=SR, n_samples=3 * HOP
        )


# --- binarize ---


def frames_at(seconds):
    return round(seconds * SR / HOP)


def test_binarize_two_regions_across_long_gap():
    scores = np.zeros(frames_at(12.0))
    scores[frames_at(2.0) : frames_at(5.0)] = 1.0
    scores[frames_at(7.0) : frames_at(9.0)] = 1.0
    regions = binarize(make_scores(scores), VadConfig())
    assert regions == [
        FrameRegion(frames_at(2.0), frames_at(5.0)),
        FrameRegion(frames_at(7.0), frames_at(9.0)),
    ]


def test_binarize_bridges_short_gap():
    scores = np.zeros(frames_at(12.0))
    scores[frames_at(2.0) : frames_at(5.0)] = 1.0
    scores[frames_at(5.5) : frames_at(9.0)] = 1.0  # 0.5 s gap < min_silence
    regions = binarize(make_scores(scores), VadConfig())
    assert regions == [FrameRegion(frames_at(2.0), frames_at(9.0))]


def test_binarize_all_below_onset_is_empty():
    scores = make_scores(np.full(200, 0.05))
    assert binarize(scores, VadConfig()) == []


def test_binarize_hysteresis_keeps_region_open_between_thresholds():
    cfg = VadConfig(onset=0.5, offset=0.2)
    scores = np.concatenate([np.full(50, 0.6), np.full(300, 0.3), np.full(50, 0.6)])
    regions = binarize(make_scores(scores), cfg)
    assert regions == [FrameRegion(0, 400)]
    # 0.3 alone never reaches onset
    assert binarize(make_scores(np.full(400, 0.3)), cfg) == []


# --- cut_long_regions ---


def test_cut_at_interior_minimum():
    n = frames_at(45.0)
    scores = np.ones(n)
    dip = 1895  # ~22.0 s
    scores[dip] = 0.05
    vs = make_scores(scores)
    pieces = cut_long_regions([FrameRegion(0, n)], vs, 30.0)
    assert len(pieces) == 2
    assert pieces[0] == FrameRegion(0, dip, True, False)
    assert pieces[1] == FrameRegion(dip, n, False, True)
    segs = merge_adjacent(pieces, vs, 0.0001)  # tiny max_len: no merging back
    assert segs[0].end == segs[1].start == pytest.approx(dip * HOP / SR)
    assert all(s.duration <= 30.0 for s in segs)


def test_cut_recurses_when_minimum_near_edge():
    n = frames_at(45.0)
    scores = np.ones(n)
    scores[frames_at(40.0)] = 0.05  # global minimum leaves a 40 s left piece
    scores[frames_at(20.0)] = 0.06  # secondary minimum inside the left piece
    vs = make_scores(scores)
    pieces = cut_long_regions([FrameRegion(0, n)], vs, 30.0)
    assert [p.start for p in pieces] == [0, frames_at(20.0), frames_at(40.0)]
    for piece in pieces:
        assert (
            merge_adjacent([piece], vs, 30.0)[0].duration <= 30.0
        )


def test_short_region_unchanged():
    n = frames_at(10.0)
    vs = make_scores(np.ones(n))
    assert cut_long_regions([FrameRegion(0, n)], vs, 30.0) == [FrameRegion(0, n)]


def test_unsplittable_region_raises():
    vs = make_scores(np.ones(100))
    with pytest.raises(UnsplittableRegion):
        cut_long_regions([FrameRegion(0, 60)], vs, 0.2)


# --- merge_adjacent ---


def test_merge_within_limit():
    vs = make_scores(np.ones(frames_at(12.0)))
    regions = [
        FrameRegion(frames_at(2.0), frames_at(5.0)),
        FrameRegion(frames_at(7.0), frames_at(9.0)),
    ]
    segs = merge_adjacent(regions, vs, 30.0)
    assert len(segs) == 1
    assert segs[0].start == pytest.approx(2.0, abs=0.05)
    assert segs[0].end == pytest.approx(9.0, abs=0.05)


def test_merge_respects_limit():
    vs = make_scores(np.ones(frames_at(41.0)))
    regions = [
        FrameRegion(0, frames_at(20.0)),
        FrameRegion(frames_at(25.0), frames_at(40.0)),
    ]
    segs = merge_adjacent(regions, vs, 30.0)
    assert len(segs) == 2


def test_merge_single_region_is_itself():
    vs = make_scores(np.ones(frames_at(10.0)))
    segs = merge_adjacent([FrameRegion(frames_at(2.0), frames_at(5.0))], vs, 30.0)
    assert len(segs) == 1


def test_merge_empty():
    vs = make_scores(np.ones(10))
    assert merge_adjacent([], vs, 30.0) == []


# --- rms_vad composition ---


def test_bursts_become_single_tight_segment():
    vocals = burst_track([(2.0, 5.0), (7.0, 9.0)], 12.0)
    segments = rms_vad(vocals)
    assert len(segments) == 1
    assert segments[0].start == pytest.approx(2.0, abs=0.025)
    assert segments[0].end == pytest.approx(9.0, abs=0.025)


def test_silence_raises_silent_signal():
    with pytest.raises(SilentSignal):
        rms_vad(AudioBuffer(np.zeros(SR * 5), SR))


def test_continuous_tone_split_into_legal_segments():
    segments = rms_vad(AudioBuffer(sine(440.0, 60.0), SR))
    assert len(segments) >= 2
    assert all(s.duration <= 30.0 for s in segments)
    # pieces of a cut meet exactly
    for a, b in zip(segments, segments[1:]):
        assert a.end == b.start


def test_gain_invariance_bit_identical():
    vocals = burst_track([(2.0, 5.0), (7.0, 9.0)], 12.0)
    base = rms_vad(vocals)
    for gain in (0.01, 0.25, 4.0):
        scaled = AudioBuffer(vocals.samples * gain, SR)
        assert rms_vad(scaled) == base


def test_segments_sorted_disjoint_and_cover_active_frames():
    rng = random.Random(42)
    cfg = VadConfig()
    for _ in range(5):
        bursts = []
        t = rng.uniform(0.0, 3.0)
        duration = rng.uniform(40.0, 70.0)
        while t < duration - 2.0:
            length = rng.uniform(0.5, 12.0)
            end = min(t + length, duration - 0.5)
            if end > t + 0.1:
                bursts.append((t, end))
            t = end + rng.uniform(0.3, 9.0)
        vocals = burst_track(bursts, duration, freq=rng.uniform(200, 2000))
        if not bursts:
            continue
        segments = rms_vad(vocals, cfg)

        for a, b in zip(segments, segments[1:]):
            assert a.end <= b.start
        assert all(s.duration <= cfg.max_len + cfg.hop / SR for s in segments)

        # no vocal activity dropped: every supra-onset frame's analysis
        # window intersects some segment
        rms = compute_rms(vocals, cfg.frame_size, cfg.hop)
        norm = rms / rms.max()
        for idx in np.nonzero(norm >= cfg.onset)[0]:
            w_lo = idx * cfg.hop / SR
            w_hi = (idx * cfg.hop + cfg.frame_size) / SR
            assert any(s.start < w_hi and w_lo < s.end for s in segments)


def test_config_validation():
    with pytest.raises(ValueError):
        VadConfig(onset=0.1, offset=0.2)
    with pytest.raises(ValueError):
        VadConfig(min_silence=0)
    with pytest.raises(ValueError):
        Segment(5.0, 5.0)
