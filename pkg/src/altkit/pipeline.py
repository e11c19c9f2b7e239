"""Experiment orchestration: short-form and long-form evaluation runs.

A run walks every song in a manifest, obtains hypotheses from the adapter
(the stochastic part, repeated ``repeats`` times and cached by content so a
rerun replays bit-identically), aligns them against the lyric reference,
and pools edit counts.  Pooled rates are always computed from summed counts
per repeat; the published figures are the arithmetic mean of the per-repeat
rates, and per-repeat counts are kept so either convention can be
recomputed.
"""

from __future__ import annotations

import hashlib
import json
import tempfile
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from pathlib import Path
from typing import Callable, Sequence

from . import adapter as adapter_client
from .align import (
    EditCounts,
    MetricsReport,
    aggregate,
    align,
    compute_rates,
    count_edits,
)
from .audio import load_audio, save_wav
from .errors import ManifestError, SilentSignal, UnbalancedParentheses
from .manifest import DatasetManifest, LyricsDoc, SongEntry, load_lyrics
from .sampling import SampleKind, group_merged, merge_overlapping_lines
from .textnorm import (
    RawTranscript,
    Token,
    apply_nonlexical_annotations,
    strip_nonwords,
    tokenize_lyrics,
)
from .vad import Segment, VadConfig, rms_vad

__all__ = [
    "Task",
    "Segmenter",
    "RunConfig",
    "SongResult",
    "RepeatResult",
    "RunResult",
    "run_shortform",
    "run_longform",
    "average_runs",
]

# fn(audio_path, language, segments) -> hypothesis texts; the default sends a
# wire-protocol request to the configured adapter subprocess.
TranscribeFn = Callable[[Path, "str | None", "list[Segment] | None"], "list[str]"]


class Task(str, Enum):
    SHORT_FORM = "short"
    LONG_FORM = "long"


class Segmenter(str, Enum):
    NATIVE = "native"
    RMS_VAD = "rms-vad"


@dataclass(frozen=True)
class RunConfig:
    task: Task
    audio_variant: str
    adapter: str
    sample_kind: SampleKind | None = None
    segmenter: Segmenter | None = None
    vad_source_variant: str | None = None
    repeats: int = 5
    language_forcing: bool = True
    cache_dir: Path | None = None
    workers: int = 1
    vad: VadConfig = field(default_factory=VadConfig)

    def __post_init__(self):
        if self.repeats < 1:
            raise ValueError("repeats must be >= 1")
        if self.task is Task.SHORT_FORM and self.sample_kind is None:
            raise ValueError("short-form runs need a sample_kind")
        if self.task is Task.LONG_FORM:
            if self.segmenter is None:
                raise ValueError("long-form runs need a segmenter")
            if self.segmenter is Segmenter.RMS_VAD and self.vad_source_variant is None:
                raise ValueError("rms-vad runs need a vad_source_variant")

    @property
    def detail(self) -> str:
        """The run's second table dimension: sample kind or segmenter."""
        if self.task is Task.SHORT_FORM:
            return self.sample_kind.value
        return self.segmenter.value

    @property
    def label(self) -> str:
        return f"{self.task.value}/{self.detail}/{self.audio_variant}"


@dataclass(frozen=True)
class SongResult:
    song_id: str
    language: str
    counts: EditCounts
    report: MetricsReport


@dataclass(frozen=True)
class RepeatResult:
    songs: tuple[SongResult, ...]
    overall_counts: EditCounts
    overall: MetricsReport
    by_language: dict[str, MetricsReport]


@dataclass(frozen=True)
class RunResult:
    config: RunConfig
    repeats: tuple[RepeatResult, ...]
    averaged: MetricsReport
    by_language_averaged: dict[str, MetricsReport]
    excluded_samples: int = 0
    silent_songs: tuple[str, ...] = ()

    def to_json(self) -> dict:
        def report_dict(r: MetricsReport) -> dict:
            return r.as_percent_strings()

        return {
            "run": self.config.label,
            "repeats": len(self.repeats),
            "averaged": report_dict(self.averaged),
            "by_language": {
                lang: report_dict(r)
                for lang, r in sorted(self.by_language_averaged.items())
            },
            "excluded_samples": self.excluded_samples,
            "silent_songs": list(self.silent_songs),
            "per_repeat": [
                {
                    "overall": report_dict(rep.overall),
                    "songs": [
                        {
                            "song_id": s.song_id,
                            "language": s.language,
                            "hits": s.counts.hits,
                            "subs": s.counts.subs,
                            "dels": s.counts.dels,
                            "ins": s.counts.ins,
                            "ins10": s.counts.ins10,
                            "dels_nonlexical": s.counts.dels_nonlexical,
                            "dels_backing": s.counts.dels_backing,
                        }
                        for s in rep.songs
                    ],
                }
                for rep in self.repeats
            ],
        }


def average_runs(reports: Sequence[MetricsReport]) -> MetricsReport:
    """Arithmetic mean of per-repeat rates, kept exact."""
    if not reports:
        raise ValueError("nothing to average")
    n = len(reports)
    mean = lambda name: sum(getattr(r, name) for r in reports) / Fraction(n)
    return MetricsReport(
        wer=mean("wer"),
        sr=mean("sr"),
        dr=mean("dr"),
        ir=mean("ir"),
        ir10=mean("ir10"),
        dr_nl=mean("dr_nl"),
        dr_bv=mean("dr_bv"),
    )


class _Transcriber:
    """Wraps the adapter call with content-keyed caching.

    Cache keys cover the audio bytes, the segment list, the adapter command,
    the language actually sent, and the repeat index, so metric code can be
    reworked and rerun without re-inference.
    """

    def __init__(self, cfg: RunConfig, fn: TranscribeFn | None):
        self._cfg = cfg
        self._fn = fn
        self._audio_hashes: dict[Path, str] = {}
        if cfg.cache_dir is not None:
            cfg.cache_dir.mkdir(parents=True, exist_ok=True)

    def _hash_audio(self, path: Path) -> str:
        cached = self._audio_hashes.get(path)
        if cached is None:
            cached = hashlib.sha256(path.read_bytes()).hexdigest()
            self._audio_hashes[path] = cached
        return cached

    def __call__(
        self,
        audio_path: Path,
        language: str | None,
        segments: list[Segment] | None,
        repeat: int,
    ) -> list[str]:
        language = language if self._cfg.language_forcing else None
        cache_file = None
        if self._cfg.cache_dir is not None:
            key = hashlib.sha256(
                json.dumps(
                    {
                        "audio": self._hash_audio(audio_path),
                        "segments": None
                        if segments is None
                        else [[s.start, s.end] for s in segments],
                        "adapter": self._cfg.adapter,
                        "language": language,
                        "condition_on_previous": False,
                        "repeat": repeat,
                    },
                    sort_keys=True,
                ).encode()
            ).hexdigest()
            cache_file = self._cfg.cache_dir / f"{key}.json"
            if cache_file.is_file():
                return json.loads(cache_file.read_text(encoding="utf-8"))["texts"]

        if self._fn is not None:
            texts = self._fn(audio_path, language, segments)
        else:
            texts = adapter_client.transcribe(
                self._cfg.adapter, audio_path, language, segments
            )
        if cache_file is not None:
            cache_file.write_text(json.dumps({"texts": texts}), encoding="utf-8")
        return texts


def _song_reference(song: SongEntry) -> tuple[list[Token], LyricsDoc]:
    doc = load_lyrics(song.lyrics_path, song.song_id)
    tokens = tokenize_lyrics(RawTranscript(doc.text, doc.language))
    tokens = apply_nonlexical_annotations(tokens, doc.annotation)
    words = strip_nonwords(tokens)
    return words, doc


def _hyp_words(texts: Sequence[str], language: str) -> list[Token]:
    # Joined by newlines before tokenization; line breaks are non-word
    # tokens, so the join character cannot change metrics.
    joined = "\n".join(texts)
    try:
        tokens = tokenize_lyrics(RawTranscript(joined, language))
    except UnbalancedParentheses:
        # transcribers may emit stray parens; hypothesis-side backing flags
        # carry no metric weight, so dropping the parens is safe
        cleaned = joined.replace("(", " ").replace(")", " ")
        tokens = tokenize_lyrics(RawTranscript(cleaned, language))
    return strip_nonwords(tokens)


def _song_variant_path(song: SongEntry, variant: str) -> Path:
    try:
        return song.audio[variant]
    except KeyError:
        raise ManifestError(
            f"song {song.song_id!r} has no {variant!r} audio variant"
        ) from None


def _repeat_result(songs: list[SongResult]) -> RepeatResult:
    overall_counts = aggregate([s.counts for s in songs])
    by_language: dict[str, MetricsReport] = {}
    for lang in sorted({s.language for s in songs}):
        by_language[lang] = compute_rates(
            aggregate([s.counts for s in songs if s.language == lang])
        )
    return RepeatResult(
        songs=tuple(songs),
        overall_counts=overall_counts,
        overall=compute_rates(overall_counts),
        by_language=by_language,
    )


def _finalize(
    cfg: RunConfig,
    per_repeat: list[RepeatResult],
    excluded: int = 0,
    silent: Sequence[str] = (),
) -> RunResult:
    languages = sorted(per_repeat[0].by_language)
    return RunResult(
        config=cfg,
        repeats=tuple(per_repeat),
        averaged=average_runs([r.overall for r in per_repeat]),
        by_language_averaged={
            lang: average_runs([r.by_language[lang] for r in per_repeat])
            for lang in languages
        },
        excluded_samples=excluded,
        silent_songs=tuple(silent),
    )


def _map_songs(cfg: RunConfig, work, songs):
    if cfg.workers <= 1:
        return [work(song) for song in songs]
    with ThreadPoolExecutor(max_workers=cfg.workers) as pool:
        return list(pool.map(work, songs))


@dataclass
class _PreparedSong:
    song: SongEntry
    language: str
    # short-form: one entry per sample; long-form: a single entry
    windows: list[tuple[Path, list[Segment] | None, list[Token]]]
    silent: bool = False


def _prepare_shortform(
    song: SongEntry, cfg: RunConfig, windows_dir: Path
) -> tuple[_PreparedSong, int]:
    words, doc = _song_reference(song)
    samples, excluded = merge_overlapping_lines(list(doc.lines))
    if cfg.sample_kind is SampleKind.GROUP:
        samples = group_merged(samples)

    words_by_line: dict[int, list[Token]] = {}
    for tok in words:
        words_by_line.setdefault(tok.line_index, []).append(tok)

    audio_path = _song_variant_path(song, cfg.audio_variant)
    audio = load_audio(audio_path)
    sr = audio.sample_rate

    windows: list[tuple[Path, list[Segment] | None, list[Token]]] = []
    for sample in samples:
        ref = [t for idx in sample.source_lines for t in words_by_line.get(idx, [])]
        lo = round(sample.start * sr)
        hi = min(round(sample.end * sr), len(audio.samples))
        window_path = windows_dir / (
            f"{song.song_id}__{cfg.audio_variant}__"
            f"{round(sample.start * 1000):09d}-{round(sample.end * 1000):09d}.wav"
        )
        if not window_path.is_file():
            save_wav(window_path, audio.samples[lo:hi], sr)
        duration = (hi - lo) / sr
        windows.append((window_path, [Segment(0.0, duration)], ref))
    return _PreparedSong(song, doc.language, windows), excluded


def run_shortform(
    manifest: DatasetManifest,
    cfg: RunConfig,
    windows_dir: Path | None = None,
    transcribe_fn: TranscribeFn | None = None,
) -> RunResult:
    """Evaluate short-form transcription over merged-line or group samples.

    Every sample window is cut sample-accurately from the configured audio
    variant (no padding or fades) and transcribed as an independent
    short-form request; per-sample edit counts are summed per song and over
    the whole dataset before rates are taken.
    """
    if cfg.task is not Task.SHORT_FORM:
        raise ValueError("run_shortform needs a short-form config")

    tmp = None
    if windows_dir is None:
        tmp = tempfile.TemporaryDirectory(prefix="altkit-windows-")
        windows_dir = Path(tmp.name)
    windows_dir.mkdir(parents=True, exist_ok=True)

    try:
        prepared_pairs = _map_songs(
            cfg, lambda song: _prepare_shortform(song, cfg, windows_dir), manifest
        )
        prepared = [p for p, _ in prepared_pairs]
        excluded = sum(e for _, e in prepared_pairs)

        transcriber = _Transcriber(cfg, transcribe_fn)
        per_repeat: list[RepeatResult] = []
        for repeat in range(cfg.repeats):

            def work(prep: _PreparedSong) -> SongResult:
                counts = []
                for window_path, segments, ref in prep.windows:
                    texts = transcriber(window_path, prep.language, segments, repeat)
                    hyp = _hyp_words(texts, prep.language)
                    counts.append(count_edits(align(ref, hyp), ref))
                song_counts = aggregate(counts) if counts else EditCounts()
                return SongResult(
                    prep.song.song_id,
                    prep.language,
                    song_counts,
                    compute_rates(song_counts),
                )

            per_repeat.append(_repeat_result(_map_songs(cfg, work, prepared)))
        return _finalize(cfg, per_repeat, excluded=excluded)
    finally:
        if tmp is not None:
            tmp.cleanup()


def run_longform(
    manifest: DatasetManifest,
    cfg: RunConfig,
    transcribe_fn: TranscribeFn | None = None,
) -> RunResult:
    """Evaluate long-form transcription over whole songs.

    With the native segmenter the adapter is called once per song without
    segments and applies its own long-form algorithm.  With the RMS-VAD
    segmenter, boundaries are computed from ``cfg.vad_source_variant`` audio
    and transcription runs on ``cfg.audio_variant`` audio with those
    segments.  Songs whose VAD source is fully silent are reported and
    scored against an empty hypothesis (all deletions).
    """
    if cfg.task is not Task.LONG_FORM:
        raise ValueError("run_longform needs a long-form config")

    def prepare(song: SongEntry) -> _PreparedSong:
        words, doc = _song_reference(song)
        audio_path = _song_variant_path(song, cfg.audio_variant)
        if cfg.segmenter is Segmenter.NATIVE:
            return _PreparedSong(song, doc.language, [(audio_path, None, words)])
        vad_path = _song_variant_path(song, cfg.vad_source_variant)
        try:
            segments = rms_vad(load_audio(vad_path), cfg.vad)
        except SilentSignal:
            return _PreparedSong(song, doc.language, [(audio_path, None, words)], silent=True)
        return _PreparedSong(song, doc.language, [(audio_path, segments, words)])

    prepared = _map_songs(cfg, prepare, manifest)
    silent = [p.song.song_id for p in prepared if p.silent]

    transcriber = _Transcriber(cfg, transcribe_fn)
    per_repeat: list[RepeatResult] = []
    for repeat in range(cfg.repeats):

        def work(prep: _PreparedSong) -> SongResult:
            audio_path, segments, ref = prep.windows[0]
            if prep.silent:
                texts: list[str] = []
            else:
                texts = transcriber(audio_path, prep.language, segments, repeat)
            hyp = _hyp_words(texts, prep.language)
            counts = count_edits(align(ref, hyp), ref)
            return SongResult(
                prep.song.song_id, prep.language, counts, compute_rates(counts)
            )

        per_repeat.append(_repeat_result(_map_songs(cfg, work, prepared)))
    return _finalize(cfg, per_repeat, silent=silent)
