"""Evaluation toolkit for short- and long-form automatic lyrics transcription."""

from .align import (
    Alignment,
    EditCounts,
    EditOp,
    MetricsReport,
    OpKind,
    aggregate,
    align,
    compute_rates,
    count_edits,
    transfer_line_timings,
)
from .audio import AudioBuffer, load_audio
from .sampling import Line, Sample, SampleKind, group_lines, merge_overlapping_lines
from .textnorm import (
    NonLexicalAnnotation,
    RawTranscript,
    Token,
    apply_nonlexical_annotations,
    strip_nonwords,
    tokenize_lyrics,
)
from .vad import Segment, VadConfig, rms_vad

__version__ = "0.1.0"

__all__ = [
    "Alignment",
    "AudioBuffer",
    "EditCounts",
    "EditOp",
    "Line",
    "MetricsReport",
    "NonLexicalAnnotation",
    "OpKind",
    "RawTranscript",
    "Sample",
    "SampleKind",
    "Segment",
    "Token",
    "VadConfig",
    "aggregate",
    "align",
    "apply_nonlexical_annotations",
    "compute_rates",
    "count_edits",
    "group_lines",
    "load_audio",
    "merge_overlapping_lines",
    "rms_vad",
    "strip_nonwords",
    "tokenize_lyrics",
    "transfer_line_timings",
]
