"""Result tables and per-song CSV emission.

Markdown tables carry the full metric column set (WER, SR, DR, IR, IR10,
DR_NL, DR_BV) as two-decimal percentages.  The per-song CSV holds one row
per song per repeat per run with raw edit counts alongside the rates, which
is what external box-plot or significance tooling consumes.
"""

from __future__ import annotations

import csv
from enum import Enum
from pathlib import Path
from typing import Sequence

from .errors import IoError
from .pipeline import RunResult, Task

__all__ = ["ReportLayout", "emit_report", "VARIANT_LABELS"]

METRIC_COLUMNS = ("wer", "sr", "dr", "ir", "ir10", "dr_nl", "dr_bv")
METRIC_HEADERS = ("WER", "SR", "DR", "IR", "IR10", "DR_NL", "DR_BV")

VARIANT_LABELS = {
    "mix": "Original Mix",
    "separated_mdx": "Separated (mdx)",
    "separated_mdx_extra": "Separated (mdx_extra)",
    "stem": "Vocal Stem",
}
KIND_LABELS = {"merged": "Merged Line", "group": "Group"}
SEGMENTER_LABELS = {"native": "Native", "rms-vad": "RMS-VAD"}


class ReportLayout(str, Enum):
    SHORT_TABLE = "short-table"
    LONG_TABLE = "long-table"
    LANGUAGE_TABLE = "language-table"
    PER_SONG_CSV = "per-song-csv"


def _detail_label(result: RunResult) -> str:
    if result.config.task is Task.SHORT_FORM:
        return KIND_LABELS.get(result.config.detail, result.config.detail)
    return SEGMENTER_LABELS.get(result.config.detail, result.config.detail)


def _variant_label(result: RunResult) -> str:
    return VARIANT_LABELS.get(result.config.audio_variant, result.config.audio_variant)


def _markdown_table(header: Sequence[str], rows: Sequence[Sequence[str]]) -> str:
    lines = [
        "| " + " | ".join(header) + " |",
        "|" + "|".join("---" for _ in header) + "|",
    ]
    for row in rows:
        lines.append("| " + " | ".join(row) + " |")
    return "\n".join(lines) + "\n"


def _metrics_row(result: RunResult) -> list[str]:
    percents = result.averaged.as_percent_strings()
    return [percents[c] for c in METRIC_COLUMNS]


def _short_table(results: Sequence[RunResult]) -> str:
    rows = [
        [_detail_label(r), _variant_label(r), *_metrics_row(r)]
        for r in results
        if r.config.task is Task.SHORT_FORM
    ]
    return _markdown_table(("Type", "Audio", *METRIC_HEADERS), rows)


def _long_table(results: Sequence[RunResult]) -> str:
    rows = [
        [_variant_label(r), _detail_label(r), *_metrics_row(r)]
        for r in results
        if r.config.task is Task.LONG_FORM
    ]
    return _markdown_table(("Audio", "Algorithm", *METRIC_HEADERS), rows)


def _language_table(results: Sequence[RunResult]) -> str:
    languages = sorted({lang for r in results for lang in r.by_language_averaged})
    rows = []
    for r in results:
        row = [_variant_label(r), _detail_label(r)]
        for lang in languages:
            report = r.by_language_averaged.get(lang)
            row.append("-" if report is None else report.as_percent_strings()["wer"])
        rows.append(row)
    header = ("Audio", "Algorithm", *(lang.upper() for lang in languages))
    return _markdown_table(header, rows)


def _per_song_csv(results: Sequence[RunResult], path: Path) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(
            [
                "run",
                "song_id",
                "language",
                "repeat",
                "n_ref",
                "hits",
                "subs",
                "dels",
                "ins",
                "ins10",
                "dels_nonlexical",
                "dels_backing",
                *METRIC_COLUMNS,
            ]
        )
        for result in results:
            for repeat_idx, repeat in enumerate(result.repeats):
                for song in repeat.songs:
                    c = song.counts
                    rates = [
                        f"{float(getattr(song.report, m)) * 100:.4f}"
                        for m in METRIC_COLUMNS
                    ]
                    writer.writerow(
                        [
                            result.config.label,
                            song.song_id,
                            song.language,
                            repeat_idx,
                            c.n_ref,
                            c.hits,
                            c.subs,
                            c.dels,
                            c.ins,
                            c.ins10,
                            c.dels_nonlexical,
                            c.dels_backing,
                            *rates,
                        ]
                    )


_LAYOUT_FILES = {
    ReportLayout.SHORT_TABLE: "short_results.md",
    ReportLayout.LONG_TABLE: "long_results.md",
    ReportLayout.LANGUAGE_TABLE: "language_results.md",
    ReportLayout.PER_SONG_CSV: "per_song.csv",
}


def emit_report(
    results: Sequence[RunResult], layout: ReportLayout, out_dir: str | Path
) -> Path:
    """Write one report file for the given layout; returns its path."""
    out_dir = Path(out_dir)
    try:
        out_dir.mkdir(parents=True, exist_ok=True)
        path = out_dir / _LAYOUT_FILES[layout]
        if layout is ReportLayout.PER_SONG_CSV:
            _per_song_csv(results, path)
        elif layout is ReportLayout.SHORT_TABLE:
            path.write_text(_short_table(results), encoding="utf-8")
        elif layout is ReportLayout.LONG_TABLE:
            path.write_text(_long_table(results), encoding="utf-8")
        else:
            path.write_text(_language_table(results), encoding="utf-8")
        return path
    except OSError as exc:
        raise IoError(f"cannot write report: {exc}") from exc
