"""Command line interface: ``segment``, ``samples`` and ``run`` subcommands."""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .audio import load_audio
from .errors import AltkitError
from .manifest import AUDIO_VARIANTS, load_lyrics, load_manifest
from .pipeline import RunConfig, RunResult, Segmenter, Task, run_longform, run_shortform
from .report import ReportLayout, emit_report
from .sampling import SampleKind, group_merged, merge_overlapping_lines, samples_to_json
from .vad import VadConfig, rms_vad, segments_to_json


def _cmd_segment(args: argparse.Namespace) -> int:
    cfg = VadConfig.from_json(args.config) if args.config else VadConfig()
    segments = rms_vad(load_audio(args.audio), cfg)
    Path(args.out).write_text(
        json.dumps(segments_to_json(segments), indent=2) + "\n", encoding="utf-8"
    )
    print(f"wrote {len(segments)} segments to {args.out}")
    return 0


def _cmd_samples(args: argparse.Namespace) -> int:
    doc = load_lyrics(args.lyrics)
    samples, excluded = merge_overlapping_lines(list(doc.lines))
    if args.kind == "group":
        samples = group_merged(samples)
    Path(args.out).write_text(
        json.dumps(samples_to_json(samples), indent=2) + "\n", encoding="utf-8"
    )
    print(f"wrote {len(samples)} {args.kind} samples to {args.out} ({excluded} excluded)")
    return 0


def _cmd_run(args: argparse.Namespace) -> int:
    manifest = load_manifest(args.manifest)
    out_dir = Path(args.out)
    out_dir.mkdir(parents=True, exist_ok=True)

    cfg = RunConfig(
        task=Task(args.task),
        audio_variant=args.variant,
        adapter=args.adapter,
        sample_kind=SampleKind(args.kind) if args.kind else None,
        segmenter=Segmenter(args.segmenter) if args.segmenter else None,
        vad_source_variant=args.vad_variant,
        repeats=args.repeats,
        language_forcing=not args.no_language,
        cache_dir=None if args.no_cache else out_dir / "cache",
        workers=args.workers,
    )

    if cfg.task is Task.SHORT_FORM:
        result = run_shortform(manifest, cfg, windows_dir=out_dir / "windows")
        table = ReportLayout.SHORT_TABLE
    else:
        result = run_longform(manifest, cfg)
        table = ReportLayout.LONG_TABLE

    results: list[RunResult] = [result]
    emit_report(results, table, out_dir)
    emit_report(results, ReportLayout.LANGUAGE_TABLE, out_dir)
    emit_report(results, ReportLayout.PER_SONG_CSV, out_dir)
    (out_dir / "results.json").write_text(
        json.dumps([r.to_json() for r in results], indent=2, sort_keys=True) + "\n",
        encoding="utf-8",
    )

    print(f"run {cfg.label}: WER {result.averaged.as_percent_strings()['wer']}%")
    print(f"reports written to {out_dir}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="altkit",
        description="Lyrics transcription evaluation toolkit",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_seg = sub.add_parser("segment", help="segment audio into transcription windows")
    p_seg.add_argument("--audio", required=True, help="input WAV (separated vocals)")
    p_seg.add_argument("--config", help="VAD config JSON (defaults used if omitted)")
    p_seg.add_argument("--out", required=True, help="output segment list JSON")
    p_seg.set_defaults(func=_cmd_segment)

    p_samp = sub.add_parser("samples", help="build short-form samples from timed lyrics")
    p_samp.add_argument("--lyrics", required=True, help="lyrics JSON with line timings")
    p_samp.add_argument("--kind", choices=["merged", "group"], default="merged")
    p_samp.add_argument("--out", required=True, help="output sample list JSON")
    p_samp.set_defaults(func=_cmd_samples)

    p_run = sub.add_parser("run", help="run an evaluation over a dataset manifest")
    p_run.add_argument("--manifest", required=True)
    p_run.add_argument("--task", choices=["short", "long"], required=True)
    p_run.add_argument("--variant", choices=AUDIO_VARIANTS, required=True,
                       help="audio variant to transcribe")
    p_run.add_argument("--kind", choices=["merged", "group"],
                       help="sample kind (short-form)")
    p_run.add_argument("--segmenter", choices=["native", "rms-vad"],
                       help="segmentation algorithm (long-form)")
    p_run.add_argument("--vad-variant", choices=AUDIO_VARIANTS,
                       help="audio variant the RMS-VAD boundaries come from")
    p_run.add_argument("--repeats", type=int, default=5)
    p_run.add_argument("--adapter", required=True,
                       help="adapter command, e.g. 'python -m alt_adapters'")
    p_run.add_argument("--out", required=True, help="output directory")
    p_run.add_argument("--workers", type=int, default=1)
    p_run.add_argument("--no-cache", action="store_true",
                       help="disable the transcript cache")
    p_run.add_argument("--no-language", action="store_true",
                       help="do not forward song language to the adapter")
    p_run.set_defaults(func=_cmd_run)
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (AltkitError, ValueError) as exc:
        print(f"altkit: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
