"""CLI subcommand tests (segment, samples, run)."""

import json

import pytest

from altkit.cli import main


def test_segment_subcommand(synth_manifest, tmp_path, capsys):
    audio = synth_manifest.parent / "audio" / "alpha.separated_mdx.wav"
    out = tmp_path / "segments.json"
    assert main(["segment", "--audio", str(audio), "--out", str(out)]) == 0
    segments = json.loads(out.read_text())
    assert segments and all(0 <= s["start"] < s["end"] for s in segments)
    assert all(s["end"] - s["start"] <= 30.0 for s in segments)


def test_segment_with_config(synth_manifest, tmp_path):
    audio = synth_manifest.parent / "audio" / "alpha.separated_mdx.wav"
    cfg = tmp_path / "vad.json"
    cfg.write_text(json.dumps({"max_len": 10.0}))
    out = tmp_path / "segments.json"
    main(["segment", "--audio", str(audio), "--config", str(cfg), "--out", str(out)])
    assert all(
        s["end"] - s["start"] <= 10.0 for s in json.loads(out.read_text())
    )


@pytest.mark.parametrize("kind,expected", [("merged", 5), ("group", 3)])
def test_samples_subcommand(synth_manifest, tmp_path, kind, expected):
    lyrics = synth_manifest.parent / "lyrics" / "alpha.json"
    out = tmp_path / f"{kind}.json"
    assert main(["samples", "--lyrics", str(lyrics), "--kind", kind, "--out", str(out)]) == 0
    samples = json.loads(out.read_text())
    assert len(samples) == expected
    assert all(s["kind"] == kind for s in samples)
    assert all(s["text"] for s in samples)


def test_run_subcommand_end_to_end(synth_manifest, echo_adapter_cmd, tmp_path):
    out_dir = tmp_path / "out"
    code = main(
        [
            "run",
            "--manifest", str(synth_manifest),
            "--task", "long",
            "--variant", "mix",
            "--segmenter", "native",
            "--repeats", "1",
            "--adapter", echo_adapter_cmd,
            "--out", str(out_dir),
        ]
    )
    assert code == 0
    results = json.loads((out_dir / "results.json").read_text())
    assert results[0]["averaged"]["wer"] == "0.00"
    assert (out_dir / "long_results.md").is_file()
    assert (out_dir / "language_results.md").is_file()
    assert (out_dir / "per_song.csv").is_file()
