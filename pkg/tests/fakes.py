"""In-process transcriber fakes mirroring the echo adapter, for fast tests."""

from __future__ import annotations

import json
import re
from pathlib import Path

WINDOW_RE = re.compile(r"^(?P<song>.+)__(?P<variant>[a-z_]+)__(?P<start>\d+)-(?P<end>\d+)$")
EPS = 0.15


class EchoTranscriber:
    """Callable matching the pipeline's TranscribeFn; returns reference text.

    ``mangle`` post-processes the text of every non-empty window, which lets
    tests inject controlled errors.  ``calls`` counts adapter invocations so
    cache behaviour is observable.
    """

    def __init__(self, manifest_path: Path, mangle=None):
        self.root = Path(manifest_path).parent
        self.mangle = mangle
        self.calls = 0
        manifest = json.loads(Path(manifest_path).read_text(encoding="utf-8"))
        self.by_id = {}
        self.by_path = {}
        for entry in manifest["songs"]:
            lines = json.loads(
                (self.root / entry["lyrics_path"]).read_text(encoding="utf-8")
            )["lines"]
            self.by_id[entry["id"]] = lines
            for rel in entry.get("audio", {}).values():
                self.by_path[str((self.root / rel).resolve())] = lines

    def _lines_inside(self, lines, start, end):
        return [
            ln["text"]
            for ln in lines
            if ln["start"] >= start - EPS and ln["end"] <= end + EPS
        ]

    def __call__(self, audio_path, language, segments):
        self.calls += 1
        audio = Path(audio_path)
        lines = self.by_path.get(str(audio.resolve()))
        if lines is not None:
            if segments is None:
                texts = [ln["text"] for ln in lines]
            else:
                texts = [
                    "\n".join(self._lines_inside(lines, seg.start, seg.end))
                    for seg in segments
                ]
        else:
            match = WINDOW_RE.match(audio.stem)
            assert match and match.group("song") in self.by_id, f"unknown audio {audio}"
            lines = self.by_id[match.group("song")]
            w0 = int(match.group("start")) / 1000.0
            w1 = int(match.group("end")) / 1000.0
            spans = (
                [(w0, w1)]
                if segments is None
                else [(w0 + seg.start, w0 + seg.end) for seg in segments]
            )
            texts = ["\n".join(self._lines_inside(lines, a, b)) for a, b in spans]
        if self.mangle is not None:
            texts = [self.mangle(t) if t else t for t in texts]
        return texts


def empty_transcriber(audio_path, language, segments):
    """Adapter that hears nothing: empty hypothesis per requested segment."""
    return [""] * (len(segments) if segments is not None else 1)
