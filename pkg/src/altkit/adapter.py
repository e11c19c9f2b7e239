"""Client side of the transcriber/separator adapter wire protocol.

An adapter is any executable that reads one JSON request document on stdin
and writes one JSON response document on stdout.  Transcription requests
carry an audio path, an optional language, and optionally the segment list
to decode; the response carries one text per segment (or the adapter's own
segmentation in native long-form mode).  The adapter command comes from
configuration only; nothing is picked up from the environment.
"""

from __future__ import annotations

import json
import shlex
import subprocess
from pathlib import Path
from typing import Sequence

from .errors import AdapterFailure, ProtocolError
from .vad import Segment, segments_to_json

__all__ = ["transcribe", "separate"]


def _run_adapter(adapter: str | Sequence[str], request: dict) -> dict:
    argv = shlex.split(adapter) if isinstance(adapter, str) else list(adapter)
    proc = subprocess.run(
        argv,
        input=json.dumps(request).encode("utf-8"),
        stdout=subprocess.PIPE,
        stderr=subprocess.PIPE,
    )
    if proc.returncode != 0:
        raise AdapterFailure(proc.returncode, proc.stderr.decode("utf-8", "replace"))
    try:
        response = json.loads(proc.stdout.decode("utf-8"))
    except (UnicodeDecodeError, json.JSONDecodeError) as exc:
        raise ProtocolError(f"adapter wrote malformed JSON on stdout: {exc}") from exc
    if not isinstance(response, dict):
        raise ProtocolError(f"adapter response is not an object: {response!r}")
    return response


def transcribe(
    adapter: str | Sequence[str],
    audio_path: str | Path,
    language: str | None = None,
    segments: Sequence[Segment] | None = None,
    condition_on_previous: bool = False,
) -> list[str]:
    """Request a transcription and return one hypothesis string per segment.

    With ``segments`` given, the response must contain exactly one text per
    segment (the adapter may batch internally).  Without segments the
    adapter runs its own native long-form segmentation and returns however
    many texts it produced.  Empty strings are valid hypotheses.
    """
    request: dict = {
        "op": "transcribe",
        "audio": str(audio_path),
        "condition_on_previous": condition_on_previous,
    }
    if language is not None:
        request["language"] = language
    if segments is not None:
        request["segments"] = segments_to_json(list(segments))

    response = _run_adapter(adapter, request)
    texts = response.get("texts")
    if not isinstance(texts, list) or not all(isinstance(t, str) for t in texts):
        raise ProtocolError(f"adapter response has no 'texts' list: {response!r}")
    if segments is not None and len(texts) != len(segments):
        raise ProtocolError(
            f"adapter returned {len(texts)} texts for {len(segments)} segments"
        )
    return texts


def separate(
    adapter: str | Sequence[str],
    audio_path: str | Path,
    model: str,
    out_path: str | Path,
) -> Path:
    """Request source separation; returns the path of the written vocal WAV."""
    response = _run_adapter(
        adapter,
        {
            "op": "separate",
            "audio": str(audio_path),
            "model": model,
            "out": str(out_path),
        },
    )
    vocals = response.get("vocals")
    if not isinstance(vocals, str):
        raise ProtocolError(f"adapter response has no 'vocals' path: {response!r}")
    return Path(vocals)
