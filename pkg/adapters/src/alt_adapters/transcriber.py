"""Whisper transcription backend (faster-whisper, model large-v2).

Decoding uses beam size 5 and never conditions a segment on the previous
segment's text, which keeps batched decoding of explicit segment lists
possible.  When a language is given it is forced on the decoder; otherwise
the model detects one.  All other decoder options stay at faster-whisper's
defaults (see README).

The heavy dependency is imported lazily so protocol handling and tests work
without it; install with the ``whisper`` extra for real inference.
"""

from __future__ import annotations

BEAM_SIZE = 5
DEFAULT_MODEL = "large-v2"


class WhisperTranscriber:
    def __init__(self, model_name: str = DEFAULT_MODEL, device: str = "auto"):
        try:
            from faster_whisper import WhisperModel
        except ImportError as exc:  # pragma: no cover - requires the extra
            raise RuntimeError(
                "faster-whisper is not installed; install alt-adapters[whisper]"
            ) from exc
        self._model = WhisperModel(model_name, device=device)

    def _decode(self, audio: str, language: str | None, condition: bool, clip=None):
        kwargs = dict(
            beam_size=BEAM_SIZE,
            language=language,
            condition_on_previous_text=condition,
        )
        if clip is not None:
            kwargs["clip_timestamps"] = clip
        segments, _info = self._model.transcribe(audio, **kwargs)
        return [seg.text.strip() for seg in segments]

    def transcribe(
        self,
        audio: str,
        language: str | None,
        segments: list[tuple[float, float]] | None,
        condition_on_previous: bool = False,
    ) -> list[str]:
        if segments is None:
            # native long-form: the model walks the file with its own
            # predicted-timestamp windows
            return self._decode(audio, language, condition_on_previous)
        texts = []
        for start, end in segments:
            pieces = self._decode(audio, language, False, clip=f"{start},{end}")
            texts.append(" ".join(pieces).strip())
        return texts
