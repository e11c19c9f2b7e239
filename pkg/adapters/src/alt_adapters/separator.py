"""Hybrid Demucs source-separation backend (pretrained ``mdx`` / ``mdx_extra``).

Writes the vocal estimate as a WAV with the model's native sample rate and
the input's duration.  Imported lazily; install with the ``demucs`` extra
for real separation.
"""

from __future__ import annotations

from pathlib import Path


class DemucsSeparator:
    def __init__(self, device: str | None = None):
        try:
            from demucs import api as demucs_api
        except ImportError as exc:  # pragma: no cover - requires the extra
            raise RuntimeError(
                "demucs is not installed; install alt-adapters[demucs]"
            ) from exc
        self._api = demucs_api
        self._device = device
        self._separators: dict[str, object] = {}

    def _separator(self, model: str):
        if model not in self._separators:
            kwargs = {"model": model}
            if self._device is not None:
                kwargs["device"] = self._device
            self._separators[model] = self._api.Separator(**kwargs)
        return self._separators[model]

    def separate(self, audio: str, model: str, out: str) -> Path:
        separator = self._separator(model)
        _origin, stems = separator.separate_audio_file(audio)
        out_path = Path(out)
        out_path.parent.mkdir(parents=True, exist_ok=True)
        self._api.save_audio(stems["vocals"], str(out_path), samplerate=separator.samplerate)
        return out_path
