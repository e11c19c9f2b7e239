"""WAV decoding and the in-memory audio buffer.

Only PCM WAV is supported (16/24/32-bit integer and 32-bit float), which
covers every dataset variant this toolkit consumes.  Multi-channel audio is
downmixed by channel mean; samples are never resampled, so frame and hop
parameters elsewhere are in native samples.
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

import numpy as np
from scipy.io import wavfile

from .errors import IoError, UnsupportedFormat

__all__ = ["AudioBuffer", "load_audio", "save_wav"]

_INT_SCALES = {
    np.dtype(np.int16): 1 << 15,
    np.dtype(np.int32): 1 << 31,
}


@dataclass(frozen=True)
class AudioBuffer:
    """Mono float64 samples in [-1, 1] plus their sample rate."""

    samples: np.ndarray
    sample_rate: int

    def __post_init__(self):
        if self.samples.ndim != 1 or len(self.samples) == 0:
            raise UnsupportedFormat("audio buffer must be non-empty and mono")
        if self.sample_rate <= 0:
            raise UnsupportedFormat(f"bad sample rate {self.sample_rate}")

    @property
    def duration(self) -> float:
        return len(self.samples) / self.sample_rate


def load_audio(path: str | Path) -> AudioBuffer:
    """Decode a WAV file to a mono float buffer.

    24-bit PCM arrives from scipy widened to int32, so the int32 scale
    covers it.  Raises :class:`IoError` for unreadable files and
    :class:`UnsupportedFormat` for anything that is not int16/int24/int32
    or float32 PCM.
    """
    path = Path(path)
    try:
        rate, data = wavfile.read(path)
    except FileNotFoundError as exc:
        raise IoError(f"audio file not found: {path}") from exc
    except OSError as exc:
        raise IoError(f"cannot read audio file {path}: {exc}") from exc
    except ValueError as exc:
        raise UnsupportedFormat(f"{path}: {exc}") from exc

    if data.dtype in _INT_SCALES:
        samples = data.astype(np.float64) / _INT_SCALES[data.dtype]
    elif data.dtype in (np.float32, np.float64):
        samples = data.astype(np.float64)
    else:
        raise UnsupportedFormat(f"{path}: unsupported sample format {data.dtype}")

    if samples.ndim == 2:
        samples = samples.mean(axis=1)
    elif samples.ndim != 1:
        raise UnsupportedFormat(f"{path}: unexpected array shape {samples.shape}")
    if len(samples) == 0:
        raise UnsupportedFormat(f"{path}: file contains no samples")
    if not np.all(np.isfinite(samples)):
        raise UnsupportedFormat(f"{path}: non-finite samples")
    return AudioBuffer(samples, int(rate))


def save_wav(
    path: str | Path, samples: np.ndarray, sample_rate: int, subtype: str = "float32"
) -> None:
    """Write a mono WAV file (``subtype`` is ``float32`` or ``int16``)."""
    path = Path(path)
    if subtype == "float32":
        data = samples.astype(np.float32)
    elif subtype == "int16":
        data = np.clip(np.round(samples * 32767.0), -32768, 32767).astype(np.int16)
    else:
        raise ValueError(f"unsupported subtype {subtype!r}")
    try:
        wavfile.write(path, sample_rate, data)
    except OSError as exc:
        raise IoError(f"cannot write audio file {path}: {exc}") from exc
