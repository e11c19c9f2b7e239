"""Exception types raised across the toolkit."""

from __future__ import annotations


class AltkitError(Exception):
    """Base class for all toolkit errors."""


# --- tokenization ---


class UnbalancedParentheses(AltkitError):
    """Backing-vocal parentheses in a transcript do not balance."""

    def __init__(self, position: int):
        self.position = position
        super().__init__(f"unbalanced parenthesis at character {position}")


class DanglingAnnotation(AltkitError):
    """A non-lexical annotation points at a word position that does not exist."""

    def __init__(self, position: tuple[int, int]):
        self.position = position
        super().__init__(f"annotation {position} does not resolve to a word token")


# --- alignment / metrics ---


class EmptyReference(AltkitError):
    """Rates are undefined for an empty reference (N = 0)."""


class EmptyInput(AltkitError):
    """An aggregate was requested over an empty collection."""


# --- audio / VAD ---


class IoError(AltkitError):
    """A file could not be read or written."""


class UnsupportedFormat(AltkitError):
    """The audio file is not a PCM/float WAV this toolkit can decode."""


class AudioTooShort(AltkitError):
    """The signal is shorter than one analysis frame."""


class SilentSignal(AltkitError):
    """The signal contains no energy at all; no vocal activity exists."""


class UnsplittableRegion(AltkitError):
    """An over-long active region has no interior cut point outside the edge margins."""


# --- sampling ---


class InfeasiblePartition(AltkitError):
    """A run cannot be partitioned because a single sample already exceeds the limit."""


# --- manifest / pipeline ---


class ManifestError(AltkitError):
    """A dataset manifest failed validation."""


class MissingFile(ManifestError):
    def __init__(self, song_id: str, variant: str, path: str):
        self.song_id = song_id
        self.variant = variant
        self.path = path
        super().__init__(f"song {song_id!r}: {variant} file missing: {path}")


class DuplicateId(ManifestError):
    def __init__(self, song_id: str):
        self.song_id = song_id
        super().__init__(f"duplicate song id {song_id!r}")


class AdapterFailure(AltkitError):
    """The transcriber adapter subprocess exited with a non-zero status."""

    def __init__(self, exit_code: int, stderr: str):
        self.exit_code = exit_code
        self.stderr = stderr
        super().__init__(f"adapter exited with code {exit_code}: {stderr.strip()[:500]}")


class ProtocolError(AltkitError):
    """The adapter produced a response that violates the wire protocol."""
