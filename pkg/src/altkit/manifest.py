"""Dataset manifest and per-song lyrics file loading.

A manifest lists songs with their language, a lyrics file, and one path per
audio variant.  Relative paths are resolved against the manifest's own
directory so datasets stay relocatable.

Lyrics file schema (JSON)::

    {
      "lines": [{"start": 1.25, "end": 3.5, "text": "..."}, ...],
      "nonlexical": [[line_idx, word_idx], ...],
      "language": "en"
    }

Times are seconds with millisecond precision.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path

from .errors import DuplicateId, ManifestError, MissingFile
from .sampling import Line
from .textnorm import NonLexicalAnnotation

__all__ = ["AUDIO_VARIANTS", "LyricsDoc", "SongEntry", "DatasetManifest", "load_manifest", "load_lyrics"]

AUDIO_VARIANTS = ("mix", "separated_mdx", "separated_mdx_extra", "stem")


@dataclass(frozen=True)
class LyricsDoc:
    lines: tuple[Line, ...]
    annotation: NonLexicalAnnotation
    language: str

    @property
    def text(self) -> str:
        return "\n".join(line.text for line in self.lines)


@dataclass(frozen=True)
class SongEntry:
    song_id: str
    language: str
    lyrics_path: Path
    audio: dict[str, Path] = field(default_factory=dict)


@dataclass(frozen=True)
class DatasetManifest:
    songs: tuple[SongEntry, ...]

    def __iter__(self):
        return iter(self.songs)

    def __len__(self):
        return len(self.songs)


def load_lyrics(path: str | Path, song_id: str | None = None) -> LyricsDoc:
    path = Path(path)
    with open(path, encoding="utf-8") as fh:
        data = json.load(fh)
    lines = tuple(
        Line(float(d["start"]), float(d["end"]), str(d["text"])) for d in data["lines"]
    )
    positions = tuple(
        (int(p[0]), int(p[1])) for p in data.get("nonlexical", [])
    )
    return LyricsDoc(
        lines=lines,
        annotation=NonLexicalAnnotation(song_id or path.stem, positions),
        language=str(data.get("language", "und")),
    )


def load_manifest(path: str | Path) -> DatasetManifest:
    """Load and validate a dataset manifest.

    Raises :class:`DuplicateId` for repeated song ids, :class:`MissingFile`
    for any referenced path that does not exist, and :class:`ManifestError`
    for unknown audio variants.
    """
    path = Path(path)
    base = path.parent
    with open(path, encoding="utf-8") as fh:
        data = json.load(fh)

    songs: list[SongEntry] = []
    seen: set[str] = set()
    for entry in data["songs"]:
        song_id = str(entry["id"])
        if song_id in seen:
            raise DuplicateId(song_id)
        seen.add(song_id)

        lyrics_path = base / entry["lyrics_path"]
        if not lyrics_path.is_file():
            raise MissingFile(song_id, "lyrics", str(lyrics_path))

        audio: dict[str, Path] = {}
        for variant, rel in entry.get("audio", {}).items():
            if variant not in AUDIO_VARIANTS:
                raise ManifestError(
                    f"song {song_id!r}: unknown audio variant {variant!r} "
                    f"(expected one of {', '.join(AUDIO_VARIANTS)})"
                )
            audio_path = base / rel
            if not audio_path.is_file():
                raise MissingFile(song_id, variant, str(audio_path))
            audio[variant] = audio_path

        songs.append(
            SongEntry(
                song_id=song_id,
                language=str(entry.get("language", "und")),
                lyrics_path=lyrics_path,
                audio=audio,
            )
        )
    return DatasetManifest(tuple(songs))
