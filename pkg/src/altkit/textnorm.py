"""Lyric-specific tokenization and normalization.

Raw transcripts become flat token streams in which every token knows its
surface form, a punctuation-stripped casefolded comparison form (``norm``),
the line it came from, and whether it is a word at all.  Backing vocals are
recognized purely from parenthesis nesting; non-lexical vocables (ooh, la)
are flagged from external annotations because they are not recognizable
from the text itself.

Normalization rules, pinned so fixtures stay stable:

* the whole text is Unicode NFC-normalized before scanning;
* word characters are the Unicode letter/mark/number categories (``L*``,
  ``M*``, ``N*``); everything else is punctuation or separator;
* apostrophes (``'``, U+2019, U+02BC) and the hyphen-minus join word
  characters when strictly between them, so ``don't`` and ``twenty-one``
  stay single words;
* ``norm`` is the casefolded surface with U+2019/U+02BC mapped to ``'``;
* line breaks become non-word separator tokens so line indices survive
  concatenation.
"""

from __future__ import annotations

import unicodedata
from dataclasses import dataclass, field, replace
from functools import lru_cache

from .errors import DanglingAnnotation, UnbalancedParentheses

__all__ = [
    "RawTranscript",
    "Token",
    "NonLexicalAnnotation",
    "tokenize_lyrics",
    "strip_nonwords",
    "apply_nonlexical_annotations",
]

_APOSTROPHES = {"'", "’", "ʼ"}
_CONNECTORS = _APOSTROPHES | {"-"}


@dataclass(frozen=True)
class RawTranscript:
    """A transcript (full song or single line) plus its language code."""

    text: str
    language: str = "und"


@dataclass(frozen=True)
class Token:
    surface: str
    norm: str
    is_word: bool
    is_backing: bool = False
    is_nonlexical: bool = False
    line_index: int = 0

    def __post_init__(self):
        if self.is_word and not self.norm:
            raise ValueError(f"word token {self.surface!r} has empty norm")
        if (self.is_backing or self.is_nonlexical) and not self.is_word:
            raise ValueError(f"non-word token {self.surface!r} cannot carry word flags")


@dataclass(frozen=True)
class NonLexicalAnnotation:
    """Word positions (line_index, word_index) flagged as non-lexical vocables."""

    song_id: str
    word_positions: tuple[tuple[int, int], ...] = field(default_factory=tuple)


@lru_cache(maxsize=4096)
def _is_word_char(ch: str) -> bool:
    return unicodedata.category(ch)[0] in ("L", "M", "N")


def _normalize_word(surface: str) -> str:
    norm = surface.casefold()
    for ch in _APOSTROPHES:
        if ch in norm:
            norm = norm.replace(ch, "'")
    return norm


def _check_parentheses(text: str) -> None:
    stack: list[int] = []
    for i, ch in enumerate(text):
        if ch == "(":
            stack.append(i)
        elif ch == ")":
            if not stack:
                raise UnbalancedParentheses(i)
            stack.pop()
    if stack:
        raise UnbalancedParentheses(stack[0])


def tokenize_lyrics(raw: RawTranscript | str) -> list[Token]:
    """Scan a transcript into tokens in text order.

    Word tokens inside parentheses are flagged as backing vocals; the
    parenthesis characters themselves, punctuation runs, and line breaks
    become non-word tokens.  Raises :class:`UnbalancedParentheses` if the
    parentheses do not balance.
    """
    text = raw.text if isinstance(raw, RawTranscript) else raw
    text = unicodedata.normalize("NFC", text)
    _check_parentheses(text)

    tokens: list[Token] = []
    line = 0
    depth = 0
    i = 0
    n = len(text)
    while i < n:
        ch = text[i]
        if ch == "\n":
            tokens.append(Token("\n", "", False, line_index=line))
            line += 1
            i += 1
        elif ch.isspace():
            i += 1
        elif ch == "(":
            depth += 1
            tokens.append(Token("(", "", False, line_index=line))
            i += 1
        elif ch == ")":
            depth -= 1
            tokens.append(Token(")", "", False, line_index=line))
            i += 1
        elif _is_word_char(ch):
            j = i + 1
            while j < n:
                if _is_word_char(text[j]):
                    j += 1
                elif text[j] in _CONNECTORS and j + 1 < n and _is_word_char(text[j + 1]):
                    j += 1
                else:
                    break
            surface = text[i:j]
            tokens.append(
                Token(
                    surface,
                    _normalize_word(surface),
                    True,
                    is_backing=depth > 0,
                    line_index=line,
                )
            )
            i = j
        else:
            # punctuation/symbol run; stops at whitespace, parens and word chars
            j = i + 1
            while (
                j < n
                and not text[j].isspace()
                and text[j] not in "()"
                and not _is_word_char(text[j])
            ):
                j += 1
            tokens.append(Token(text[i:j], "", False, line_index=line))
            i = j
    return tokens


def strip_nonwords(tokens: list[Token]) -> list[Token]:
    """Keep only word tokens, preserving order and flags."""
    return [t for t in tokens if t.is_word]


def apply_nonlexical_annotations(
    tokens: list[Token], ann: NonLexicalAnnotation
) -> list[Token]:
    """Return a copy of the stream with is_nonlexical set at annotated positions.

    Positions are (line_index, word_index) where word_index counts word
    tokens within the line.  Raises :class:`DanglingAnnotation` for any
    position that does not resolve.
    """
    words_by_line: dict[int, list[int]] = {}
    for idx, tok in enumerate(tokens):
        if tok.is_word:
            words_by_line.setdefault(tok.line_index, []).append(idx)

    out = list(tokens)
    for line_idx, word_idx in ann.word_positions:
        line_words = words_by_line.get(line_idx)
        if line_words is None or not 0 <= word_idx < len(line_words):
            raise DanglingAnnotation((line_idx, word_idx))
        pos = line_words[word_idx]
        out[pos] = replace(out[pos], is_nonlexical=True)
    return out
