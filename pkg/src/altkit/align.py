"""Word-level alignment and error-rate metrics.

The alignment between a reference and a hypothesis token stream is the
minimal unit-cost edit script (Levenshtein).  Ties between equal-cost paths
are broken deterministically during the backtrace from the end: Hit, then
Deletion, then Substitution, then Insertion.  All rates are kept as exact
fractions so that WER == SR + DR + IR holds identically and aggregation is
bit-reproducible.

Two interchangeable kernels compute the edit script: a compiled extension
(``altkit._align_core``) and a pure-Python twin selected at import time when
the extension is unavailable or ``ALTKIT_PURE=1`` is set.
"""

from __future__ import annotations

import os
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from typing import Sequence

from . import _align_py
from .errors import EmptyInput, EmptyReference
from .textnorm import Token, strip_nonwords, tokenize_lyrics

if os.environ.get("ALTKIT_PURE") == "1":
    _kernel = _align_py
else:
    try:
        from . import _align_core as _kernel  # type: ignore[no-redef]
    except ImportError:
        _kernel = _align_py

USING_COMPILED_KERNEL = _kernel is not _align_py

__all__ = [
    "OpKind",
    "EditOp",
    "Alignment",
    "EditCounts",
    "MetricsReport",
    "TimedWord",
    "TimedLine",
    "align",
    "count_edits",
    "compute_rates",
    "aggregate",
    "transfer_line_timings",
    "format_alignment",
    "USING_COMPILED_KERNEL",
]

# Insertion runs of at least this length count toward the hallucination proxy.
HALLUCINATION_RUN_LENGTH = 10


class OpKind(Enum):
    HIT = "HIT"
    SUB = "SUB"
    DEL = "DEL"
    INS = "INS"


@dataclass(frozen=True)
class EditOp:
    kind: OpKind
    ref_index: int | None
    hyp_index: int | None


@dataclass(frozen=True)
class Alignment:
    ops: tuple[EditOp, ...]

    @property
    def cost(self) -> int:
        return sum(1 for op in self.ops if op.kind is not OpKind.HIT)


@dataclass(frozen=True)
class EditCounts:
    """Edit-operation tallies for one aligned pair (or a sum of many)."""

    hits: int = 0
    subs: int = 0
    dels: int = 0
    ins: int = 0
    ins10: int = 0
    dels_nonlexical: int = 0
    dels_backing: int = 0

    def __post_init__(self):
        if min(self.hits, self.subs, self.dels, self.ins) < 0:
            raise ValueError("negative edit count")
        if self.ins10 > self.ins:
            raise ValueError("ins10 cannot exceed ins")
        if self.dels_nonlexical > self.dels or self.dels_backing > self.dels:
            raise ValueError("typed deletion counts cannot exceed dels")

    @property
    def n_ref(self) -> int:
        return self.hits + self.subs + self.dels


@dataclass(frozen=True)
class MetricsReport:
    """Error rates as exact fractions of the reference length."""

    wer: Fraction
    sr: Fraction
    dr: Fraction
    ir: Fraction
    ir10: Fraction
    dr_nl: Fraction
    dr_bv: Fraction

    def as_percent_strings(self) -> dict[str, str]:
        """Render every rate as a percentage with two decimals."""
        return {
            name: f"{float(getattr(self, name)) * 100:.2f}"
            for name in ("wer", "sr", "dr", "ir", "ir10", "dr_nl", "dr_bv")
        }


@dataclass(frozen=True)
class TimedWord:
    """A word with known start/end times, e.g. from a word-timed transcript."""

    text: str
    start: float
    end: float


@dataclass(frozen=True)
class TimedLine:
    """A line with timings transferred from a word-timed transcript."""

    text: str
    start: float | None
    end: float | None
    ambiguous: bool = False


def align(ref: Sequence[Token], hyp: Sequence[Token]) -> Alignment:
    """Align two word-token streams at minimal edit cost.

    Both streams must contain word tokens only (see
    :func:`altkit.textnorm.strip_nonwords`).  Empty streams are fine.
    """
    for stream, name in ((ref, "ref"), (hyp, "hyp")):
        if any(not t.is_word for t in stream):
            raise ValueError(f"{name} stream contains non-word tokens")

    ids: dict[str, int] = {}
    ref_ids = [ids.setdefault(t.norm, len(ids)) for t in ref]
    hyp_ids = [ids.setdefault(t.norm, len(ids)) for t in hyp]
    codes = _kernel.align_ids(ref_ids, hyp_ids)

    ops: list[EditOp] = []
    i = j = 0
    for code in codes:
        if code == _align_py.OP_HIT:
            ops.append(EditOp(OpKind.HIT, i, j))
            i += 1
            j += 1
        elif code == _align_py.OP_SUB:
            ops.append(EditOp(OpKind.SUB, i, j))
            i += 1
            j += 1
        elif code == _align_py.OP_DEL:
            ops.append(EditOp(OpKind.DEL, i, None))
            i += 1
        else:
            ops.append(EditOp(OpKind.INS, None, j))
            j += 1
    return Alignment(tuple(ops))


def count_edits(a: Alignment, ref: Sequence[Token]) -> EditCounts:
    """Tally an alignment against the reference it was computed from.

    ``ins10`` counts insertions inside maximal runs of consecutive
    insertion ops of length >= 10; ``dels_nonlexical`` / ``dels_backing``
    count deletions whose reference word carries the respective flag (one
    deletion may count toward both).
    """
    hits = subs = dels = ins = ins10 = d_nl = d_bv = 0
    run = 0
    for op in a.ops:
        if op.kind is OpKind.INS:
            run += 1
            ins += 1
            continue
        if run >= HALLUCINATION_RUN_LENGTH:
            ins10 += run
        run = 0
        if op.kind is OpKind.HIT:
            hits += 1
        elif op.kind is OpKind.SUB:
            subs += 1
        else:
            dels += 1
            tok = ref[op.ref_index]
            if tok.is_nonlexical:
                d_nl += 1
            if tok.is_backing:
                d_bv += 1
    if run >= HALLUCINATION_RUN_LENGTH:
        ins10 += run
    return EditCounts(hits, subs, dels, ins, ins10, d_nl, d_bv)


def compute_rates(c: EditCounts) -> MetricsReport:
    """Turn edit counts into exact rates over the reference length."""
    n = c.n_ref
    if n == 0:
        raise EmptyReference("reference contains no words; rates are undefined")
    return MetricsReport(
        wer=Fraction(c.subs + c.dels + c.ins, n),
        sr=Fraction(c.subs, n),
        dr=Fraction(c.dels, n),
        ir=Fraction(c.ins, n),
        ir10=Fraction(c.ins10, n),
        dr_nl=Fraction(c.dels_nonlexical, n),
        dr_bv=Fraction(c.dels_backing, n),
    )


def aggregate(counts: Sequence[EditCounts]) -> EditCounts:
    """Componentwise sum, used to pool songs or samples before rating."""
    if not counts:
        raise EmptyInput("nothing to aggregate")
    return EditCounts(
        hits=sum(c.hits for c in counts),
        subs=sum(c.subs for c in counts),
        dels=sum(c.dels for c in counts),
        ins=sum(c.ins for c in counts),
        ins10=sum(c.ins10 for c in counts),
        dels_nonlexical=sum(c.dels_nonlexical for c in counts),
        dels_backing=sum(c.dels_backing for c in counts),
    )


def transfer_line_timings(
    timed: Sequence[TimedWord], target_lines: Sequence[str]
) -> list[TimedLine]:
    """Derive line timings for an untimed transcript from a word-timed one.

    The two transcripts are word-aligned; each target line spans from the
    earliest to the latest timed word aligned into it.  Lines with no
    aligned timed word at all (every word a deletion) are returned with
    null timings and flagged ambiguous for manual revision.
    """
    ref_words = strip_nonwords(tokenize_lyrics("\n".join(target_lines)))

    hyp_words: list[Token] = []
    hyp_times: list[tuple[float, float]] = []
    for word in timed:
        for tok in strip_nonwords(tokenize_lyrics(word.text)):
            hyp_words.append(tok)
            hyp_times.append((word.start, word.end))

    spans: dict[int, tuple[float, float]] = {}
    for op in align(ref_words, hyp_words).ops:
        if op.kind in (OpKind.HIT, OpKind.SUB):
            line = ref_words[op.ref_index].line_index
            start, end = hyp_times[op.hyp_index]
            if line in spans:
                cur = spans[line]
                spans[line] = (min(cur[0], start), max(cur[1], end))
            else:
                spans[line] = (start, end)

    out: list[TimedLine] = []
    for idx, text in enumerate(target_lines):
        if idx in spans:
            start, end = spans[idx]
            out.append(TimedLine(text, start, end))
        else:
            out.append(TimedLine(text, None, None, ambiguous=True))
    return out


def format_alignment(
    a: Alignment, ref: Sequence[Token], hyp: Sequence[Token]
) -> str:
    """Render an alignment for debugging, one op per line.

    Format: ``HIT|SUB|DEL|INS <ref_idx|-> <hyp_idx|-> <ref_word|-> <hyp_word|->``.
    """
    lines = []
    for op in a.ops:
        ri = "-" if op.ref_index is None else str(op.ref_index)
        hi = "-" if op.hyp_index is None else str(op.hyp_index)
        rw = "-" if op.ref_index is None else ref[op.ref_index].norm
        hw = "-" if op.hyp_index is None else hyp[op.hyp_index].norm
        lines.append(f"{op.kind.value} {ri} {hi} {rw} {hw}")
    return "\n".join(lines)
