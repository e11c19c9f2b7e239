"""Short-form sample construction from timed lyric lines.

Lines that overlap in time cannot be transcribed independently, so
transitively overlapping lines are merged into single samples ("merged
lines").  A second pass builds longer samples ("groups") by splitting the
merged lines on silences of more than ``gap`` seconds and then partitioning
each run into consecutive subgroups so that every subgroup spans less than
``max_len`` seconds and the minimum subgroup span is as large as possible.

Ties in the partition are broken toward fewer subgroups, then toward the
lexicographically earliest split points, so results are deterministic.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import Sequence

from .errors import InfeasiblePartition

__all__ = [
    "Line",
    "Sample",
    "SampleKind",
    "merge_overlapping_lines",
    "split_on_gaps",
    "partition_run",
    "group_merged",
    "group_lines",
    "OVERLAP_THRESHOLD",
    "GROUP_GAP",
    "MAX_SAMPLE_LEN",
]

OVERLAP_THRESHOLD = 0.2
GROUP_GAP = 7.0
MAX_SAMPLE_LEN = 30.0


@dataclass(frozen=True)
class Line:
    start: float
    end: float
    text: str

    def __post_init__(self):
        if not self.start < self.end:
            raise ValueError(f"line must have start < end, got [{self.start}, {self.end}]")


class SampleKind(str, Enum):
    MERGED_LINE = "merged"
    GROUP = "group"


@dataclass(frozen=True)
class Sample:
    start: float
    end: float
    text: str
    kind: SampleKind
    source_lines: tuple[int, ...]

    def __post_init__(self):
        if not self.start < self.end:
            raise ValueError(f"sample must have start < end, got [{self.start}, {self.end}]")

    @property
    def duration(self) -> float:
        return self.end - self.start


def _overlap(a: Line, b: Line) -> float:
    return max(0.0, min(a.end, b.end) - max(a.start, b.start))


def merge_overlapping_lines(
    lines: Sequence[Line],
    overlap_thresh: float = OVERLAP_THRESHOLD,
    max_len: float = MAX_SAMPLE_LEN,
) -> tuple[list[Sample], int]:
    """Merge transitively overlapping lines into samples.

    Two lines are linked when their temporal overlap strictly exceeds
    ``overlap_thresh``; connected components become one sample spanning the
    earliest start to the latest end, with texts concatenated in original
    line order.  Samples longer than ``max_len`` are dropped; the count of
    dropped samples is returned alongside the kept ones.
    """
    n = len(lines)
    if n == 0:
        return [], 0

    parent = list(range(n))

    def find(a: int) -> int:
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    order = sorted(range(n), key=lambda i: (lines[i].start, lines[i].end, i))
    for pos, i in enumerate(order):
        for j in order[pos + 1 :]:
            if lines[j].start >= lines[i].end - overlap_thresh:
                break
            if _overlap(lines[i], lines[j]) > overlap_thresh:
                parent[find(i)] = find(j)

    components: dict[int, list[int]] = {}
    for i in range(n):
        components.setdefault(find(i), []).append(i)

    samples: list[Sample] = []
    excluded = 0
    for members in components.values():
        members.sort()
        start = min(lines[i].start for i in members)
        end = max(lines[i].end for i in members)
        if end - start > max_len:
            excluded += 1
            continue
        samples.append(
            Sample(
                start,
                end,
                "\n".join(lines[i].text for i in members),
                SampleKind.MERGED_LINE,
                tuple(members),
            )
        )
    samples.sort(key=lambda s: (s.start, s.end))
    return samples, excluded


def split_on_gaps(samples: Sequence[Sample], gap: float = GROUP_GAP) -> list[list[Sample]]:
    """Split a sorted sample sequence into runs on silences longer than ``gap``."""
    runs: list[list[Sample]] = []
    for sample in samples:
        if runs and sample.start - runs[-1][-1].end <= gap:
            runs[-1].append(sample)
        else:
            runs.append([sample])
    return runs


def _spans_from(run: Sequence[Sample], i: int) -> list[float]:
    """Spans of subgroups run[i..j] for all j >= i (running max end)."""
    spans = []
    max_end = run[i].end
    for j in range(i, len(run)):
        max_end = max(max_end, run[j].end)
        spans.append(max_end - run[i].start)
    return spans


def partition_run(
    run: Sequence[Sample], max_len: float = MAX_SAMPLE_LEN
) -> list[list[Sample]]:
    """Partition a run into consecutive subgroups maximizing the minimum span.

    Every subgroup must span (earliest start to latest end, gaps included)
    strictly less than ``max_len``.  Among all feasible partitions over all
    part counts, returns the one whose minimum subgroup span is largest;
    ties go to fewer subgroups, then to the lexicographically earliest split
    points.  Raises :class:`InfeasiblePartition` when a single sample
    already spans at least ``max_len``.
    """
    n = len(run)
    if n == 0:
        return []
    if any(s.duration >= max_len for s in run):
        raise InfeasiblePartition(
            f"a sample spans >= {max_len}s and cannot belong to any subgroup"
        )
    spans = [_spans_from(run, i) for i in range(n)]

    # Phase 1: classic max-min DP over suffixes (spans grow with j, so the
    # scan can stop at the first over-long subgroup).
    inf = float("inf")
    best_value = [0.0] * n + [inf]
    for i in range(n - 1, -1, -1):
        best = -inf
        for j in range(i, n):
            span = spans[i][j - i]
            if span >= max_len:
                break
            value = min(span, best_value[j + 1])
            if value > best:
                best = value
        best_value[i] = best
    optimum = best_value[0]

    # Phase 2: achievable subgroup counts (bitmask) using only subgroups whose
    # span stays within [optimum, max_len); any such partition attains the
    # optimum exactly.
    counts = [0] * (n + 1)
    counts[n] = 1
    for i in range(n - 1, -1, -1):
        acc = 0
        for j in range(i, n):
            span = spans[i][j - i]
            if span >= max_len:
                break
            if span >= optimum:
                acc |= counts[j + 1] << 1
        counts[i] = acc
    groups_needed = (counts[0] & -counts[0]).bit_length() - 1

    # Phase 3: lexicographically earliest split points for that count.
    groups: list[list[Sample]] = []
    i = 0
    remaining = groups_needed
    while i < n:
        for j in range(i, n):
            span = spans[i][j - i]
            if span >= max_len:
                break
            if span >= optimum and counts[j + 1] >> (remaining - 1) & 1:
                groups.append(list(run[i : j + 1]))
                i = j + 1
                remaining -= 1
                break
        else:  # pragma: no cover - phase 2 guarantees a valid split exists
            raise AssertionError("partition reconstruction failed")
    return groups


def group_merged(
    samples: Sequence[Sample],
    gap: float = GROUP_GAP,
    max_len: float = MAX_SAMPLE_LEN,
) -> list[Sample]:
    """Group merged-line samples into duration-balanced short-form samples."""
    groups: list[Sample] = []
    for run in split_on_gaps(samples, gap):
        for subgroup in partition_run(run, max_len):
            source: list[int] = []
            for sample in subgroup:
                source.extend(sample.source_lines)
            groups.append(
                Sample(
                    subgroup[0].start,
                    max(s.end for s in subgroup),
                    "\n".join(s.text for s in subgroup),
                    SampleKind.GROUP,
                    tuple(sorted(source)),
                )
            )
    return groups


def group_lines(
    lines: Sequence[Line],
    overlap_thresh: float = OVERLAP_THRESHOLD,
    gap: float = GROUP_GAP,
    max_len: float = MAX_SAMPLE_LEN,
) -> list[Sample]:
    """Two-step grouping: merge overlapping lines, then group the results."""
    samples, _ = merge_overlapping_lines(lines, overlap_thresh, max_len)
    return group_merged(samples, gap, max_len)


def samples_to_json(samples: Sequence[Sample]) -> list[dict]:
    return [
        {"start": s.start, "end": s.end, "text": s.text, "kind": s.kind.value}
        for s in samples
    ]
