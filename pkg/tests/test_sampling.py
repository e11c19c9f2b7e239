"""Line merging, gap splitting, and max-min partition tests."""

import itertools
import random

import pytest

from altkit.errors import InfeasiblePartition
from altkit.sampling import (
    Line,
    Sample,
    SampleKind,
    group_lines,
    group_merged,
    merge_overlapping_lines,
    partition_run,
    split_on_gaps,
)


def mk_sample(start, end, text="x", kind=SampleKind.MERGED_LINE, source=(0,)):
    return Sample(start, end, text, kind, tuple(source))


# --- merging ---


def test_overlapping_lines_merge():
    lines = [Line(0.0, 3.0, "a"), Line(2.5, 5.0, "b")]
    samples, excluded = merge_overlapping_lines(lines)
    assert excluded == 0
    assert len(samples) == 1
    assert (samples[0].start, samples[0].end) == (0.0, 5.0)
    assert samples[0].text == "a\nb"
    assert samples[0].source_lines == (0, 1)


def test_small_overlap_stays_separate():
    lines = [Line(0.0, 3.0, "a"), Line(2.9, 5.0, "b")]
    samples, _ = merge_overlapping_lines(lines)
    assert len(samples) == 2


def test_overlap_threshold_is_strict():
    lines = [Line(0.0, 3.0, "a"), Line(2.8, 5.0, "b")]  # overlap exactly 0.2
    samples, _ = merge_overlapping_lines(lines)
    assert len(samples) == 2


def test_transitive_merge_through_chain():
    lines = [Line(0.0, 2.0, "a"), Line(1.5, 3.5, "b"), Line(3.0, 5.0, "c")]
    samples, _ = merge_overlapping_lines(lines)
    assert len(samples) == 1
    assert samples[0].text == "a\nb\nc"


def test_transitive_merge_skips_contained_non_overlapping_line():
    # b sits inside a's span but overlaps nothing by more than the threshold;
    # c overlaps a, so {a, c} merge while b stays alone
    lines = [Line(0.0, 10.0, "a"), Line(5.0, 5.1, "b"), Line(9.0, 12.0, "c")]
    samples, _ = merge_overlapping_lines(lines)
    texts = sorted(s.text for s in samples)
    assert texts == ["a\nc", "b"]


def test_overlong_sample_excluded_and_counted():
    lines = [Line(0.0, 20.0, "a"), Line(19.0, 40.0, "b"), Line(50.0, 52.0, "c")]
    samples, excluded = merge_overlapping_lines(lines)
    assert excluded == 1
    assert [s.text for s in samples] == ["c"]


def test_empty_input():
    assert merge_overlapping_lines([]) == ([], 0)


# --- gap splitting ---


def test_split_on_long_gap():
    samples = [mk_sample(0, 2), mk_sample(10.5, 12)]  # 8.5 s gap
    runs = split_on_gaps(samples, gap=7.0)
    assert [len(r) for r in runs] == [1, 1]


def test_no_split_on_short_gap():
    samples = [mk_sample(0, 2), mk_sample(8, 9)]  # 6 s gap
    assert len(split_on_gaps(samples, gap=7.0)) == 1


def test_split_single_sample():
    assert split_on_gaps([mk_sample(0, 2)]) == [[mk_sample(0, 2)]]


# --- partitioning ---


def brute_force_partition(run, max_len):
    """Enumerate all consecutive partitions; same objective and tie rules."""
    n = len(run)
    best = None
    for cut_bits in range(1 << (n - 1)) if n else []:
        cuts = [i + 1 for i in range(n - 1) if cut_bits >> i & 1]
        bounds = [0, *cuts, n]
        spans = []
        ok = True
        for lo, hi in zip(bounds, bounds[1:]):
            span = max(s.end for s in run[lo:hi]) - run[lo].start
            if span >= max_len:
                ok = False
                break
            spans.append(span)
        if not ok:
            continue
        key = (-min(spans), len(spans), tuple(cuts))
        if best is None or key < best[0]:
            best = (key, cuts)
    return None if best is None else (-best[0][0], best[1])


def test_partition_short_run_is_single_group():
    run = [mk_sample(0, 8), mk_sample(9, 20)]
    groups = partition_run(run, max_len=30.0)
    assert len(groups) == 1


def test_partition_four_samples_known_optimum():
    run = [mk_sample(0, 12), mk_sample(13, 24), mk_sample(25, 36), mk_sample(37, 45)]
    groups = partition_run(run, max_len=30.0)
    assert [len(g) for g in groups] == [2, 2]
    spans = [max(s.end for s in g) - g[0].start for g in groups]
    assert min(spans) == 20.0
    value, _cuts = brute_force_partition(run, 30.0)
    assert min(spans) == value


def test_partition_infeasible_single_sample():
    with pytest.raises(InfeasiblePartition):
        partition_run([mk_sample(0, 31)], max_len=30.0)


def test_partition_matches_brute_force_on_random_runs():
    rng = random.Random(99)
    for _ in range(200):
        t = 0.0
        run = []
        for _ in range(rng.randint(1, 10)):
            t += rng.uniform(0.0, 6.0)
            end = t + rng.uniform(0.5, 14.0)
            run.append(mk_sample(round(t, 2), round(end, 2)))
            t = end
        try:
            groups = partition_run(run, max_len=30.0)
        except InfeasiblePartition:
            assert brute_force_partition(run, 30.0) is None
            continue
        value, cuts = brute_force_partition(run, 30.0)
        spans = [max(s.end for s in g) - g[0].start for g in groups]
        assert min(spans) == value
        got_cuts = list(itertools.accumulate(len(g) for g in groups))[:-1]
        assert got_cuts == cuts


# --- grouping end to end ---


def lines_fixture():
    return [
        Line(0.0, 3.0, "l0"),
        Line(2.5, 6.0, "l1"),
        Line(6.5, 9.0, "l2"),
        Line(20.0, 24.0, "l3"),
        Line(24.5, 29.0, "l4"),
        Line(40.0, 44.0, "l5"),
    ]


def test_group_lines_pipeline():
    groups = group_lines(lines_fixture())
    assert all(g.kind is SampleKind.GROUP for g in groups)
    assert all(g.duration < 30.0 for g in groups)
    # every line's text appears exactly once across groups
    joined = "\n".join(g.text for g in groups)
    for i in range(6):
        assert joined.count(f"l{i}") == 1


def test_group_lines_empty():
    assert group_lines([]) == []


def test_groups_pairwise_disjoint_merged_overlap_bounded():
    # realistic regime: lines may overlap slightly but never nest
    rng = random.Random(101)
    for _ in range(20):
        t = 0.0
        lines = []
        for i in range(rng.randint(1, 25)):
            t += rng.uniform(-0.4, 8.0)
            t = max(t, 0.0)
            end = t + rng.uniform(0.5, 8.0)
            lines.append(Line(round(t, 2), round(end, 2), f"w{i}"))
            t = end
        lines.sort(key=lambda l: (l.start, l.end))
        merged, _ = merge_overlapping_lines(lines)
        for a, b in zip(merged, merged[1:]):
            assert min(a.end, b.end) - b.start <= 0.2 + 1e-9
        groups = group_merged(merged)
        # disjoint modulo the permitted sub-threshold line overlap
        for a, b in zip(groups, groups[1:]):
            assert b.start >= a.end - 0.2 - 1e-9
        assert all(g.duration < 30.0 for g in groups)


def test_grouping_invariant_under_time_shift():
    lines = lines_fixture()
    base = group_lines(lines)
    shifted = group_lines([Line(l.start + 123.25, l.end + 123.25, l.text) for l in lines])
    assert [g.text for g in base] == [g.text for g in shifted]
    assert [round(g.duration, 9) for g in base] == [round(g.duration, 9) for g in shifted]


def test_line_validation():
    with pytest.raises(ValueError):
        Line(5.0, 5.0, "x")
