"""Pure-Python edit-distance kernel.

Fallback used when the compiled extension is unavailable.  Must stay
op-for-op identical to ``_align_core``: unit costs, and backtrace from the
end preferring Hit, then Deletion, then Substitution, then Insertion at
equal cost.
"""

from __future__ import annotations

OP_HIT = 0
OP_SUB = 1
OP_DEL = 2
OP_INS = 3


def align_ids(ref: list[int], hyp: list[int]) -> list[int]:
    """Return the op-code sequence of a minimal alignment of two id sequences."""
    m = len(ref)
    n = len(hyp)
    rows: list[list[int]] = [list(range(n + 1))]
    for i in range(1, m + 1):
        prev = rows[-1]
        row = [i] * (n + 1)
        ri = ref[i - 1]
        for j in range(1, n + 1):
            best = prev[j - 1] + (0 if ri == hyp[j - 1] else 1)
            up = prev[j] + 1
            if up < best:
                best = up
            left = row[j - 1] + 1
            if left < best:
                best = left
            row[j] = best
        rows.append(row)

    ops: list[int] = []
    i, j = m, n
    while i > 0 or j > 0:
        cost = rows[i][j]
        if i > 0 and j > 0 and ref[i - 1] == hyp[j - 1] and rows[i - 1][j - 1] == cost:
            ops.append(OP_HIT)
            i -= 1
            j -= 1
        elif i > 0 and rows[i - 1][j] + 1 == cost:
            ops.append(OP_DEL)
            i -= 1
        elif i > 0 and j > 0 and rows[i - 1][j - 1] + 1 == cost:
            ops.append(OP_SUB)
            i -= 1
            j -= 1
        else:
            ops.append(OP_INS)
            j -= 1
    ops.reverse()
    return ops
