# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled edit-distance kernel.

Semantics are pinned by the pure-Python twin ``_align_py``: unit costs and
a backtrace from the end preferring Hit, then Deletion, then Substitution,
then Insertion at equal cost.
"""

import numpy as np

cimport numpy as cnp

cnp.import_array()

OP_HIT = 0
OP_SUB = 1
OP_DEL = 2
OP_INS = 3


def align_ids(ref, hyp):
    """Return the op-code sequence of a minimal alignment of two id sequences."""
    cdef cnp.ndarray[cnp.int32_t, ndim=1] ref_arr = np.ascontiguousarray(ref, dtype=np.int32)
    cdef cnp.ndarray[cnp.int32_t, ndim=1] hyp_arr = np.ascontiguousarray(hyp, dtype=np.int32)
    cdef Py_ssize_t m = ref_arr.shape[0]
    cdef Py_ssize_t n = hyp_arr.shape[0]
    cdef Py_ssize_t stride = n + 1

    cdef cnp.ndarray[cnp.int32_t, ndim=1] cost_arr = np.empty((m + 1) * stride, dtype=np.int32)
    cdef cnp.int32_t[:] cost = cost_arr
    cdef cnp.int32_t[:] rseq = ref_arr
    cdef cnp.int32_t[:] hseq = hyp_arr

    cdef Py_ssize_t i, j
    cdef cnp.int32_t best, up, left, ri

    for j in range(n + 1):
        cost[j] = <cnp.int32_t> j
    for i in range(1, m + 1):
        cost[i * stride] = <cnp.int32_t> i
        ri = rseq[i - 1]
        for j in range(1, n + 1):
            best = cost[(i - 1) * stride + j - 1] + (0 if ri == hseq[j - 1] else 1)
            up = cost[(i - 1) * stride + j] + 1
            if up < best:
                best = up
            left = cost[i * stride + j - 1] + 1
            if left < best:
                best = left
            cost[i * stride + j] = best

    cdef cnp.ndarray[cnp.int8_t, ndim=1] ops_arr = np.empty(m + n, dtype=np.int8)
    cdef cnp.int8_t[:] ops = ops_arr
    cdef Py_ssize_t k = 0
    cdef cnp.int32_t c

    i = m
    j = n
    while i > 0 or j > 0:
        c = cost[i * stride + j]
        if i > 0 and j > 0 and rseq[i - 1] == hseq[j - 1] and cost[(i - 1) * stride + j - 1] == c:
            ops[k] = OP_HIT
            i -= 1
            j -= 1
        elif i > 0 and cost[(i - 1) * stride + j] + 1 == c:
            ops[k] = OP_DEL
            i -= 1
        elif i > 0 and j > 0 and cost[(i - 1) * stride + j - 1] + 1 == c:
            ops[k] = OP_SUB
            i -= 1
            j -= 1
        else:
            ops[k] = OP_INS
            j -= 1
        k += 1

    return [int(ops[idx]) for idx in range(k - 1, -1, -1)]
