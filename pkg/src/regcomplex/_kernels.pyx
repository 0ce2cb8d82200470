# cython: boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled kernels; the contract is documented in ``_fallback``."""

import numpy as np
cimport numpy as cnp
from libc.math cimport INFINITY

cnp.import_array()

BACKEND = "cython"


def aggregate(region_idx, industry_idx, capital, Py_ssize_t n_regions, Py_ssize_t n_industries):
    cdef const cnp.int64_t[::1] ri = np.ascontiguousarray(region_idx, dtype=np.int64)
    cdef const cnp.int64_t[::1] ii = np.ascontiguousarray(industry_idx, dtype=np.int64)
    cdef const cnp.int64_t[::1] cap = np.ascontiguousarray(capital, dtype=np.int64)
    out_arr = np.zeros((n_regions, n_industries), dtype=np.int64)
    cdef cnp.int64_t[:, ::1] out = out_arr
    cdef Py_ssize_t k, n = ri.shape[0]
    cdef cnp.int64_t r, c
    if ii.shape[0] != n or cap.shape[0] != n:
        raise ValueError("index and capital arrays differ in length")
    for k in range(n):
        r = ri[k]
        c = ii[k]
        if r < 0 or r >= n_regions or c < 0 or c >= n_industries:
            raise IndexError(f"record {k} has out-of-range panel index ({r}, {c})")
        out[r, c] += cap[k]
    return out_arr


cdef inline bint _bad(double x) nogil:
    return not (x > 0.0 and x < INFINITY)


cdef inline bint _before(double[::1] v, cnp.int64_t[::1] tb, Py_ssize_t a, Py_ssize_t b) nogil:
    # a ranks strictly ahead of b: larger value first, ties by label order
    return v[a] > v[b] or (v[a] == v[b] and tb[a] < tb[b])


cdef bint _reorder(double[::1] v, cnp.int64_t[::1] tb, Py_ssize_t[::1] order) nogil:
    """Insertion-sort ``order`` in place; return True if it was already sorted."""
    cdef Py_ssize_t i, j, key, n = order.shape[0]
    cdef bint unchanged = True
    for i in range(1, n):
        key = order[i]
        j = i - 1
        while j >= 0 and _before(v, tb, key, order[j]):
            order[j + 1] = order[j]
            j -= 1
            unchanged = False
        order[j + 1] = key
    return unchanged


def fitness_iterate(m, Py_ssize_t max_iter, Py_ssize_t window, region_tiebreak, industry_tiebreak, bint keep_trace=False):
    cdef const unsigned char[:, ::1] mv = np.ascontiguousarray(m, dtype=np.uint8)
    cdef Py_ssize_t S = mv.shape[0], P = mv.shape[1]
    cdef cnp.int64_t[::1] tb_f = np.ascontiguousarray(region_tiebreak, dtype=np.int64)
    cdef cnp.int64_t[::1] tb_q = np.ascontiguousarray(industry_tiebreak, dtype=np.int64)

    F_arr = np.ones(S)
    Q_arr = np.ones(P)
    cdef double[::1] F = F_arr
    cdef double[::1] Q = Q_arr
    cdef double[::1] F_new = np.empty(S)
    cdef double[::1] Q_new = np.empty(P)
    cdef double[::1] inv_f = np.empty(S)
    cdef Py_ssize_t[::1] order_f = np.lexsort((np.asarray(tb_f), -F_arr)).astype(np.intp)
    cdef Py_ssize_t[::1] order_q = np.lexsort((np.asarray(tb_q), -Q_arr)).astype(np.intp)

    trace_F_arr = np.empty((max_iter if keep_trace else 0, S))
    trace_Q_arr = np.empty((max_iter if keep_trace else 0, P))
    cdef double[:, ::1] trace_F = trace_F_arr
    cdef double[:, ::1] trace_Q = trace_Q_arr

    cdef Py_ssize_t n = 0, s, p, streak = 0, failed_at = 0, it
    cdef double acc, mean_f, mean_q
    cdef bint bad, same_f, same_q

    with nogil:
        for it in range(1, max_iter + 1):
            n = it
            bad = False
            for s in range(S):
                inv_f[s] = 1.0 / F[s]
            for s in range(S):
                acc = 0.0
                for p in range(P):
                    if mv[s, p]:
                        acc = acc + Q[p]
                F_new[s] = acc
                bad = bad or _bad(acc)
            for p in range(P):
                Q_new[p] = 0.0
            for s in range(S):
                for p in range(P):
                    if mv[s, p]:
                        Q_new[p] = Q_new[p] + inv_f[s]
            for p in range(P):
                Q_new[p] = 1.0 / Q_new[p]
                bad = bad or _bad(Q_new[p])
            if not bad:
                mean_f = 0.0
                for s in range(S):
                    mean_f = mean_f + F_new[s]
                mean_f = mean_f / S
                mean_q = 0.0
                for p in range(P):
                    mean_q = mean_q + Q_new[p]
                mean_q = mean_q / P
                for s in range(S):
                    F_new[s] = F_new[s] / mean_f
                    bad = bad or _bad(F_new[s])
                for p in range(P):
                    Q_new[p] = Q_new[p] / mean_q
                    bad = bad or _bad(Q_new[p])
            if bad:
                failed_at = it
                n = it - 1
                break
            F[:] = F_new
            Q[:] = Q_new
            if keep_trace:
                trace_F[it - 1, :] = F
                trace_Q[it - 1, :] = Q
            same_f = _reorder(F, tb_f, order_f)
            same_q = _reorder(Q, tb_q, order_q)
            if same_f and same_q:
                streak += 1
            else:
                streak = 0
            if streak >= window:
                break

    if keep_trace:
        return F_arr, Q_arr, n, streak, failed_at, trace_F_arr[:n], trace_Q_arr[:n]
    return F_arr, Q_arr, n, streak, failed_at, None, None
