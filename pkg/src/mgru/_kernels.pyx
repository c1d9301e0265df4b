# cython: language_level=3
"""Compiled hot kernels; see ``_pykernels`` for the reference semantics."""
import numpy as np
cimport numpy as cnp
from libc.math cimport INFINITY

cnp.import_array()


cdef inline double _sq(const double[:, ::1] A, Py_ssize_t i,
                       const double[:, ::1] B, Py_ssize_t j,
                       Py_ssize_t m) noexcept nogil:
    cdef double acc = 0.0, t
    cdef Py_ssize_t k
    for k in range(m):
        t = A[i, k] - B[j, k]
        acc += t * t
    return acc


def pairwise_sq_dist(A, B):
    cdef const double[:, ::1] a = np.ascontiguousarray(A, dtype=np.float64)
    cdef const double[:, ::1] b = np.ascontiguousarray(B, dtype=np.float64)
    cdef Py_ssize_t na = a.shape[0], nb = b.shape[0], m = a.shape[1], i, j
    out = np.empty((na, nb), dtype=np.float64)
    cdef double[:, ::1] o = out
    with nogil:
        for i in range(na):
            for j in range(nb):
                o[i, j] = _sq(a, i, b, j, m)
    return out


def min_sq_dist(A, B, bint exclude_diagonal=False):
    cdef const double[:, ::1] a = np.ascontiguousarray(A, dtype=np.float64)
    cdef const double[:, ::1] b = np.ascontiguousarray(B, dtype=np.float64)
    cdef Py_ssize_t na = a.shape[0], nb = b.shape[0], m = a.shape[1], i, j
    cdef double d, best
    out = np.empty(na, dtype=np.float64)
    cdef double[::1] o = out
    with nogil:
        for i in range(na):
            best = INFINITY
            for j in range(nb):
                if exclude_diagonal and i == j:
                    continue
                d = _sq(a, i, b, j, m)
                if d < best:
                    best = d
            o[i] = best
    return out


def ball_cover(X, enemy_sq):
    cdef const double[:, ::1] x = np.ascontiguousarray(X, dtype=np.float64)
    cdef const double[::1] r = np.ascontiguousarray(enemy_sq, dtype=np.float64)
    cdef Py_ssize_t n = x.shape[0], m = x.shape[1], i, j
    out = np.zeros((n, n), dtype=np.uint8)
    cdef cnp.uint8_t[:, ::1] c = out
    with nogil:
        for i in range(n):
            for j in range(n):
                if i == j or _sq(x, i, x, j, m) < r[i]:
                    c[i, j] = 1
    return out


def greedy_cover(cover, priority):
    cdef const cnp.uint8_t[:, ::1] c = np.ascontiguousarray(cover, dtype=np.uint8)
    cdef const Py_ssize_t[::1] pr = np.ascontiguousarray(priority, dtype=np.intp)
    cdef Py_ssize_t n = c.shape[0], i, j, p, best
    cdef Py_ssize_t remaining = n
    cdef long long best_count
    counts_arr = np.zeros(n, dtype=np.int64)
    uncov_arr = np.ones(n, dtype=np.uint8)
    sel_arr = np.empty(n, dtype=np.intp)
    cdef long long[::1] counts = counts_arr
    cdef cnp.uint8_t[::1] uncovered = uncov_arr
    cdef Py_ssize_t[::1] sel = sel_arr
    cdef Py_ssize_t n_sel = 0
    with nogil:
        for i in range(n):
            for j in range(n):
                counts[i] += c[i, j]
        while remaining > 0:
            best = pr[0]
            best_count = counts[best]
            for p in range(1, n):
                if counts[pr[p]] > best_count:
                    best = pr[p]
                    best_count = counts[best]
            sel[n_sel] = best
            n_sel += 1
            for j in range(n):
                if c[best, j] and uncovered[j]:
                    uncovered[j] = 0
                    remaining -= 1
                    for i in range(n):
                        if c[i, j]:
                            counts[i] -= 1
    return sel_arr[:n_sel].copy()


def best_split(X, y, Py_ssize_t min_leaf):
    cdef const double[:, :] x = np.asarray(X, dtype=np.float64)
    cdef const long long[::1] lab = np.ascontiguousarray(y, dtype=np.int64)
    cdef Py_ssize_t n = x.shape[0], m = x.shape[1], f, i, pos
    cdef long long total = 0, a_left, b_left, a_right, b_right, n_left, n_right
    cdef double score, thr, best_score = INFINITY, best_thr = np.nan
    cdef double v0, v1
    cdef Py_ssize_t best_f = -1
    cdef const Py_ssize_t[::1] order
    if n < 2 * min_leaf:
        return (-1, float("nan"), float("inf"))
    for i in range(n):
        total += lab[i]
    for f in range(m):
        order = np.argsort(np.asarray(X)[:, f], kind="stable").astype(np.intp)
        with nogil:
            a_left = 0
            for i in range(n - 1):
                pos = order[i]
                a_left += lab[pos]
                n_left = i + 1
                n_right = n - n_left
                if n_left < min_leaf or n_right < min_leaf:
                    continue
                v0 = x[pos, f]
                v1 = x[order[i + 1], f]
                if not (v0 < v1):
                    continue
                b_left = n_left - a_left
                a_right = total - a_left
                b_right = n_right - a_right
                score = (<double>(a_left * b_left)) / (<double>n_left) + \
                        (<double>(a_right * b_right)) / (<double>n_right)
                if score < best_score:
                    thr = (v0 + v1) / 2.0
                    if thr >= v1:
                        thr = v0
                    best_score = score
                    best_thr = thr
                    best_f = f
    if best_f < 0:
        return (-1, float("nan"), float("inf"))
    return (best_f, best_thr, best_score)
