# cython: language_level=3, boundscheck=False, wraparound=False, initializedcheck=False, cdivision=True
"""Compiled alignment DP. Contract and arithmetic mirror _dp.py exactly."""

import numpy as np
cimport numpy as cnp
from libc.math cimport erfc, log, log1p, sqrt, fabs, M_PI, INFINITY, NAN
from libc.stdlib cimport malloc, free

cnp.import_array()

cdef double SQRT1_2 = sqrt(0.5)
cdef double LOG_SQRT_PI = 0.5 * log(M_PI)
cdef double ERFC_SERIES_FROM = 26.0
cdef double INDEL_CAP = 4.5
cdef Py_ssize_t CACHE_MAX = 2048

cdef int[6] STEP_A
cdef int[6] STEP_B
STEP_A[:] = [1, 2, 1, 2, 1, 0]
STEP_B[:] = [1, 1, 2, 2, 0, 1]


cdef inline double neg_log_erfc(double x) noexcept nogil:
    # mirrors model.neg_log_erfc operation for operation
    cdef double inv, term, tail
    cdef int n
    if x < ERFC_SERIES_FROM:
        return -log(erfc(x))
    inv = 0.5 / (x * x)
    term = 1.0
    tail = 0.0
    for n in range(1, 8):
        term *= -(2 * n - 1) * inv
        tail += term
    return x * x + log(x) + LOG_SQRT_PI - log1p(tail)


cdef inline double sub_len(cnp.int64_t l1, cnp.int64_t l2, double c, double s2) noexcept nogil:
    cdef double delta
    if l1 == 0 and l2 == 0:
        return 0.0
    delta = (<double>l2 - <double>l1 * c) / sqrt(<double>(l1 + l2) / 2.0 * s2)
    return neg_log_erfc(fabs(delta) * SQRT1_2)


cdef inline double indel_len(cnp.int64_t l, double s2) noexcept nogil:
    cdef double z = <double>l / sqrt(<double>l * s2 + 1.0)
    cdef double cost = neg_log_erfc(z * SQRT1_2)
    if cost < INDEL_CAP:
        return cost
    return INDEL_CAP


cdef struct Model:
    const cnp.int64_t *ls
    const cnp.int64_t *lt
    double prior[6]
    double c
    double s2
    double weight
    double *sub_cache
    Py_ssize_t w1
    Py_ssize_t w2
    double *del_cache
    Py_ssize_t wd
    const cnp.int64_t *rowptr
    const cnp.int64_t *cols
    const double *vals
    int has_sim


# caches start as NaN and are filled on first use
cdef inline double cached_sub(Model *md, cnp.int64_t l1, cnp.int64_t l2) noexcept nogil:
    cdef double v
    if l1 < md.w1 and l2 < md.w2:
        v = md.sub_cache[l1 * md.w2 + l2]
        if v != v:
            v = sub_len(l1, l2, md.c, md.s2)
            md.sub_cache[l1 * md.w2 + l2] = v
        return v
    return sub_len(l1, l2, md.c, md.s2)


cdef inline double cached_del(Model *md, cnp.int64_t l) noexcept nogil:
    cdef double v
    if l < md.wd:
        v = md.del_cache[l]
        if v != v:
            v = indel_len(l, md.s2)
            md.del_cache[l] = v
        return v
    return indel_len(l, md.s2)


cdef inline double bead_cost(Model *md, int k, Py_ssize_t i, Py_ssize_t j, const double *s) noexcept nogil:
    cdef int a = STEP_A[k]
    cdef int b = STEP_B[k]
    cdef cnp.int64_t l1, l2
    cdef double cost
    if b == 0:
        return md.prior[k] + cached_del(md, md.ls[i - 1])
    if a == 0:
        return md.prior[k] + cached_del(md, md.lt[j - 1])
    l1 = md.ls[i - 1]
    if a == 2:
        l1 = l1 + md.ls[i - 2]
    l2 = md.lt[j - 1]
    if b == 2:
        l2 = l2 + md.lt[j - 2]
    cost = md.prior[k] + cached_sub(md, l1, l2)
    if s != NULL:
        cost = cost - md.weight * s[k]
        if cost < 0.0:
            cost = 0.0
    return cost


cdef const double *find_sim(Model *md, Py_ssize_t i, Py_ssize_t j) noexcept nogil:
    cdef cnp.int64_t p
    if not md.has_sim:
        return NULL
    for p in range(md.rowptr[i], md.rowptr[i + 1]):
        if md.cols[p] == j:
            return &md.vals[4 * p]
    return NULL


def dp_align(src_len, tgt_len, prior, double c, double s2, sim=None, double weight=0.0):
    cdef cnp.ndarray[cnp.int64_t, ndim=1, mode="c"] ls = np.ascontiguousarray(src_len, dtype=np.int64)
    cdef cnp.ndarray[cnp.int64_t, ndim=1, mode="c"] lt = np.ascontiguousarray(tgt_len, dtype=np.int64)
    cdef Py_ssize_t n = ls.shape[0]
    cdef Py_ssize_t m = lt.shape[0]
    cdef Model md
    cdef cnp.ndarray[cnp.int64_t, ndim=1, mode="c"] rowptr
    cdef cnp.ndarray[cnp.int64_t, ndim=1, mode="c"] cols
    cdef cnp.ndarray[double, ndim=2, mode="c"] vals
    cdef Py_ssize_t i, j, w1, w2, wd
    cdef int k, a, b, bk
    cdef cnp.int64_t p, pend
    cdef double best, v, prev
    cdef double *rows[3]
    cdef double *cur
    cdef double *r1
    cdef double *r2
    cdef const double *s
    cdef cnp.ndarray[cnp.uint8_t, ndim=1, mode="c"] back
    cdef cnp.uint8_t *bp

    md.ls = <const cnp.int64_t *>ls.data if n > 0 else NULL
    md.lt = <const cnp.int64_t *>lt.data if m > 0 else NULL
    for k in range(6):
        md.prior[k] = prior[k]
    md.c = c
    md.s2 = s2
    md.weight = weight
    md.has_sim = 0
    if sim is not None:
        rowptr = np.ascontiguousarray(sim[0], dtype=np.int64)
        cols = np.ascontiguousarray(sim[1], dtype=np.int64)
        vals = np.ascontiguousarray(np.asarray(sim[2], dtype=np.float64).reshape(-1, 4))
        md.rowptr = <const cnp.int64_t *>rowptr.data
        md.cols = <const cnp.int64_t *>cols.data
        md.vals = <const double *>vals.data
        md.has_sim = 1

    w1 = 1
    w2 = 1
    if n > 0:
        w1 = min(int(ls.max()) * 2 + 1, CACHE_MAX)
    if m > 0:
        w2 = min(int(lt.max()) * 2 + 1, CACHE_MAX)
    wd = max(w1, w2)
    if w1 * w2 > 4 * (n + 1) * (m + 1):
        # filling the table would cost more than the DP looks up; compute on demand
        w1 = 1
        w2 = 1
    md.w1 = w1
    md.w2 = w2
    md.wd = wd
    md.sub_cache = <double *>malloc(w1 * w2 * sizeof(double))
    md.del_cache = <double *>malloc(wd * sizeof(double))
    for k in range(3):
        rows[k] = <double *>malloc((m + 1) * sizeof(double))
    back = np.empty((n + 1) * (m + 1), dtype=np.uint8)
    bp = <cnp.uint8_t *>back.data
    if md.sub_cache == NULL or md.del_cache == NULL or rows[0] == NULL or rows[1] == NULL or rows[2] == NULL:
        free(md.sub_cache); free(md.del_cache)
        free(rows[0]); free(rows[1]); free(rows[2])
        raise MemoryError()

    try:
        with nogil:
            for i in range(w1 * w2):
                md.sub_cache[i] = NAN
            for i in range(wd):
                md.del_cache[i] = NAN
            for i in range(n + 1):
                cur = rows[i % 3]
                r1 = rows[(i + 2) % 3]
                r2 = rows[(i + 1) % 3]
                if md.has_sim:
                    p = md.rowptr[i]
                    pend = md.rowptr[i + 1]
                for j in range(m + 1):
                    if i == 0 and j == 0:
                        cur[0] = 0.0
                        bp[0] = 255
                        continue
                    s = NULL
                    if md.has_sim:
                        while p < pend and md.cols[p] < j:
                            p += 1
                        if p < pend and md.cols[p] == j:
                            s = &md.vals[4 * p]
                    # candidates in tie-break order; strict < keeps the earlier kind
                    best = INFINITY
                    bk = 255
                    if i >= 1 and j >= 1:
                        prev = r1[j - 1]
                        if prev != INFINITY:
                            v = prev + bead_cost(&md, 0, i, j, s)
                            if v < best:
                                best = v
                                bk = 0
                    if i >= 2 and j >= 1:
                        prev = r2[j - 1]
                        if prev != INFINITY:
                            v = prev + bead_cost(&md, 1, i, j, s)
                            if v < best:
                                best = v
                                bk = 1
                    if i >= 1 and j >= 2:
                        prev = r1[j - 2]
                        if prev != INFINITY:
                            v = prev + bead_cost(&md, 2, i, j, s)
                            if v < best:
                                best = v
                                bk = 2
                    if i >= 2 and j >= 2:
                        prev = r2[j - 2]
                        if prev != INFINITY:
                            v = prev + bead_cost(&md, 3, i, j, s)
                            if v < best:
                                best = v
                                bk = 3
                    if i >= 1:
                        prev = r1[j]
                        if prev != INFINITY:
                            v = prev + bead_cost(&md, 4, i, j, s)
                            if v < best:
                                best = v
                                bk = 4
                    if j >= 1:
                        prev = cur[j - 1]
                        if prev != INFINITY:
                            v = prev + bead_cost(&md, 5, i, j, s)
                            if v < best:
                                best = v
                                bk = 5
                    cur[j] = best
                    bp[i * (m + 1) + j] = <cnp.uint8_t>bk

        total = rows[n % 3][m]
        path = []
        i = n
        j = m
        while i > 0 or j > 0:
            k = bp[i * (m + 1) + j]
            s = find_sim(&md, i, j)
            path.append((k, i, j, bead_cost(&md, k, i, j, s)))
            i -= STEP_A[k]
            j -= STEP_B[k]
        path.reverse()
        return total, path
    finally:
        free(md.sub_cache)
        free(md.del_cache)
        free(rows[0]); free(rows[1]); free(rows[2])
