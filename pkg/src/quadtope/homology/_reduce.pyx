# distutils: language = c++
# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled column reduction of sparse boundary matrices over GF(p)."""

from libcpp.vector cimport vector

import numpy as np

cimport numpy as cnp

cnp.import_array()


cdef long long _inv(long long a, long long p) nogil:
    cdef long long t = 0, nt = 1, r = p, nr = a % p, q, tmp
    while nr != 0:
        q = r // nr
        tmp = t - q * nt
        t = nt
        nt = tmp
        tmp = r - q * nr
        r = nr
        nr = tmp
    if t < 0:
        t += p
    return t


cdef void _axpy(vector[int]& ai, vector[long long]& av,
                vector[int]& bi, vector[long long]& bv,
                long long f, long long p,
                vector[int]& oi, vector[long long]& ov) nogil:
    # o = a + f*b, both sorted ascending by row
    cdef size_t x = 0, y = 0
    cdef long long v
    oi.clear()
    ov.clear()
    while x < ai.size() and y < bi.size():
        if ai[x] < bi[y]:
            oi.push_back(ai[x]); ov.push_back(av[x]); x += 1
        elif ai[x] > bi[y]:
            oi.push_back(bi[y]); ov.push_back((f * bv[y]) % p); y += 1
        else:
            v = (av[x] + f * bv[y]) % p
            if v != 0:
                oi.push_back(ai[x]); ov.push_back(v)
            x += 1
            y += 1
    while x < ai.size():
        oi.push_back(ai[x]); ov.push_back(av[x]); x += 1
    while y < bi.size():
        oi.push_back(bi[y]); ov.push_back((f * bv[y]) % p); y += 1


def reduce_columns(int n_rows, const long long[:] indptr, const int[:] indices,
                   const long long[:] data, long long p, const unsigned char[:] skip):
    """Rank of a sparse matrix over GF(p) by left-to-right column reduction.

    Columns are given in CSC form with ascending row indices. Columns flagged
    in ``skip`` are known to reduce to zero and are not touched. Returns
    ``(rank, pivot_rows, pivot_cols)``.
    """
    cdef int ncols = indptr.shape[0] - 1
    cdef vector[vector[int]] red_i
    cdef vector[vector[long long]] red_v
    cdef vector[int] owner
    cdef vector[int] ci, ti
    cdef vector[long long] cv, tv
    cdef int j, k, low, o, rank = 0
    cdef long long f, inv, v
    red_i.resize(ncols)
    red_v.resize(ncols)
    owner.resize(n_rows, -1)
    pivots = []
    cols = []
    with nogil:
        for j in range(ncols):
            if skip[j]:
                continue
            ci.clear()
            cv.clear()
            for k in range(indptr[j], indptr[j + 1]):
                v = data[k] % p
                if v < 0:
                    v += p
                if v != 0:
                    ci.push_back(indices[k])
                    cv.push_back(v)
            while ci.size() > 0:
                low = ci.back()
                o = owner[low]
                if o < 0:
                    break
                f = (p - cv.back()) % p
                _axpy(ci, cv, red_i[o], red_v[o], f, p, ti, tv)
                ci.swap(ti)
                cv.swap(tv)
            if ci.size() > 0:
                low = ci.back()
                inv = _inv(cv.back(), p)
                for k in range(<int>cv.size()):
                    cv[k] = (cv[k] * inv) % p
                owner[low] = j
                red_i[j] = ci
                red_v[j] = cv
                rank += 1
                with gil:
                    pivots.append(low)
                    cols.append(j)
    return rank, np.asarray(pivots, dtype=np.int64), np.asarray(cols, dtype=np.int64)
