# cython: language_level=3, boundscheck=False, wraparound=False
"""Compiled simplex kernels; contract matches splitbin._kernel_py.

Arithmetic stays on exact rational Python objects (gmpy2.mpq or
Fraction); Cython removes the interpreter overhead of the inner loops.
"""

BACKEND = "compiled"


def pivot_update(list rows, Py_ssize_t pr, Py_ssize_t pc):
    cdef list prow = <list>rows[pr]
    cdef Py_ssize_t ncols = len(prow)
    cdef Py_ssize_t nrows = len(rows)
    cdef Py_ssize_t i, j, t, nnz
    cdef list row

    piv = prow[pc]
    if piv != 1:
        inv = 1 / piv
        for j in range(ncols):
            v = prow[j]
            if v:
                prow[j] = v * inv

    cdef list nz = []
    for j in range(ncols):
        if prow[j]:
            nz.append(j)
    nnz = len(nz)

    for i in range(nrows):
        if i == pr:
            continue
        row = <list>rows[i]
        f = row[pc]
        if f:
            for t in range(nnz):
                j = <Py_ssize_t>nz[t]
                row[j] = row[j] - f * prow[j]


def price_dantzig(list col_idx, list col_val, list cost, list y,
                  list is_basic, Py_ssize_t lo, Py_ssize_t hi):
    """Index of the nonbasic column in [lo, hi) with the most negative
    reduced cost cost[j] - y . A[j], or -1 when none is negative."""
    cdef Py_ssize_t j, t, n
    cdef Py_ssize_t enter = -1
    cdef list idx, val
    best = 0
    for j in range(lo, hi):
        if is_basic[j]:
            continue
        d = cost[j]
        idx = <list>col_idx[j]
        val = <list>col_val[j]
        n = len(idx)
        for t in range(n):
            yi = y[<Py_ssize_t>idx[t]]
            if yi:
                d = d - yi * val[t]
        if d < best:
            best = d
            enter = j
    return enter


def price_bland(list col_idx, list col_val, list cost, list y,
                list is_basic, Py_ssize_t limit):
    """Lowest-index nonbasic column with a negative reduced cost, -1
    when none (Bland's anti-cycling rule)."""
    cdef Py_ssize_t j, t, n
    cdef list idx, val
    for j in range(limit):
        if is_basic[j]:
            continue
        d = cost[j]
        idx = <list>col_idx[j]
        val = <list>col_val[j]
        n = len(idx)
        for t in range(n):
            yi = y[<Py_ssize_t>idx[t]]
            if yi:
                d = d - yi * val[t]
        if d < 0:
            return j
    return -1
