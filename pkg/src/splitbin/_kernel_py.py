"""Pure-Python simplex kernels.

Same contract as the compiled twins in splitbin._speedups:

- pivot_update: given a dense matrix (list of lists of exact
  rationals), normalize the pivot row and eliminate the pivot column
  from every other row.
- price_dantzig / price_bland: reduced-cost pricing over sparse columns
  (parallel index/value lists per column), returning the entering
  column index or -1.
"""

BACKEND = "pure"


def pivot_update(rows, pr, pc):
    prow = rows[pr]
    piv = prow[pc]
    if piv != 1:
        inv = 1 / piv
        for j, v in enumerate(prow):
            if v:
                prow[j] = v * inv
    nz = [j for j, v in enumerate(prow) if v]
    for i, row in enumerate(rows):
        if i == pr:
            continue
        f = row[pc]
        if f:
            for j in nz:
                row[j] = row[j] - f * prow[j]


def price_dantzig(col_idx, col_val, cost, y, is_basic, lo, hi):
    """Index of the nonbasic column in [lo, hi) with the most negative
    reduced cost cost[j] - y . A[j], or -1 when none is negative."""
    best = 0
    enter = -1
    for j in range(lo, hi):
        if is_basic[j]:
            continue
        d = cost[j]
        idx = col_idx[j]
        val = col_val[j]
        for t in range(len(idx)):
            yi = y[idx[t]]
            if yi:
                d = d - yi * val[t]
        if d < best:
            best = d
            enter = j
    return enter


def price_bland(col_idx, col_val, cost, y, is_basic, limit):
    """Lowest-index nonbasic column with a negative reduced cost, -1
    when none (Bland's anti-cycling rule)."""
    for j in range(limit):
        if is_basic[j]:
            continue
        d = cost[j]
        idx = col_idx[j]
        val = col_val[j]
        for t in range(len(idx)):
            yi = y[idx[t]]
            if yi:
                d = d - yi * val[t]
        if d < 0:
            return j
    return -1
