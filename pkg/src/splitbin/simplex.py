"""Exact rational two-phase revised simplex.

Solves   minimize c.x  s.t.  rows, x >= 0   with every coefficient an
exact rational.  The constraint matrix is kept column-wise and sparse;
the basis inverse is maintained explicitly, so the work per pivot is
pricing over the nonzeros plus a basis-sized update, independent of how
wide the model is.  Pivoting uses Dantzig's rule with a Bland's-rule
fallback on degenerate plateaus, which guarantees termination; the
returned point is always a vertex of the feasible region.

The hot loops (pricing and the elimination step) live in a compiled
extension when available (splitbin._speedups, built from Cython) with a
pure-Python twin in splitbin._kernel_py; `benchmarks/bench_kernel.py`
compares the two.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping, Optional, Sequence

from ._rational import mpq, to_fraction, to_mpq
from .errors import InternalError

try:
    from . import _speedups as _kernel
except ImportError:  # extension not built; pure fallback
    from . import _kernel_py as _kernel

pivot_update = _kernel.pivot_update
price_dantzig = _kernel.price_dantzig
price_bland = _kernel.price_bland
KERNEL_BACKEND = _kernel.BACKEND

OPTIMAL = "optimal"
INFEASIBLE = "infeasible"
UNBOUNDED = "unbounded"

LE = "<="
GE = ">="
EQ = "="

# One constraint: sparse coefficients, sense, right-hand side.
Row = tuple[Mapping[int, Fraction], str, Fraction]

# Degenerate-plateau staging: cheap tie-break below LEX_AT consecutive
# degenerate pivots, lexicographic up to the Bland switch, Bland's rule
# beyond it (the unconditional termination guarantee).
LEX_AT = 8
BLAND_BASE = 10
BLAND_PER_ROW = 1


@dataclass
class LpResult:
    status: str
    x: Optional[list[Fraction]] = None
    objective: Optional[Fraction] = None


class _Unbounded(Exception):
    pass


def solve_lp(
    num_vars: int,
    rows: Sequence[Row],
    objective: Optional[Mapping[int, Fraction]] = None,
    max_pivots: int = 10**7,
) -> LpResult:
    """Solve the LP; objective None means pure feasibility (c = 0)."""
    zero = mpq(0)
    one = mpq(1)
    nrows = len(rows)

    # Column-wise sparse matrix: structural | slack/surplus | artificial.
    col_idx: list[list[int]] = [[] for _ in range(num_vars)]
    col_val: list[list] = [[] for _ in range(num_vars)]
    b: list = []
    basis: list[int] = []  # filled below; -1 marks "needs artificial"

    for i, (coeffs, sense, rhs) in enumerate(rows):
        # Normalize to rhs >= 0 (flipping the sense of inequalities).
        sgn = -1 if rhs < 0 else 1
        eff_sense = sense
        if sgn < 0 and sense != EQ:
            eff_sense = GE if sense == LE else LE
        for j, v in coeffs.items():
            if not 0 <= j < num_vars:
                raise InternalError(f"variable index {j} out of range")
            if v:
                col_idx[j].append(i)
                col_val[j].append(to_mpq(v) * sgn)
        b.append(to_mpq(rhs) * sgn)
        if sense != EQ:
            slack = len(col_idx)
            col_idx.append([i])
            col_val.append([one if eff_sense == LE else -one])
        # <= rows start with their slack basic; everything else gets an
        # artificial variable (appended after all slacks, below).
        basis.append(slack if sense != EQ and eff_sense == LE else -1)

    art_base = len(col_idx)
    n_art = 0
    for i in range(nrows):
        if basis[i] < 0:
            basis[i] = art_base + n_art
            col_idx.append([i])
            col_val.append([one])
            n_art += 1
    ncols = len(col_idx)

    is_basic = [False] * ncols
    for j in basis:
        is_basic[j] = True
    # Initial basis matrix is the identity (slacks are +1 in their row;
    # artificials cover the rest), so B^-1 = I and xB = b >= 0.
    binv = [[one if t == i else zero for t in range(nrows)] for i in range(nrows)]
    xb = list(b)

    pivots = 0

    def run_phase(cost: list, forced_out: bool) -> None:
        """Minimize cost.x from the current basis.  Entering columns are
        restricted to non-artificials... except that artificials carry
        phase-1 cost, so they never price in.  With forced_out, a basic
        artificial (necessarily at zero) is pivoted out as soon as the
        entering column touches its row, so it can never turn positive.
        """
        nonlocal pivots
        degenerate_streak = 0
        switch = BLAND_BASE + BLAND_PER_ROW * nrows
        have_artificials = any(basis[i] >= art_base for i in range(nrows))
        # Partial pricing: scan a rotating window of columns and take
        # the steepest candidate inside it, falling through to further
        # windows (and so, before declaring optimality, a full sweep)
        # only when the window has no improving column.
        window = max(64, art_base // 16)
        pos = 0
        while True:
            # Simplex multipliers y = c_B . B^-1.
            y = [zero] * nrows
            for i in range(nrows):
                cb = cost[basis[i]]
                if cb:
                    brow = binv[i]
                    for t in range(nrows):
                        v = brow[t]
                        if v:
                            y[t] += cb * v
            # Dantzig's rule (steepest reduced cost) while progress is
            # made; after a run of degenerate pivots, fall back to
            # Bland's rule until the objective strictly improves again,
            # so the phase cannot cycle.
            bland = degenerate_streak >= switch
            if bland:
                enter = price_bland(col_idx, col_val, cost, y, is_basic, art_base)
            else:
                enter = -1
                scanned = 0
                while scanned < art_base:
                    hi = min(pos + window, art_base)
                    enter = price_dantzig(
                        col_idx, col_val, cost, y, is_basic, pos, hi
                    )
                    scanned += hi - pos
                    pos = hi if hi < art_base else 0
                    if enter >= 0:
                        break
            if enter < 0:
                return
            # Entering column in the current basis: u = B^-1 . A[enter].
            idx = col_idx[enter]
            val = col_val[enter]
            u = []
            for i in range(nrows):
                brow = binv[i]
                s = zero
                for t in range(len(idx)):
                    v = brow[idx[t]]
                    if v:
                        s += v * val[t]
                u.append(s)
            leave = -1
            if forced_out and have_artificials:
                for i in range(nrows):
                    if basis[i] >= art_base and u[i]:
                        leave = i
                        break
            if leave >= 0:
                degenerate_streak += 1
            else:
                best = None
                ties: list[int] = []
                for i in range(nrows):
                    a = u[i]
                    if a > 0:
                        ratio = xb[i] / a
                        if best is None or ratio < best:
                            best = ratio
                            ties = [i]
                        elif ratio == best:
                            ties.append(i)
                if not ties:
                    raise _Unbounded()
                if len(ties) == 1:
                    leave = ties[0]
                elif bland:
                    # Lowest basis variable (required for termination).
                    leave = min(ties, key=lambda i: basis[i])
                elif degenerate_streak < LEX_AT:
                    # Short plateau: cheap tie-break, evicting
                    # artificials first, then lowest basis variable.
                    leave = min(
                        ties, key=lambda i: (basis[i] < art_base, basis[i])
                    )
                else:
                    # Lexicographic rule: smallest B^-1 row scaled by the
                    # pivot element; rows of B^-1 are independent, so the
                    # winner is unique and the phase cannot cycle.
                    leave = ties[0]
                    for i in ties[1:]:
                        bi, bw = binv[i], binv[leave]
                        ui, uw = u[i], u[leave]
                        for t in range(nrows):
                            lhs = bi[t] * uw
                            rhs = bw[t] * ui
                            if lhs != rhs:
                                if lhs < rhs:
                                    leave = i
                                break
                if best == 0:
                    degenerate_streak += 1
                else:
                    degenerate_streak = 0
            pivots += 1
            if pivots > max_pivots:
                raise InternalError("pivot limit exceeded")
            # Apply the pivot to [u | B^-1 | xB] in one elimination.
            matrix = [[u[i]] + binv[i] + [xb[i]] for i in range(nrows)]
            pivot_update(matrix, leave, 0)
            for i in range(nrows):
                row = matrix[i]
                binv[i] = row[1 : nrows + 1]
                xb[i] = row[nrows + 1]
            if basis[leave] >= art_base:
                have_artificials = any(
                    basis[i] >= art_base for i in range(nrows) if i != leave
                )
            is_basic[basis[leave]] = False
            basis[leave] = enter
            is_basic[enter] = True

    # Phase 1: minimize the sum of artificials.
    if n_art:
        cost1 = [zero] * ncols
        for j in range(art_base, ncols):
            cost1[j] = one
        try:
            run_phase(cost1, forced_out=False)
        except _Unbounded:  # pragma: no cover - phase 1 is bounded below
            raise InternalError("phase 1 unbounded")
        residue = sum(
            (xb[i] for i in range(nrows) if basis[i] >= art_base), zero
        )
        if residue > 0:
            return LpResult(status=INFEASIBLE)

    # Phase 2.  Artificials still basic after phase 1 sit at zero on
    # redundant rows; run_phase keeps them at zero via forced_out.
    obj = objective or {}
    cost2 = [zero] * ncols
    for j, v in obj.items():
        if v:
            cost2[j] = to_mpq(v)
    try:
        run_phase(cost2, forced_out=True)
    except _Unbounded:
        return LpResult(status=UNBOUNDED)

    x = [Fraction(0)] * num_vars
    for i, j in enumerate(basis):
        if j < num_vars:
            x[j] = to_fraction(xb[i])
    value = sum(
        (to_fraction(to_mpq(v)) * x[j] for j, v in obj.items()), Fraction(0)
    )
    return LpResult(status=OPTIMAL, x=x, objective=value)
