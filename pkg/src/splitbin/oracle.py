"""Exact brute-force optimum for small instances.

Independent of the approximation pipeline: enumerates which items may
appear in which bins, then minimizes the maximum load by LP on each
support.  Only the exact simplex is shared with the rest of the
package.
"""

from __future__ import annotations

from fractions import Fraction
from itertools import combinations, combinations_with_replacement
from typing import Optional

from .core import Instance, Packing, Size, ZERO, round_robin_zero_packing
from .errors import ResourceCapError
from .simplex import EQ, LE, OPTIMAL, solve_lp

DEFAULT_CELL_CAP = 20


def exact_opt(
    inst: Instance, cell_cap: int = DEFAULT_CELL_CAP
) -> Optional[tuple[Size, Packing]]:
    """Optimal maximum load and a packing achieving it, or None when the
    instance is infeasible (more items than slots).

    Enumerates bin supports as multisets of item subsets (canonical
    under bin permutation); only maximal subsets are enumerated, since
    allowing an extra item in a bin never hurts the LP below.  For each
    covering support the exact LP minimizes the maximum load.  Refuses
    instances with n*m beyond the cap.
    """
    n, m, k = inst.n, inst.m, inst.k
    if n > k * m:
        return None
    if n == 0:
        return ZERO, round_robin_zero_packing(inst)
    if n * m > cell_cap:
        raise ResourceCapError(
            f"n*m = {n * m} exceeds the oracle cap {cell_cap}"
        )

    floor_value = inst.total_size / inst.m
    columns = list(combinations(range(n), min(k, n)))
    best: Optional[tuple[Size, Packing]] = None
    for support in combinations_with_replacement(columns, m):
        covered = set()
        for col in support:
            covered.update(col)
        if len(covered) < n:
            continue
        value_pack = _solve_support(inst, support)
        if value_pack is None:
            continue
        if best is None or value_pack[0] < best[0]:
            best = value_pack
        if best[0] == floor_value:
            break
    return best


def _solve_support(
    inst: Instance, support: tuple[tuple[int, ...], ...]
) -> Optional[tuple[Size, Packing]]:
    """Minimize the maximum load given which items each bin may hold."""
    # Variable 0 is the maximum load; then one part size per (bin, item).
    var_index: dict[tuple[int, int], int] = {}
    for b, col in enumerate(support):
        for t in col:
            var_index[(b, t)] = 1 + len(var_index)
    rows = []
    for t in range(inst.n):
        coeffs = {
            var_index[(b, t)]: Fraction(1)
            for b, col in enumerate(support)
            if t in col
        }
        rows.append((coeffs, EQ, inst.items[t]))
    for b, col in enumerate(support):
        coeffs = {var_index[(b, t)]: Fraction(1) for t in col}
        coeffs[0] = Fraction(-1)
        rows.append((coeffs, LE, ZERO))
    result = solve_lp(1 + len(var_index), rows, objective={0: Fraction(1)})
    if result.status != OPTIMAL:
        return None

    bins: list[list[tuple[int, Size]]] = [[] for _ in range(inst.m)]
    placed = [False] * inst.n
    for (b, t), j in var_index.items():
        if result.x[j] > 0:
            bins[b].append((t, result.x[j]))
            placed[t] = True
    # Zero-size items (and zero parts) still need exactly one slot.
    for t in range(inst.n):
        if not placed[t]:
            b = next(b for b, col in enumerate(support) if t in col)
            bins[b].append((t, ZERO))
    return result.objective, Packing.build(bins)
