"""Rounding subroutines: fractional-assignment rounding with bounded
per-bin overflow, the nice-packing transform built on it, and best-fit
integralization of small items."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

from .core import Packing, Size, ZERO, verify_packing
from .errors import InternalError, PreconditionError, ResourceCapError
from .rounding import RoundedInstance, classify
from .simplex import EQ, LE, OPTIMAL, solve_lp

DEFAULT_AUX_LIMIT = 200_000


@dataclass
class FractionalAssignment:
    """A feasible point of the bounded-slack assignment LP.

    x[i][j] is the fraction of item i in bin j; sizes[i][j] is the size
    of i when placed in j, None marking a forbidden pair; capacities[j]
    bounds the fractional load of bin j; slack is the allowed per-bin
    overflow of the rounded assignment (pairs with size > slack are
    forbidden).
    """

    x: list[list[Fraction]]
    sizes: list[list[Optional[Size]]]
    capacities: list[Size]
    slack: Size

    @property
    def num_items(self) -> int:
        return len(self.x)

    @property
    def num_bins(self) -> int:
        return len(self.capacities)

    def problems(self) -> list[str]:
        out = []
        for i, row in enumerate(self.x):
            total = ZERO
            for j, val in enumerate(row):
                if val < 0:
                    out.append(f"x[{i}][{j}] negative")
                size = self.sizes[i][j]
                if val > 0 and (size is None or size > self.slack):
                    out.append(f"x[{i}][{j}] positive on a forbidden pair")
                total += val
            if total != 1:
                out.append(f"row {i} sums to {total}, not 1")
        for j in range(self.num_bins):
            load = sum(
                (
                    self.sizes[i][j] * self.x[i][j]
                    for i in range(self.num_items)
                    if self.x[i][j] > 0 and self.sizes[i][j] is not None
                ),
                ZERO,
            )
            if load > self.capacities[j]:
                out.append(f"bin {j} fractional load {load} > {self.capacities[j]}")
        return out


def _saturating_matching(
    edges: dict[int, list[int]], items: Sequence[int]
) -> dict[int, int]:
    """Match every given item to a distinct bin along the given edges
    (augmenting-path search)."""
    owner: dict[int, int] = {}

    def try_assign(i: int, visited: set[int]) -> bool:
        for j in edges.get(i, []):
            if j in visited:
                continue
            visited.add(j)
            if j not in owner or try_assign(owner[j], visited):
                owner[j] = i
                return True
        return False

    for i in items:
        if not try_assign(i, set()):
            raise InternalError(f"no saturating matching for fractional item {i}")
    return {i: j for j, i in owner.items()}


def lst_round(fa: FractionalAssignment) -> list[int]:
    """Round a feasible fractional assignment to an integral one.

    Returns the bin of each item.  Guarantees: per-bin load at most
    capacity + slack, and an item lands only in a bin where its input
    fraction was positive.
    """
    problems = fa.problems()
    if problems:
        raise PreconditionError(f"assignment violates its LP: {problems[:3]}")
    n, m = fa.num_items, fa.num_bins

    # Re-solve restricted to the input support; the simplex returns a
    # vertex, whose support graph is sparse enough to round.
    support = [
        [(i, j) for j in range(m) if fa.x[i][j] > 0] for i in range(n)
    ]
    var_index: dict[tuple[int, int], int] = {}
    for pairs in support:
        for pair in pairs:
            var_index[pair] = len(var_index)
    rows = []
    for i in range(n):
        rows.append(
            ({var_index[p]: Fraction(1) for p in support[i]}, EQ, Fraction(1))
        )
    for j in range(m):
        coeffs = {
            var_index[(i, j)]: fa.sizes[i][j]
            for i in range(n)
            if (i, j) in var_index and fa.sizes[i][j]
        }
        rows.append((coeffs, LE, fa.capacities[j]))
    result = solve_lp(len(var_index), rows)
    if result.status != OPTIMAL:
        raise InternalError(f"support-restricted LP is {result.status}")

    assignment = [-1] * n
    edges: dict[int, list[int]] = {}
    fractional = []
    for i in range(n):
        positives = [
            (j, result.x[var_index[(i, j)]])
            for (_, j) in support[i]
            if result.x[var_index[(i, j)]] > 0
        ]
        if len(positives) == 1:
            assignment[i] = positives[0][0]
        else:
            edges[i] = [j for j, _ in positives]
            fractional.append(i)

    matched = _saturating_matching(edges, fractional)
    for i in fractional:
        assignment[i] = matched[i]

    loads = [ZERO] * m
    for i, j in enumerate(assignment):
        loads[j] += fa.sizes[i][j]
        if fa.x[i][j] <= 0:
            raise InternalError("rounded assignment left the input support")
    for j in range(m):
        if loads[j] > fa.capacities[j] + fa.slack:
            raise InternalError(
                f"bin {j} load {loads[j]} exceeds {fa.capacities[j]} + {fa.slack}"
            )
    return assignment


def nice_packing(
    pack: Packing, ri: RoundedInstance, aux_limit: int = DEFAULT_AUX_LIMIT
) -> Packing:
    """Rebuild the large-item parts of a feasible packing so that every
    part is an integer multiple of eps^2.

    Each large item of size q*eps^2 is viewed as q unit cells laid out
    along the item; the fractional cell-to-bin overlap is rounded with
    lst_round at slack eps^2.  Per-bin load grows by at most eps^2,
    per-bin distinct-part counts never grow, small parts are untouched.
    """
    report = verify_packing(ri.instance, pack)
    if not report.feasible:
        raise PreconditionError(f"packing not feasible: {report.violations[:3]}")
    eps2 = ri.eps.eps2
    small, large, _ = classify(ri)
    small_set = set(small)
    m = ri.instance.m

    small_mass = [ZERO] * m
    small_entries: list[list[tuple[int, Size]]] = [[] for _ in range(m)]
    large_parts: dict[int, list[tuple[int, Size]]] = {t: [] for t in large}
    for b, entries in enumerate(pack.bins):
        for item_id, part in entries:
            if item_id in small_set:
                small_mass[b] += part
                small_entries[b].append((item_id, part))
            else:
                large_parts[item_id].append((b, part))

    # One aux cell per eps^2 unit of each large item; x = overlap share.
    aux_owner: list[int] = []
    aux_x: list[list[Fraction]] = []
    total_cells = 0
    for item_id in large:
        q = ri.items[item_id] / eps2
        if q.denominator != 1:
            raise PreconditionError(
                f"large item {item_id} size {ri.items[item_id]} is not a "
                "multiple of eps^2"
            )
        total_cells += q.numerator
        if total_cells > aux_limit:
            raise ResourceCapError(
                f"more than {aux_limit} unit cells needed for the rebuild"
            )
        offset = ZERO
        spans = []
        for b, part in large_parts[item_id]:
            spans.append((b, offset, offset + part))
            offset += part
        for a in range(q.numerator):
            lo = a * eps2
            hi = lo + eps2
            row = [ZERO] * m
            for b, s_lo, s_hi in spans:
                overlap = min(hi, s_hi) - max(lo, s_lo)
                if overlap > 0:
                    row[b] += overlap / eps2
            aux_owner.append(item_id)
            aux_x.append(row)

    capacities = [pack.bin_load(b) - small_mass[b] for b in range(m)]
    sizes = [
        [eps2 if row[b] > 0 else None for b in range(m)] for row in aux_x
    ]
    fa = FractionalAssignment(
        x=aux_x, sizes=sizes, capacities=capacities, slack=eps2
    )
    assignment = lst_round(fa)

    cell_count: dict[tuple[int, int], int] = {}
    for a, b in enumerate(assignment):
        key = (aux_owner[a], b)
        cell_count[key] = cell_count.get(key, 0) + 1

    bins: list[list[tuple[int, Size]]] = [list(small_entries[b]) for b in range(m)]
    for (item_id, b), count in sorted(cell_count.items()):
        bins[b].append((item_id, count * eps2))
    rebuilt = Packing.build(bins)

    out_report = verify_packing(ri.instance, rebuilt)
    if not out_report.feasible:
        raise InternalError(f"rebuilt packing infeasible: {out_report.violations[:3]}")
    for b in range(m):
        if rebuilt.bin_load(b) > pack.bin_load(b) + eps2:
            raise InternalError(f"bin {b} grew by more than eps^2")
        if len(rebuilt.bins[b]) > len(pack.bins[b]):
            raise InternalError(f"bin {b} part count increased")
    return rebuilt


def best_fit_integralize(
    sizes: Sequence[Size],
    budgets: Sequence[Size],
    slots: Sequence[int],
    x: Sequence[Sequence[Fraction]],
) -> list[int]:
    """Turn an LP-feasible fractional small-item assignment into an
    integral one: loads stay within budget + max item size, per-bin item
    counts stay within the slot bounds.

    Greedy: items in non-increasing size order, each to the bin with
    the most remaining room among bins with a free slot, ties to the
    lowest bin index.  The contract is re-verified; a violation is an
    internal error, not a caller error.
    """
    n, m = len(sizes), len(budgets)
    problems = []
    for i in range(n):
        row_sum = sum(x[i], ZERO)
        if row_sum != 1:
            problems.append(f"row {i} sums to {row_sum}")
        if any(v < 0 for v in x[i]):
            problems.append(f"row {i} has a negative entry")
    for b in range(m):
        load = sum((sizes[i] * x[i][b] for i in range(n)), ZERO)
        count = sum((x[i][b] for i in range(n)), ZERO)
        if load > budgets[b]:
            problems.append(f"bin {b} fractional load {load} > {budgets[b]}")
        if count > slots[b]:
            problems.append(f"bin {b} fractional count {count} > {slots[b]}")
    if problems:
        raise PreconditionError(f"fractional assignment infeasible: {problems[:3]}")

    s_max = max(sizes, default=ZERO)

    # An assignment that is already integral is feasible as given (the
    # precondition bounds hold with zero rounding loss); keep it.
    integral = [
        next((b for b in range(m) if x[i][b] == 1), -1) for i in range(n)
    ]
    if all(b >= 0 for b in integral):
        return integral

    loads = [ZERO] * m
    counts = [0] * m
    assignment = [-1] * n
    order = sorted(range(n), key=lambda i: (-sizes[i], i))
    for i in order:
        candidates = [b for b in range(m) if counts[b] < slots[b]]
        if not candidates:
            raise InternalError("no bin with a free slot left")
        b = max(candidates, key=lambda b: (budgets[b] + s_max - loads[b], -b))
        assignment[i] = b
        loads[b] += sizes[i]
        counts[b] += 1
    for b in range(m):
        if loads[b] > budgets[b] + s_max:
            raise InternalError(f"bin {b} load {loads[b]} > {budgets[b]} + {s_max}")
        if counts[b] > slots[b]:
            raise InternalError(f"bin {b} count {counts[b]} > {slots[b]}")
    return assignment
