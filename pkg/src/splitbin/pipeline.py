"""End-to-end driver: guess, scale, round, enumerate, solve the MILP,
convert the solution to a packing, and lift it back to the input."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Sequence

from .core import (
    Instance,
    Packing,
    Size,
    ZERO,
    check_feasible,
    round_robin_zero_packing,
    verify_packing,
)
from .enumeration import (
    Configuration,
    DEFAULT_ENUM_LIMIT,
    Pattern,
    enumerate_configurations,
    enumerate_patterns,
)
from .errors import InfeasibleInstanceError, InternalError, ResourceCapError
from .milp import (
    DEFAULT_NODE_LIMIT,
    FEASIBLE,
    INFEASIBLE,
    MilpSolution,
    UNKNOWN,
    build_model,
    solve_milp,
)
from .assign import best_fit_integralize
from .rounding import (
    Epsilon,
    RoundedInstance,
    classify,
    guess_values,
    lift_packing,
    round_instance,
    scale_instance,
)


@dataclass
class GuessRecord:
    guess: Size
    status: str = "pending"  # infeasible | unknown | feasible
    selected: bool = False
    num_configs: int = 0
    num_patterns: int = 0
    num_variables: int = 0
    nodes: int = 0
    converted_load: Optional[Size] = None  # scaled, before lifting
    value: Optional[Size] = None


@dataclass
class PipelineTrace:
    eps_denominator: int
    records: list[GuessRecord] = field(default_factory=list)

    @property
    def selected(self) -> Optional[GuessRecord]:
        for rec in self.records:
            if rec.selected:
                return rec
        return None


def prune_patterns(
    patterns: dict[Size, list[Pattern]], m: int
) -> dict[Size, list[Pattern]]:
    """Drop patterns with more parts than bins: co-located parts of one
    item merge, so an item never has more parts than bins."""
    return {
        ell: [p for p in group if p.num_parts <= m]
        for ell, group in patterns.items()
    }


def prune_configurations(
    configs: Sequence[Configuration],
    ri: RoundedInstance,
    small: Sequence[int],
    large: Sequence[int],
    reduce_gamma: bool = True,
) -> list[Configuration]:
    """Keep only configurations some nice packing of this instance
    could realize, and (optionally) only the maximal small-mass value
    per parts vector.

    The gamma reduction is a dominance step: raising gamma only loosens
    the small-mass row, so replacing each bin's configuration by the
    same-parts one with maximal gamma preserves feasibility in both
    directions of the solve.
    """
    eps2 = ri.eps.eps2
    cap_units = int(ri.cap / eps2)
    alphas = sorted((int(ri.items[t] / eps2) for t in large), reverse=True)
    n_large = len(alphas)
    large_units_total = sum(alphas)
    small_total = sum((ri.items[t] for t in small), ZERO)
    small_units = int(small_total / eps2)
    max_parts = min(ri.instance.k, n_large)
    alpha_max = alphas[0] if alphas else 0

    # count_ge[r] = number of large items of size at least r*eps^2.
    count_ge = [0] * (cap_units + 2)
    for a in alphas:
        count_ge[min(a, cap_units)] += 1
    for r in range(cap_units - 1, 0, -1):
        count_ge[r] += count_ge[r + 1]

    kept = []
    for conf in configs:
        if conf.num_parts > max_parts:
            continue
        weight = conf.parts_weight
        if weight > large_units_total:
            continue
        ok = True
        suffix = 0
        for r in range(cap_units, 0, -1):
            suffix += conf.delta[r - 1]
            if suffix and (r > alpha_max or suffix > count_ge[r]):
                ok = False
                break
        if not ok:
            continue
        gamma_best = min(cap_units - weight, small_units)
        if conf.gamma > gamma_best:
            continue
        if reduce_gamma and conf.gamma != gamma_best:
            continue
        kept.append(conf)
    return kept


def milp_to_packing(
    sol: MilpSolution,
    ri: RoundedInstance,
    patterns: dict[Size, list[Pattern]],
    configs: Sequence[Configuration],
) -> Packing:
    """Realize a feasible MILP solution as a feasible packing of the
    rounded instance with load at most cap + eps^2 + eps."""
    eps2 = ri.eps.eps2
    eps = ri.eps.eps
    m, k = ri.instance.m, ri.instance.k
    small, large, L = classify(ri)
    cap_units = int(ri.cap / eps2)

    # Bins take configurations in enumeration order.
    bin_config: list[int] = []
    for c, count in enumerate(sol.y):
        bin_config.extend([c] * count)
    if len(bin_config) != m:
        raise InternalError(f"y sums to {len(bin_config)}, expected {m} bins")

    # Large items take pattern instances, grouped by size.
    flat: list[tuple[Size, Pattern]] = []
    for ell in L:
        flat.extend((ell, p) for p in patterns.get(ell, []))
    item_pattern: dict[int, Pattern] = {}
    for ell in L:
        items = sorted(t for t in large if ri.items[t] == ell)
        instances: list[Pattern] = []
        for p, (pell, pat) in enumerate(flat):
            if pell == ell:
                instances.extend([pat] * sol.z[p])
        if len(instances) != len(items):
            raise InternalError(
                f"{len(instances)} pattern instances for {len(items)} items "
                f"of size {ell}"
            )
        for t, pat in zip(items, instances):
            item_pattern[t] = pat

    # Match produced parts to configuration slots, smallest size first,
    # items by ascending id, bins by ascending index.
    bins: list[list[tuple[int, Size]]] = [[] for _ in range(m)]
    for r in range(1, cap_units + 1):
        parts = [
            t
            for t in sorted(item_pattern)
            for _ in range(item_pattern[t].beta[r - 1])
        ]
        slot_bins = [
            b
            for b in range(m)
            for _ in range(configs[bin_config[b]].delta[r - 1])
        ]
        if len(parts) != len(slot_bins):
            raise InternalError(
                f"{len(parts)} parts of size {r}*eps^2 for {len(slot_bins)} slots"
            )
        for t, b in zip(parts, slot_bins):
            bins[b].append((t, r * eps2))

    # Small items: spread each configuration's fractions evenly over its
    # bins, then integralize.
    if small:
        frac = []
        for t in small:
            row = [ZERO] * m
            for b in range(m):
                c = bin_config[b]
                val = sol.x.get((t, c))
                if val:
                    if sol.y[c] == 0:
                        raise InternalError(
                            f"x[{t},{c}] positive with no bin of configuration {c}"
                        )
                    row[b] = val / sol.y[c]
            frac.append(row)
        budgets = [
            (configs[bin_config[b]].gamma + 1) * eps2 for b in range(m)
        ]
        slots = [
            k - configs[bin_config[b]].num_parts for b in range(m)
        ]
        sizes = [ri.items[t] for t in small]
        assignment = best_fit_integralize(sizes, budgets, slots, frac)
        for pos, t in enumerate(small):
            bins[assignment[pos]].append((t, ri.items[t]))

    pack = Packing.build(bins)
    report = verify_packing(ri.instance, pack)
    if not report.feasible:
        raise InternalError(f"converted packing infeasible: {report.violations[:3]}")
    bound = ri.cap + eps2 + eps
    if report.max_load > bound:
        raise InternalError(
            f"converted load {report.max_load} exceeds {bound}"
        )
    return pack


def eptas_solve(
    inst: Instance,
    eps: Epsilon,
    node_limit: int = DEFAULT_NODE_LIMIT,
    enum_limit: int = DEFAULT_ENUM_LIMIT,
    reduce_gamma: bool = True,
) -> tuple[Size, Packing, PipelineTrace]:
    """Solve the instance to within (1+eps)(1+4eps)(1+2eps) of optimal.

    Iterates candidate optima in ascending order and returns at the
    first guess whose MILP is feasible.  A guess left undetermined by
    the node limit is skipped (recorded as unknown); if no guess can be
    certified feasible and at least one was unknown, the run fails
    explicitly rather than answer wrongly.
    """
    if not check_feasible(inst):
        raise InfeasibleInstanceError(
            f"{inst.n} items cannot be packed with {inst.k} parts in each of "
            f"{inst.m} bins"
        )
    trace = PipelineTrace(eps_denominator=eps.E)
    if inst.total_size == 0:
        pack = round_robin_zero_packing(inst)
        rec = GuessRecord(guess=ZERO, status="feasible", selected=True, value=ZERO)
        trace.records.append(rec)
        return ZERO, pack, trace

    cap = 1 + 4 * eps.eps
    all_configs = enumerate_configurations(eps, cap, inst.k, limit=enum_limit)
    saw_unknown = False
    for g in guess_values(inst, eps):
        rec = GuessRecord(guess=g)
        trace.records.append(rec)
        ri = round_instance(scale_instance(inst, g), eps)
        small, large, L = classify(ri)
        patterns = prune_patterns(
            enumerate_patterns(L, eps, cap, limit=enum_limit, max_parts=inst.m),
            inst.m,
        )
        configs = prune_configurations(
            all_configs, ri, small, large, reduce_gamma=reduce_gamma
        )
        model = build_model(ri, small, large, L, patterns, configs)
        rec.num_configs = len(configs)
        rec.num_patterns = model.num_patterns
        rec.num_variables = model.num_vars
        outcome = solve_milp(model, node_limit=node_limit)
        rec.nodes = outcome.nodes
        rec.status = outcome.status
        if outcome.status == UNKNOWN:
            saw_unknown = True
            continue
        if outcome.status == INFEASIBLE:
            continue
        scaled_pack = milp_to_packing(outcome.solution, ri, patterns, configs)
        rec.converted_load = scaled_pack.max_load()
        lifted = lift_packing(scaled_pack, ri, g)
        report = verify_packing(inst, lifted)
        if not report.feasible:
            raise InternalError(f"lifted packing infeasible: {report.violations[:3]}")
        rec.selected = True
        rec.value = report.max_load
        return report.max_load, lifted, trace
    if saw_unknown:
        raise ResourceCapError(
            "every guess was infeasible or hit the node limit; "
            "raise node_limit to decide the instance"
        )
    raise InternalError("no guess produced a feasible model")
