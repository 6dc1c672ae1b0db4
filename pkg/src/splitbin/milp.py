"""The feasibility MILP over configuration counters y, pattern counters
z, and fractional small-item assignments x, solved by depth-first
branch-and-bound over an exact rational simplex.

The per-size parts balance is kept as a single equality per part size
(the parts counter v is eliminated by substitution and reconstructed on
output, where it is integral because z is).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Sequence

from .core import Size, ZERO, Packing, verify_packing
from .enumeration import Configuration, Pattern
from .errors import InternalError, PreconditionError
from .rounding import Epsilon, RoundedInstance, classify
from .simplex import EQ, INFEASIBLE, LE, OPTIMAL, solve_lp

FEASIBLE = "feasible"
UNKNOWN = "unknown"

DEFAULT_NODE_LIMIT = 5000


@dataclass(frozen=True)
class MilpModel:
    """Structured description plus the explicit row system.

    Flat variable order: x[(i, c)] (small-index major), then y[c], then
    z[p] over patterns flattened in ascending large-size order.
    """

    m: int
    k: int
    eps: Epsilon
    cap: Size
    small_ids: tuple[int, ...]
    small_sizes: tuple[Size, ...]
    large_sizes: tuple[Size, ...]          # distinct, ascending
    large_counts: tuple[int, ...]          # aligned with large_sizes
    configs: tuple[Configuration, ...]
    patterns: tuple[tuple[Size, Pattern], ...]
    cap_units: int
    rows: tuple

    @property
    def num_small(self) -> int:
        return len(self.small_ids)

    @property
    def num_configs(self) -> int:
        return len(self.configs)

    @property
    def num_patterns(self) -> int:
        return len(self.patterns)

    @property
    def num_vars(self) -> int:
        return (self.num_small + 1) * self.num_configs + self.num_patterns

    def x_var(self, si: int, c: int) -> int:
        return si * self.num_configs + c

    def y_var(self, c: int) -> int:
        return self.num_small * self.num_configs + c

    def z_var(self, p: int) -> int:
        return (self.num_small + 1) * self.num_configs + p


@dataclass(frozen=True)
class MilpSolution:
    """x keyed by (small item id, configuration index); y, z, v dense."""

    x: dict[tuple[int, int], Fraction]
    y: tuple[int, ...]
    z: tuple[int, ...]
    v: tuple[int, ...]


@dataclass
class MilpOutcome:
    status: str  # feasible | infeasible | unknown
    solution: Optional[MilpSolution] = None
    nodes: int = 0


def assemble_model(
    *,
    m: int,
    k: int,
    eps: Epsilon,
    cap: Size,
    small_ids: Sequence[int],
    small_sizes: Sequence[Size],
    large_sizes: Sequence[Size],
    large_counts: Sequence[int],
    patterns: dict[Size, list[Pattern]],
    configs: Sequence[Configuration],
) -> MilpModel:
    cap_q = cap / eps.eps2
    if cap_q.denominator != 1:
        raise PreconditionError(f"cap {cap} is not a multiple of eps^2")
    cap_units = cap_q.numerator

    flat_patterns: list[tuple[Size, Pattern]] = []
    for ell, count in zip(large_sizes, large_counts):
        group = patterns.get(ell)
        if not group:
            raise PreconditionError(f"no pattern group for large size {ell}")
        flat_patterns.extend((ell, p) for p in group)

    model = MilpModel(
        m=m,
        k=k,
        eps=eps,
        cap=cap,
        small_ids=tuple(small_ids),
        small_sizes=tuple(small_sizes),
        large_sizes=tuple(large_sizes),
        large_counts=tuple(large_counts),
        configs=tuple(configs),
        patterns=tuple(flat_patterns),
        cap_units=cap_units,
        rows=(),
    )
    object.__setattr__(model, "rows", tuple(_build_rows(model)))
    return model


def _build_rows(model: MilpModel):
    nS, nC = model.num_small, model.num_configs
    eps2 = model.eps.eps2
    rows = []
    # Every bin carries a configuration.
    rows.append(
        ("bins", {model.y_var(c): Fraction(1) for c in range(nC)}, EQ, Fraction(model.m))
    )
    # Every small item is packed completely.
    for si in range(nS):
        rows.append(
            (
                f"small[{model.small_ids[si]}]",
                {model.x_var(si, c): Fraction(1) for c in range(nC)},
                EQ,
                Fraction(1),
            )
        )
    # Parts balance per part size (v eliminated).
    for r in range(1, model.cap_units + 1):
        coeffs: dict[int, Fraction] = {}
        for c, conf in enumerate(model.configs):
            d = conf.delta[r - 1]
            if d:
                coeffs[model.y_var(c)] = Fraction(d)
        for p, (_, pat) in enumerate(model.patterns):
            b = pat.beta[r - 1]
            if b:
                coeffs[model.z_var(p)] = Fraction(-b)
        rows.append((f"parts[{r}]", coeffs, EQ, Fraction(0)))
    # Every large item gets a pattern.
    for ell, count in zip(model.large_sizes, model.large_counts):
        coeffs = {
            model.z_var(p): Fraction(1)
            for p, (pell, _) in enumerate(model.patterns)
            if pell == ell
        }
        rows.append((f"pattern[{ell}]", coeffs, EQ, Fraction(count)))
    # Per configuration: cardinality and small-mass capacity.  With no
    # small items both reduce to -const * y[c] <= 0, true for any y >= 0.
    if nS == 0:
        return rows
    for c, conf in enumerate(model.configs):
        slack = model.k - conf.num_parts
        coeffs = {model.x_var(si, c): Fraction(1) for si in range(nS)}
        coeffs[model.y_var(c)] = Fraction(-slack)
        rows.append((f"card[{c}]", coeffs, LE, Fraction(0)))
        coeffs = {
            model.x_var(si, c): model.small_sizes[si]
            for si in range(nS)
            if model.small_sizes[si]
        }
        coeffs[model.y_var(c)] = -(conf.gamma + 1) * eps2
        rows.append((f"space[{c}]", coeffs, LE, Fraction(0)))
    return rows


def build_model(
    ri: RoundedInstance,
    small: Sequence[int],
    large: Sequence[int],
    L: Sequence[Size],
    patterns: dict[Size, list[Pattern]],
    configs: Sequence[Configuration],
) -> MilpModel:
    counts = [sum(1 for t in large if ri.items[t] == ell) for ell in L]
    return assemble_model(
        m=ri.instance.m,
        k=ri.instance.k,
        eps=ri.eps,
        cap=ri.cap,
        small_ids=small,
        small_sizes=[ri.items[t] for t in small],
        large_sizes=L,
        large_counts=counts,
        patterns=patterns,
        configs=configs,
    )


def _solution_values(model: MilpModel, sol: MilpSolution) -> dict[int, Fraction]:
    values: dict[int, Fraction] = {}
    pos = {item_id: si for si, item_id in enumerate(model.small_ids)}
    for (item_id, c), val in sol.x.items():
        if item_id not in pos or not 0 <= c < model.num_configs:
            raise PreconditionError(f"x key ({item_id}, {c}) not in model")
        values[model.x_var(pos[item_id], c)] = Fraction(val)
    for c, val in enumerate(sol.y):
        values[model.y_var(c)] = Fraction(val)
    for p, val in enumerate(sol.z):
        values[model.z_var(p)] = Fraction(val)
    return values


def check_solution(model: MilpModel, sol: MilpSolution) -> list[str]:
    """Exact verification of every model row plus integrality and the
    parts-counter identities; returns human-readable violations."""
    out: list[str] = []
    if len(sol.y) != model.num_configs or len(sol.z) != model.num_patterns:
        return ["solution shape does not match model"]
    values = _solution_values(model, sol)
    for val in values.values():
        if val < 0:
            out.append("negative variable value")
            break
    for c, val in enumerate(sol.y):
        if val != int(val):
            out.append(f"y[{c}] = {val} not integral")
    for p, val in enumerate(sol.z):
        if val != int(val):
            out.append(f"z[{p}] = {val} not integral")
    for name, coeffs, sense, rhs in model.rows:
        lhs = sum((v * values.get(j, ZERO) for j, v in coeffs.items()), ZERO)
        ok = lhs == rhs if sense == EQ else lhs <= rhs
        if not ok:
            out.append(f"row {name}: {lhs} {sense} {rhs} violated")
    if len(sol.v) != model.cap_units:
        out.append("v has wrong length")
    else:
        for r in range(1, model.cap_units + 1):
            from_z = sum(
                pat.beta[r - 1] * sol.z[p] for p, (_, pat) in enumerate(model.patterns)
            )
            from_y = sum(
                conf.delta[r - 1] * sol.y[c] for c, conf in enumerate(model.configs)
            )
            if sol.v[r - 1] != from_z:
                out.append(f"v[{r}] != pattern parts count")
            if from_z != from_y:
                out.append(f"parts balance broken at size {r}")
            if sol.v[r - 1] < 0:
                out.append(f"v[{r}] negative")
    return out


def dump_model(model: MilpModel) -> str:
    """Plain-text rendering, one constraint per line, rational
    coefficients as p/q.  Debugging aid only."""

    def var_name(j: int) -> str:
        nS, nC = model.num_small, model.num_configs
        if j < nS * nC:
            si, c = divmod(j, nC)
            return f"x[{model.small_ids[si]},{c}]"
        if j < (nS + 1) * nC:
            return f"y[{j - nS * nC}]"
        return f"z[{j - (nS + 1) * nC}]"

    lines = [
        f"# vars: {model.num_vars} "
        f"(x {model.num_small}x{model.num_configs}, y {model.num_configs}, "
        f"z {model.num_patterns}); integer: y, z"
    ]
    for name, coeffs, sense, rhs in model.rows:
        terms = " + ".join(
            f"{v} {var_name(j)}" for j, v in sorted(coeffs.items())
        )
        lines.append(f"{name}: {terms or '0'} {sense} {rhs}")
    return "\n".join(lines)


def packing_to_milp_solution(
    nice: Packing,
    ri: RoundedInstance,
    patterns: dict[Size, list[Pattern]],
    configs: Sequence[Configuration],
) -> MilpSolution:
    """Encode a nice packing (all large parts multiples of eps^2, load
    at most cap) as a feasible solution of the model built from the
    same pattern/configuration lists."""
    report = verify_packing(ri.instance, nice)
    if not report.feasible:
        raise PreconditionError(f"packing not feasible: {report.violations[:3]}")
    if report.max_load > ri.cap:
        raise PreconditionError(
            f"packing load {report.max_load} exceeds cap {ri.cap}"
        )
    eps2 = ri.eps.eps2
    small, large, L = classify(ri)
    small_set = set(small)
    cap_q = ri.cap / eps2
    cap_units = cap_q.numerator

    config_index = {(conf.gamma, conf.delta): c for c, conf in enumerate(configs)}
    flat: list[tuple[Size, Pattern]] = []
    for ell in L:
        flat.extend((ell, p) for p in patterns.get(ell, []))
    pattern_index = {(pat.alpha, pat.beta): p for p, (_, pat) in enumerate(flat)}

    y = [0] * len(configs)
    z = [0] * len(flat)
    x: dict[tuple[int, int], Fraction] = {}

    item_parts: dict[int, list[int]] = {t: [] for t in large}
    bin_configs: list[int] = []
    for b, entries in enumerate(nice.bins):
        small_mass = ZERO
        delta = [0] * cap_units
        for item_id, part in entries:
            if item_id in small_set:
                small_mass += part
            else:
                q = part / eps2
                if q.denominator != 1:
                    raise PreconditionError(
                        f"large part {part} of item {item_id} in bin {b} "
                        "is not a multiple of eps^2"
                    )
                r = q.numerator
                delta[r - 1] += 1
                item_parts[item_id].append(r)
        gamma = int(small_mass / eps2)
        key = (gamma, tuple(delta))
        if key not in config_index:
            raise PreconditionError(
                f"bin {b} realizes configuration {key} absent from the list"
            )
        c = config_index[key]
        y[c] += 1
        bin_configs.append(c)
        for item_id, part in entries:
            if item_id in small_set:
                size = ri.items[item_id]
                share = part / size if size else Fraction(1)
                x[(item_id, c)] = x.get((item_id, c), ZERO) + share

    for item_id in large:
        alpha_q = ri.items[item_id] / eps2
        alpha = alpha_q.numerator
        beta = [0] * cap_units
        for r in item_parts[item_id]:
            beta[r - 1] += 1
        key = (alpha, tuple(beta))
        if key not in pattern_index:
            raise PreconditionError(
                f"item {item_id} realizes pattern {key} absent from the list"
            )
        z[pattern_index[key]] += 1

    v = [
        sum(pat.beta[r] * z[p] for p, (_, pat) in enumerate(flat))
        for r in range(cap_units)
    ]
    return MilpSolution(x=x, y=tuple(y), z=tuple(z), v=tuple(v))


# ---------------------------------------------------------------------------
# Branch-and-bound solver


def solve_milp(
    model: MilpModel, node_limit: int = DEFAULT_NODE_LIMIT
) -> MilpOutcome:
    """Find some exact feasible solution, or prove there is none.

    Branch-and-bound over the integer variables (y, z) with an exact
    rational simplex at every node; small-item columns are aggregated
    over configurations with identical cardinality-slack and space
    coefficients (an exact, invertible presolve).  A node-limit hit is
    reported as "unknown", never as infeasibility.
    """
    agg = _AggregatedLp(model)
    stack: list[list] = [[]]
    nodes = 0
    while stack:
        if nodes >= node_limit:
            return MilpOutcome(status=UNKNOWN, nodes=nodes)
        bounds = stack.pop()
        nodes += 1
        result = solve_lp(agg.num_vars, agg.rows + bounds)
        if result.status == INFEASIBLE:
            continue
        if result.status != OPTIMAL:
            raise InternalError(f"unexpected LP status {result.status}")
        frac_var = -1
        frac_score = Fraction(0)
        for j in range(agg.num_int):
            val = result.x[j]
            dist = min(val - int(val), int(val) + 1 - val)
            if dist > frac_score:
                frac_score = dist
                frac_var = j
        if frac_var < 0:
            solution = agg.extract(result.x)
            problems = check_solution(model, solution)
            if problems:
                raise InternalError(f"solver produced invalid solution: {problems[:3]}")
            return MilpOutcome(status=FEASIBLE, solution=solution, nodes=nodes)
        val = result.x[frac_var]
        floor = int(val)
        # Depth-first; the bound nearer the LP value is explored first
        # (LIFO push order), diving toward integer solutions.
        down = [({frac_var: Fraction(1)}, "<=", Fraction(floor))]
        up = [({frac_var: Fraction(1)}, ">=", Fraction(floor + 1))]
        if val - floor > Fraction(1, 2):
            stack.append(bounds + down)
            stack.append(bounds + up)
        else:
            stack.append(bounds + up)
            stack.append(bounds + down)
    return MilpOutcome(status=INFEASIBLE, nodes=nodes)


class _AggregatedLp:
    """LP relaxation with x columns pooled per (slack, gamma) class.

    Variable order: y (integer), z (integer), then pooled x.  The
    pooling is exact: any pooled solution disaggregates to a per-config
    solution by splitting proportionally to the y values, and any
    per-config solution aggregates by summation.
    """

    def __init__(self, model: MilpModel):
        self.model = model
        nC, nP, nS = model.num_configs, model.num_patterns, model.num_small
        self.num_int = nC + nP
        eps2 = model.eps.eps2

        group_of: list[int] = []
        group_keys: list[tuple[int, int]] = []
        key_index: dict[tuple[int, int], int] = {}
        for conf in model.configs:
            key = (model.k - conf.num_parts, conf.gamma)
            if key not in key_index:
                key_index[key] = len(group_keys)
                group_keys.append(key)
            group_of.append(key_index[key])
        self.group_of = group_of
        self.group_keys = group_keys
        nG = len(group_keys)
        self.num_vars = nC + nP + (nS * nG if nS else 0)

        def xg(si: int, g: int) -> int:
            return nC + nP + si * nG + g

        self.xg = xg
        rows = []
        rows.append(({c: Fraction(1) for c in range(nC)}, EQ, Fraction(model.m)))
        for r in range(1, model.cap_units + 1):
            coeffs: dict[int, Fraction] = {}
            for c, conf in enumerate(model.configs):
                if conf.delta[r - 1]:
                    coeffs[c] = Fraction(conf.delta[r - 1])
            for p, (_, pat) in enumerate(model.patterns):
                if pat.beta[r - 1]:
                    coeffs[nC + p] = Fraction(-pat.beta[r - 1])
            rows.append((coeffs, EQ, Fraction(0)))
        for ell, count in zip(model.large_sizes, model.large_counts):
            coeffs = {
                nC + p: Fraction(1)
                for p, (pell, _) in enumerate(model.patterns)
                if pell == ell
            }
            rows.append((coeffs, EQ, Fraction(count)))
        if nS:
            for si in range(nS):
                rows.append(
                    ({xg(si, g): Fraction(1) for g in range(nG)}, EQ, Fraction(1))
                )
            members: list[list[int]] = [[] for _ in range(nG)]
            for c, g in enumerate(group_of):
                members[g].append(c)
            for g, (slack, gamma) in enumerate(group_keys):
                coeffs = {xg(si, g): Fraction(1) for si in range(nS)}
                for c in members[g]:
                    coeffs[c] = Fraction(-slack)
                rows.append((coeffs, LE, Fraction(0)))
                coeffs = {
                    xg(si, g): model.small_sizes[si]
                    for si in range(nS)
                    if model.small_sizes[si]
                }
                for c in members[g]:
                    coeffs[c] = -(gamma + 1) * eps2
                rows.append((coeffs, LE, Fraction(0)))
        self.rows = rows

    def extract(self, lp_x: list[Fraction]) -> MilpSolution:
        model = self.model
        nC, nP, nS = model.num_configs, model.num_patterns, model.num_small
        y = tuple(int(lp_x[c]) for c in range(nC))
        z = tuple(int(lp_x[nC + p]) for p in range(nP))
        group_totals = [0] * len(self.group_keys)
        for c, g in enumerate(self.group_of):
            group_totals[g] += y[c]
        x: dict[tuple[int, int], Fraction] = {}
        for si in range(nS):
            item_id = model.small_ids[si]
            for c, g in enumerate(self.group_of):
                if y[c] == 0:
                    continue
                pooled = lp_x[self.xg(si, g)]
                if pooled:
                    x[(item_id, c)] = pooled * y[c] / group_totals[g]
        v = tuple(
            sum(pat.beta[r] * z[p] for p, (_, pat) in enumerate(model.patterns))
            for r in range(model.cap_units)
        )
        return MilpSolution(x=x, y=y, z=z, v=v)
