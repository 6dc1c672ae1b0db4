import itertools
import random
from fractions import Fraction

import pytest

from splitbin.core import Instance, Packing
from splitbin.enumeration import (
    Configuration,
    Pattern,
    enumerate_configurations,
    enumerate_patterns,
)
from splitbin.errors import PreconditionError
from splitbin.milp import (
    FEASIBLE,
    INFEASIBLE,
    UNKNOWN,
    MilpSolution,
    assemble_model,
    build_model,
    check_solution,
    dump_model,
    packing_to_milp_solution,
    solve_milp,
)
from splitbin.rounding import Epsilon, classify, round_instance
from splitbin.simplex import EQ, LE, OPTIMAL, solve_lp

F = Fraction


def toy_model(
    *,
    m,
    k,
    E=2,
    cap=F(1, 2),
    small_sizes=(),
    large=(),  # sequence of (size, count)
):
    """Assemble a model over the full enumerated pattern/config lists
    for a tiny cap, so exhaustive integer search stays cheap."""
    eps = Epsilon(E)
    configs = enumerate_configurations(eps, cap, k)
    large_sizes = [s for s, _ in large]
    patterns = enumerate_patterns(large_sizes, eps, cap) if large else {}
    return assemble_model(
        m=m,
        k=k,
        eps=eps,
        cap=cap,
        small_ids=list(range(len(small_sizes))),
        small_sizes=list(small_sizes),
        large_sizes=large_sizes,
        large_counts=[c for _, c in large],
        patterns=patterns,
        configs=configs,
    )


def exhaustive_feasible(model):
    """Independent oracle: try every integer (y, z) within bounds and
    check the continuous x part with a feasibility LP."""
    nC, nP, nS = model.num_configs, model.num_patterns, model.num_small
    eps2 = model.eps.eps2

    def compositions(total, parts):
        if parts == 1:
            yield (total,)
            return
        for first in range(total + 1):
            for rest in compositions(total - first, parts - 1):
                yield (first,) + rest

    z_groups = []
    for ell, count in zip(model.large_sizes, model.large_counts):
        idx = [p for p, (pell, _) in enumerate(model.patterns) if pell == ell]
        z_groups.append((idx, count))

    def z_candidates():
        pools = [
            list(compositions(count, len(idx))) for idx, count in z_groups
        ]
        for combo in itertools.product(*pools) if pools else [()]:
            z = [0] * nP
            for (idx, _), values in zip(z_groups, combo):
                for p, v in zip(idx, values):
                    z[p] = v
            yield tuple(z)

    for y in compositions(model.m, nC) if nC else [()]:
        for z in z_candidates():
            ok = True
            for r in range(1, model.cap_units + 1):
                from_y = sum(
                    conf.delta[r - 1] * y[c]
                    for c, conf in enumerate(model.configs)
                )
                from_z = sum(
                    pat.beta[r - 1] * z[p]
                    for p, (_, pat) in enumerate(model.patterns)
                )
                if from_y != from_z:
                    ok = False
                    break
            if not ok:
                continue
            if nS == 0:
                return True
            rows = []
            for si in range(nS):
                rows.append(
                    ({si * nC + c: F(1) for c in range(nC)}, EQ, F(1))
                )
            for c, conf in enumerate(model.configs):
                slack = model.k - conf.num_parts
                rows.append(
                    (
                        {si * nC + c: F(1) for si in range(nS)},
                        LE,
                        F(slack * y[c]),
                    )
                )
                rows.append(
                    (
                        {
                            si * nC + c: model.small_sizes[si]
                            for si in range(nS)
                            if model.small_sizes[si]
                        },
                        LE,
                        (conf.gamma + 1) * eps2 * y[c],
                    )
                )
            if solve_lp(nS * nC, rows).status == OPTIMAL:
                return True
    return False


class TestModelShape:
    def test_variable_count_formula(self):
        model = toy_model(m=2, k=2, small_sizes=(F(1, 8), F(1, 16)))
        assert (
            model.num_vars
            == model.num_small * model.num_configs
            + model.num_configs
            + model.num_patterns
        )

    def test_no_large_items_parts_rows_force_zero(self):
        model = toy_model(m=1, k=2, small_sizes=(F(1, 8),))
        parts_rows = [row for row in model.rows if row[0].startswith("parts[")]
        assert len(parts_rows) == model.cap_units
        for _, coeffs, sense, rhs in parts_rows:
            assert sense == EQ and rhs == 0
            assert all(j >= model.num_small * model.num_configs for j in coeffs)

    def test_missing_pattern_group_rejected(self):
        eps = Epsilon(2)
        with pytest.raises(PreconditionError):
            assemble_model(
                m=1,
                k=2,
                eps=eps,
                cap=F(1, 2),
                small_ids=[],
                small_sizes=[],
                large_sizes=[F(1, 2)],
                large_counts=[1],
                patterns={},
                configs=enumerate_configurations(eps, F(1, 2), 2),
            )

    def test_cap_must_be_multiple_of_eps2(self):
        with pytest.raises(PreconditionError):
            toy_model(m=1, k=1, cap=F(1, 3))

    def test_dump_model_mentions_every_row(self):
        model = toy_model(m=2, k=2, small_sizes=(F(1, 8),))
        text = dump_model(model)
        for name, _, _, _ in model.rows:
            assert name in text
        assert "integer: y, z" in text


class TestSolveMilp:
    def test_m0_with_small_items_infeasible(self):
        model = toy_model(m=0, k=2, small_sizes=(F(1, 8),))
        assert solve_milp(model).status == INFEASIBLE

    def test_node_limit_reports_unknown(self):
        model = toy_model(m=2, k=2, small_sizes=(F(1, 8), F(1, 16)))
        outcome = solve_milp(model, node_limit=0)
        assert outcome.status == UNKNOWN and outcome.solution is None

    def test_feasible_solution_checks_out(self):
        model = toy_model(
            m=2, k=2, small_sizes=(F(1, 8), F(1, 16)), large=[(F(1, 2), 1)]
        )
        outcome = solve_milp(model)
        assert outcome.status == FEASIBLE
        assert check_solution(model, outcome.solution) == []

    def test_against_exhaustive_oracle(self):
        rng = random.Random(21)
        agree_feasible = agree_infeasible = 0
        for trial in range(40):
            m = rng.randint(0, 3)
            k = rng.randint(1, 2)
            smalls = tuple(
                F(rng.randint(1, 7), 32) for _ in range(rng.randint(0, 2))
            )
            large = []
            if rng.random() < 0.7:
                size = rng.choice([F(1, 4), F(1, 2)])
                large = [(size, rng.randint(1, min(3, max(1, m * k))))]
            model = toy_model(m=m, k=k, small_sizes=smalls, large=large)
            outcome = solve_milp(model)
            expect = exhaustive_feasible(model)
            assert (outcome.status == FEASIBLE) == expect, f"trial={trial}"
            if expect:
                agree_feasible += 1
                assert check_solution(model, outcome.solution) == []
            else:
                agree_infeasible += 1
                assert outcome.status == INFEASIBLE
        assert agree_feasible >= 5 and agree_infeasible >= 5


class TestCheckSolution:
    def test_flags_broken_rows(self):
        model = toy_model(m=1, k=2, small_sizes=(F(1, 8),))
        outcome = solve_milp(model)
        sol = outcome.solution
        bad = MilpSolution(
            x=dict(sol.x), y=(0,) * model.num_configs, z=sol.z, v=sol.v
        )
        assert any("bins" in p for p in check_solution(model, bad))

    def test_flags_non_integral_y(self):
        model = toy_model(m=1, k=2, small_sizes=())
        sol = solve_milp(model).solution
        y = list(sol.y)
        c = y.index(1)
        bad_y = tuple(F(1, 2) if i == c else F(v) for i, v in enumerate(y))
        bad = MilpSolution(x=sol.x, y=bad_y, z=sol.z, v=sol.v)
        assert any("not integral" in p for p in check_solution(model, bad))


class TestPackingEncoder:
    def test_gamma_is_floored_small_mass(self):
        eps = Epsilon(10)
        inst = Instance(items=(F(9, 100), F(9, 100), F(8, 100)), m=1, k=3)
        ri = round_instance(inst, eps)
        pack = Packing.build(
            [[(0, F(9, 100)), (1, F(9, 100)), (2, F(8, 100))]]
        )
        configs = [Configuration(gamma=26, delta=(0,) * 140)]
        sol = packing_to_milp_solution(pack, ri, {}, configs)
        assert sol.y == (1,)
        assert sum(sol.x.values()) == 3  # three whole small items

    def test_pattern_read_off(self):
        eps = Epsilon(10)
        inst = Instance(items=(F(1, 2),), m=2, k=1)
        ri = round_instance(inst, eps)
        pack = Packing.build([[(0, F(2, 10))], [(0, F(3, 10))]])
        beta = [0] * 140
        beta[19] = 1
        beta[29] = 1
        pattern = Pattern(alpha=50, beta=tuple(beta))
        d20 = [0] * 140
        d20[19] = 1
        d30 = [0] * 140
        d30[29] = 1
        configs = [
            Configuration(gamma=0, delta=tuple(d20)),
            Configuration(gamma=0, delta=tuple(d30)),
        ]
        patterns = {F(1, 2): [pattern]}
        sol = packing_to_milp_solution(pack, ri, patterns, configs)
        assert sol.z == (1,)
        assert sorted(sol.y) == [1, 1]
        assert sol.v[19] == 1 and sol.v[29] == 1
        model = build_model(ri, [], [0], [F(1, 2)], patterns, configs)
        assert check_solution(model, sol) == []

    def test_rejects_non_nice_packing(self):
        eps = Epsilon(10)
        inst = Instance(items=(F(1, 2),), m=2, k=1)
        ri = round_instance(inst, eps)
        pack = Packing.build([[(0, F(23, 100))], [(0, F(27, 100))]])
        beta = [0] * 140
        beta[49] = 1
        patterns = {F(1, 2): [Pattern(alpha=50, beta=tuple(beta))]}
        with pytest.raises(PreconditionError):
            packing_to_milp_solution(pack, ri, patterns, [])

    def test_rejects_overloaded_packing(self):
        eps = Epsilon(2)
        inst = Instance(items=(F(2), F(2)), m=1, k=2)
        ri = round_instance(inst, eps)
        pack = Packing.build([[(0, F(2)), (1, F(2))]])  # load 4 > cap 3
        with pytest.raises(PreconditionError):
            packing_to_milp_solution(pack, ri, {}, [])
