import itertools
import random
from fractions import Fraction

import pytest

from splitbin.core import Instance, lower_bound, verify_packing
from splitbin.errors import ResourceCapError
from splitbin.oracle import exact_opt
from tests.conftest import rand_instance, rand_size

F = Fraction


def no_split_makespan(items, m, k):
    """Brute force over whole-item assignments (no splitting): minimum
    possible maximum load with at most k items per bin."""
    best = None
    for labels in itertools.product(range(m), repeat=len(items)):
        loads = [F(0)] * m
        counts = [0] * m
        ok = True
        for t, b in enumerate(labels):
            loads[b] += items[t]
            counts[b] += 1
            if counts[b] > k:
                ok = False
                break
        if ok:
            top = max(loads)
            if best is None or top < best:
                best = top
    return best


class TestHandCases:
    def test_three_threes(self):
        inst = Instance(items=(F(3), F(3), F(3)), m=2, k=2)
        value, pack = exact_opt(inst)
        assert value == F(9, 2)
        report = verify_packing(inst, pack)
        assert report.feasible and report.max_load == F(9, 2)

    def test_four_ones(self):
        inst = Instance(items=(F(1),) * 4, m=2, k=2)
        value, pack = exact_opt(inst)
        assert value == F(2)
        assert verify_packing(inst, pack).feasible

    def test_six_two_no_splits(self):
        inst = Instance(items=(F(6), F(2)), m=2, k=1)
        value, pack = exact_opt(inst)
        assert value == F(6)
        assert verify_packing(inst, pack).feasible

    def test_zero_instance(self):
        inst = Instance(items=(), m=2, k=1)
        value, pack = exact_opt(inst)
        assert value == 0

    def test_all_zero_items(self):
        inst = Instance(items=(F(0),) * 3, m=2, k=2)
        value, pack = exact_opt(inst)
        assert value == 0
        assert verify_packing(inst, pack).feasible


class TestEdges:
    def test_infeasible_returns_none(self):
        assert exact_opt(Instance(items=(F(1),) * 3, m=1, k=2)) is None

    def test_cap_enforced(self):
        inst = Instance(items=(F(1),) * 6, m=4, k=2)
        with pytest.raises(ResourceCapError):
            exact_opt(inst, cell_cap=20)
        value, _ = exact_opt(inst, cell_cap=24)
        assert value == F(3, 2)


class TestProperties:
    def test_item_permutation_invariance(self):
        rng = random.Random(51)
        for _ in range(10):
            inst = rand_instance(rng, max_n=5, max_m=3, max_k=3, allow_zero=False)
            if inst.n * inst.m > 15 or inst.n > inst.k * inst.m:
                continue
            value, _ = exact_opt(inst)
            perm = list(inst.items)
            rng.shuffle(perm)
            value2, _ = exact_opt(Instance(items=tuple(perm), m=inst.m, k=inst.k))
            assert value == value2

    def test_value_achieved_and_bounded_below(self):
        rng = random.Random(52)
        for _ in range(20):
            inst = rand_instance(rng, max_n=5, max_m=3, max_k=3, allow_zero=False)
            if inst.n * inst.m > 18 or inst.n > inst.k * inst.m:
                continue
            result = exact_opt(inst)
            value, pack = result
            report = verify_packing(inst, pack)
            assert report.feasible
            assert report.max_load == value
            assert value >= lower_bound(inst)

    def test_unrestricted_splitting_reaches_w_over_m(self):
        rng = random.Random(53)
        for _ in range(15):
            n = rng.randint(1, 4)
            m = rng.randint(1, 3)
            items = tuple(rand_size(rng) for _ in range(n))
            inst = Instance(items=items, m=m, k=n)  # k >= n
            if n * m > 16:
                continue
            value, _ = exact_opt(inst)
            assert value == lower_bound(inst)

    def test_tight_slots_match_no_split_makespan(self):
        rng = random.Random(54)
        tested = 0
        while tested < 12:
            m = rng.randint(1, 3)
            k = rng.randint(1, 2)
            n = k * m
            if n > 8 or n * m > 20:
                continue
            items = tuple(rand_size(rng, lo=F(1, 100)) for _ in range(n))
            inst = Instance(items=items, m=m, k=k)
            value, _ = exact_opt(inst)
            # With n = k*m every slot is taken by a whole item: splitting
            # an item would need an extra slot somewhere.
            assert value == no_split_makespan(items, m, k)
            tested += 1
