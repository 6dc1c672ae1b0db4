from fractions import Fraction

import pytest

from splitbin.errors import PreconditionError
from splitbin.generate import GenSpec, generate

F = Fraction


class TestGenerate:
    def test_deterministic(self):
        spec = GenSpec(n=10, m=3, k=4, seed=99)
        assert generate(spec) == generate(spec)

    def test_uniform_range(self):
        inst = generate(GenSpec(n=10, m=3, k=4, seed=1))
        assert all(F(0) <= s <= F(1) for s in inst.items)

    def test_uniform_custom_range(self):
        inst = generate(
            GenSpec(n=10, m=5, k=2, lo=F(1, 4), hi=F(3, 4), seed=2)
        )
        assert all(F(1, 4) <= s <= F(3, 4) for s in inst.items)

    def test_grid_multiples(self):
        inst = generate(
            GenSpec(n=10, m=3, k=4, dist="grid", step=F(1, 4), seed=3)
        )
        assert all((s / F(1, 4)).denominator == 1 for s in inst.items)

    def test_bimodal_range(self):
        inst = generate(GenSpec(n=20, m=5, k=4, dist="bimodal", seed=4))
        assert all(F(0) <= s <= F(1) for s in inst.items)

    def test_exact_rationals(self):
        inst = generate(GenSpec(n=5, m=2, k=3, seed=5))
        assert all(isinstance(s, F) for s in inst.items)

    def test_feasible_only_guard(self):
        with pytest.raises(PreconditionError):
            GenSpec(n=10, m=2, k=2, seed=0)

    def test_infeasible_allowed_when_asked(self):
        spec = GenSpec(n=10, m=2, k=2, seed=0, feasible_only=False)
        assert generate(spec).n == 10

    def test_unknown_distribution(self):
        with pytest.raises(PreconditionError):
            GenSpec(n=1, m=1, k=1, dist="zipf")

    def test_grid_needs_step(self):
        with pytest.raises(PreconditionError):
            GenSpec(n=1, m=1, k=1, dist="grid")

    def test_bad_range(self):
        with pytest.raises(PreconditionError):
            GenSpec(n=1, m=1, k=1, lo=F(2), hi=F(1))
