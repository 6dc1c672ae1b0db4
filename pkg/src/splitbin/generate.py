"""Seeded random instance generation on an exact rational grid."""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from .core import Instance, Size
from .errors import PreconditionError

GRID = 10**6  # uniform/bimodal sizes live on the 1/GRID grid

UNIFORM = "uniform"
BIMODAL = "bimodal"
GRID_DIST = "grid"


@dataclass(frozen=True)
class GenSpec:
    n: int
    m: int
    k: int
    dist: str = UNIFORM
    lo: Size = Fraction(0)
    hi: Size = Fraction(1)
    step: Optional[Size] = None  # grid distribution only
    seed: int = 0
    feasible_only: bool = True

    def __post_init__(self):
        if self.dist not in (UNIFORM, BIMODAL, GRID_DIST):
            raise PreconditionError(f"unknown distribution {self.dist!r}")
        if self.dist == GRID_DIST and (self.step is None or self.step <= 0):
            raise PreconditionError("grid distribution needs a positive step")
        if not 0 <= self.lo <= self.hi:
            raise PreconditionError(f"bad size range [{self.lo}, {self.hi}]")
        if self.feasible_only and self.n > self.k * self.m:
            raise PreconditionError(
                f"n={self.n} > k*m={self.k * self.m}: cannot generate feasibly"
            )


def _uniform(rng: random.Random, lo: Size, hi: Size) -> Size:
    lo_units = -((-lo.numerator * GRID) // lo.denominator)  # ceil
    hi_units = (hi.numerator * GRID) // hi.denominator  # floor
    return Fraction(rng.randint(lo_units, hi_units), GRID)


def generate(spec: GenSpec) -> Instance:
    """Deterministic per seed; all sizes are exact rationals."""
    rng = random.Random(spec.seed)
    items: list[Size] = []
    for _ in range(spec.n):
        if spec.dist == UNIFORM:
            items.append(_uniform(rng, spec.lo, spec.hi))
        elif spec.dist == BIMODAL:
            span = spec.hi - spec.lo
            if rng.random() < 0.5:
                items.append(_uniform(rng, spec.lo, spec.lo + span / 10))
            else:
                items.append(_uniform(rng, spec.hi - span / 10, spec.hi))
        else:
            lo_units = -((-spec.lo) // spec.step)
            hi_units = spec.hi // spec.step
            items.append(rng.randint(int(lo_units), int(hi_units)) * spec.step)
    return Instance(items=tuple(items), m=spec.m, k=spec.k)
