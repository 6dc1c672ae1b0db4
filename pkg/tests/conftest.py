"""Shared helpers for the test suite: random rational data and random
feasible objects (instances, packings, fractional assignments) built
independently of the code under test wherever a contract is checked.
"""

from __future__ import annotations

import random
from fractions import Fraction

from splitbin.core import Instance, Packing
from splitbin.rounding import Epsilon, RoundedInstance, round_instance


def rand_size(rng: random.Random, lo=Fraction(0), hi=Fraction(1), denom=1000):
    """Uniform rational in [lo, hi] on the 1/denom grid."""
    lo_units = -((-lo.numerator * denom) // lo.denominator)
    hi_units = (hi.numerator * denom) // hi.denominator
    return Fraction(rng.randint(lo_units, hi_units), denom)


def rand_instance(
    rng: random.Random,
    max_n=8,
    max_m=4,
    max_k=4,
    hi=Fraction(1),
    allow_zero=True,
) -> Instance:
    m = rng.randint(1, max_m)
    k = rng.randint(1, max_k)
    n = rng.randint(0 if allow_zero else 1, min(max_n, k * m))
    items = tuple(rand_size(rng, hi=hi) for _ in range(n))
    return Instance(items=items, m=m, k=k)


def rand_feasible_packing(rng: random.Random, inst: Instance) -> Packing:
    """A random feasible packing: each item is split into random parts
    over distinct bins, retrying until the cardinality bound holds."""
    for _ in range(200):
        bins = [[] for _ in range(inst.m)]
        counts = [0] * inst.m
        ok = True
        for t, size in enumerate(inst.items):
            open_bins = [b for b in range(inst.m) if counts[b] < inst.k]
            if not open_bins:
                ok = False
                break
            # Splitting costs extra slots; only split when slots to spare.
            free = sum(inst.k - counts[b] for b in range(inst.m))
            slack = free - (inst.n - t)
            pieces = rng.randint(1, max(1, min(len(open_bins), 3, 1 + slack)))
            chosen = rng.sample(open_bins, pieces)
            if size == 0:
                bins[chosen[0]].append((t, Fraction(0)))
                counts[chosen[0]] += 1
                continue
            cuts = sorted(
                rand_size(rng, hi=size) for _ in range(pieces - 1)
            )
            edges = [Fraction(0)] + list(cuts) + [size]
            placed = False
            for b, lo, hi in zip(chosen, edges, edges[1:]):
                part = hi - lo
                if part > 0:
                    bins[b].append((t, part))
                    counts[b] += 1
                    placed = True
            if not placed:
                bins[chosen[0]].append((t, size))
                counts[chosen[0]] += 1
        if ok:
            return Packing.build(bins)
    raise AssertionError("could not build a random feasible packing")


def rand_rounded_instance(
    rng: random.Random, eps: Epsilon, max_n=6, max_m=3
) -> RoundedInstance:
    """Round a random already-scaled instance (sizes in [0, 1])."""
    m = rng.randint(1, max_m)
    n = rng.randint(1, max_n)
    items = tuple(rand_size(rng, denom=eps.E * eps.E * 4) for _ in range(n))
    # Cardinality loose enough that random packings exist comfortably.
    return round_instance(Instance(items=items, m=m, k=max(2, n)), eps)
