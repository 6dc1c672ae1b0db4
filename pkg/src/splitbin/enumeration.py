"""Enumeration of split patterns for large items and per-bin
configurations, plus the partial packing realized by a configuration.

Everything here indexes part sizes by r, meaning a part of exact size
r * eps^2 with r in 1..cap/eps^2.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator, Sequence

from .core import Size, ZERO
from .errors import PreconditionError, ResourceCapError
from .rounding import Epsilon

DEFAULT_ENUM_LIMIT = 10**7


@dataclass(frozen=True)
class Pattern:
    """How one large item of size alpha*eps^2 is split: beta[r-1] parts
    of size r*eps^2."""

    alpha: int
    beta: tuple[int, ...]

    @property
    def num_parts(self) -> int:
        return sum(self.beta)


@dataclass(frozen=True)
class Configuration:
    """What one bin holds: small-item mass rounded down to gamma*eps^2
    plus delta[r-1] large-item parts of size r*eps^2."""

    gamma: int
    delta: tuple[int, ...]

    @property
    def num_parts(self) -> int:
        return sum(self.delta)

    @property
    def parts_weight(self) -> int:
        return sum(r * d for r, d in enumerate(self.delta, start=1))


def _cap_units(eps: Epsilon, cap: Size) -> int:
    q = cap / eps.eps2
    if q.denominator != 1:
        raise PreconditionError(f"cap {cap} is not a multiple of eps^2")
    return q.numerator


def _partitions(
    total: int, max_part: int, max_parts: int | None = None
) -> Iterator[tuple[int, ...]]:
    """All partitions of `total` into parts of size <= max_part (and at
    most max_parts parts, when given), each yielded as a count vector of
    length max_part."""
    counts = [0] * max_part

    def rec(remaining: int, largest: int, slots: int) -> Iterator[tuple[int, ...]]:
        if remaining == 0:
            yield tuple(counts)
            return
        if slots == 0 or remaining > largest * slots:
            return
        for part in range(min(remaining, largest), 0, -1):
            counts[part - 1] += 1
            yield from rec(remaining - part, part, slots - 1)
            counts[part - 1] -= 1

    yield from rec(total, max_part, total if max_parts is None else max_parts)


def enumerate_patterns(
    L: Sequence[Size],
    eps: Epsilon,
    cap: Size,
    limit: int = DEFAULT_ENUM_LIMIT,
    max_parts: int | None = None,
) -> dict[Size, list[Pattern]]:
    """All ways to cut each distinct large size into parts that are
    multiples of eps^2 no bigger than the bin cap.

    With max_parts set, partitions into more parts are skipped during
    generation; an item cannot be split across more bins than exist, so
    passing the bin count changes nothing downstream.
    """
    cap_units = _cap_units(eps, cap)
    out: dict[Size, list[Pattern]] = {}
    emitted = 0
    for ell in L:
        q = ell / eps.eps2
        if q.denominator != 1:
            raise PreconditionError(f"large size {ell} is not a multiple of eps^2")
        alpha = q.numerator
        patterns = []
        for beta in _partitions(alpha, min(alpha, cap_units), max_parts):
            beta = beta + (0,) * (cap_units - len(beta))
            patterns.append(Pattern(alpha=alpha, beta=beta))
            emitted += 1
            if emitted > limit:
                raise ResourceCapError(
                    f"pattern enumeration exceeded limit of {limit}"
                )
        patterns.sort(key=lambda p: p.beta)
        out[ell] = patterns
    return out


def enumerate_configurations(
    eps: Epsilon,
    cap: Size,
    k: int,
    limit: int = DEFAULT_ENUM_LIMIT,
) -> list[Configuration]:
    """All (gamma, delta) with gamma + sum(r*delta[r]) <= cap/eps^2.

    Configurations needing more than k parts are pruned: the model's
    cardinality row forces their counter to zero anyway.
    """
    cap_units = _cap_units(eps, cap)
    configs: list[Configuration] = []
    delta = [0] * cap_units

    def rec(r: int, budget: int, slots: int) -> None:
        if r > cap_units:
            for gamma in range(budget + 1):
                configs.append(Configuration(gamma=gamma, delta=tuple(delta)))
                if len(configs) > limit:
                    raise ResourceCapError(
                        f"configuration enumeration exceeded limit of {limit}"
                    )
            return
        max_count = min(budget // r, slots)
        for count in range(max_count + 1):
            delta[r - 1] = count
            rec(r + 1, budget - r * count, slots - count)
        delta[r - 1] = 0

    rec(1, cap_units, k)
    configs.sort(key=lambda c: (c.gamma, c.delta))
    return configs


def partial_packing(c: Configuration, eps: Epsilon) -> list[Size]:
    """Realize a configuration as part sizes: the virtual small-item
    placeholder first, then each large part in increasing size."""
    out = [c.gamma * eps.eps2]
    for r, count in enumerate(c.delta, start=1):
        out.extend([r * eps.eps2] * count)
    return out


def partial_packing_total(c: Configuration, eps: Epsilon) -> Size:
    return sum(partial_packing(c, eps), ZERO)
