"""Guess grid, instance rounding, item classification, and the lift
back from a rounded packing to the original instance."""

from __future__ import annotations

import warnings
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .core import Instance, Packing, Size, ZERO, verify_packing
from .errors import DegenerateInstanceError, PreconditionError

__all__ = [
    "Epsilon",
    "RoundedInstance",
    "PieceOrigin",
    "guess_values",
    "scale_instance",
    "round_instance",
    "classify",
    "lift_packing",
]


class LooseAccuracyWarning(UserWarning):
    """Accuracy parameter below the regime the counting bounds assume."""


@dataclass(frozen=True)
class Epsilon:
    """Accuracy parameter eps = 1/E for an integer E >= 2.

    The closed-form pattern/configuration count bounds assume E >= 10
    (strict_mode); smaller E is accepted for desk-scale runs, where the
    enumerators are validated against brute force instead.
    """

    E: int

    def __post_init__(self):
        if self.E < 2:
            raise PreconditionError(f"1/eps must be an integer >= 2, got {self.E}")
        if self.E < 10:
            warnings.warn(
                f"1/eps = {self.E} < 10: closed-form enumeration bounds are "
                "not asserted in this regime",
                LooseAccuracyWarning,
                stacklevel=2,
            )

    @property
    def strict_mode(self) -> bool:
        return self.E >= 10

    @property
    def eps(self) -> Fraction:
        return Fraction(1, self.E)

    @property
    def eps2(self) -> Fraction:
        return Fraction(1, self.E * self.E)

    @property
    def inv_eps2(self) -> Fraction:
        return Fraction(self.E * self.E)

    @property
    def one_plus_eps(self) -> Fraction:
        return Fraction(self.E + 1, self.E)


# Provenance of one rounded item: which original item it came from, how
# it was produced, and its exact pre-rounding size (used by the lift).
# role is one of "whole", "chunk", "remainder", "rounded-up".
@dataclass(frozen=True)
class PieceOrigin:
    orig_id: int
    role: str
    pre_round: Size


@dataclass(frozen=True)
class RoundedInstance:
    instance: Instance
    provenance: tuple[PieceOrigin, ...]
    eps: Epsilon
    cap: Size

    @property
    def items(self) -> tuple[Size, ...]:
        return self.instance.items


def guess_values(inst: Instance, eps: Epsilon) -> list[Size]:
    """Ascending powers of (1+eps) covering the optimum's range.

    Every candidate optimum in [W/m, W] lies in (g/(1+eps), g] for some
    listed g. List length is at most log_{1+eps}(m) + 2.
    """
    W = inst.total_size
    if W == 0:
        raise DegenerateInstanceError("total size is zero; no guessing needed")
    base = eps.one_plus_eps
    lo = W / inst.m

    # Smallest integer j with base**j >= value, by exact walking.
    def ceil_log(value: Fraction) -> int:
        j = 0
        power = Fraction(1)
        if power >= value:
            while power / base >= value:
                power /= base
                j -= 1
            return j
        while power < value:
            power *= base
            j += 1
        return j

    j_lo = ceil_log(lo)
    j_hi = ceil_log(W)
    g = base**j_lo
    out = [g]
    for _ in range(j_lo, j_hi):
        g *= base
        out.append(g)
    return out


def scale_instance(inst: Instance, g: Size) -> Instance:
    if g <= 0:
        raise PreconditionError(f"scale factor must be positive, got {g}")
    return Instance(items=tuple(s / g for s in inst.items), m=inst.m, k=inst.k)


def _round_up_to_multiple(value: Fraction, unit: Fraction) -> Fraction:
    q = value / unit
    whole = q.numerator // q.denominator
    if whole * q.denominator != q.numerator:
        whole += 1
    return whole * unit


def round_instance(scaled: Instance, eps: Epsilon) -> RoundedInstance:
    """Split oversized items into unit chunks and round sizes >= eps up
    to multiples of eps^2.

    The resulting items are all at most 1/eps^2, items of size >= eps
    are exact multiples of eps^2, and the chunking preserves total size.
    The working bin-size bound is 1 + 4*eps.
    """
    big = eps.inv_eps2
    items: list[Size] = []
    provenance: list[PieceOrigin] = []

    def emit(orig_id: int, role: str, size: Size) -> None:
        if size >= eps.eps:
            rounded = _round_up_to_multiple(size, eps.eps2)
            if rounded != size:
                provenance.append(PieceOrigin(orig_id, "rounded-up", size))
            else:
                provenance.append(PieceOrigin(orig_id, role, size))
            items.append(rounded)
        else:
            provenance.append(PieceOrigin(orig_id, role, size))
            items.append(size)

    for t, size in enumerate(scaled.items):
        if size > big:
            chunks = int(size / big)  # floor(eps^2 * size)
            remainder = size - chunks * big
            for _ in range(chunks):
                emit(t, "chunk", big)
            if remainder > 0:
                emit(t, "remainder", remainder)
        else:
            emit(t, "whole", size)

    cap = 1 + 4 * eps.eps
    return RoundedInstance(
        instance=Instance(items=tuple(items), m=scaled.m, k=scaled.k),
        provenance=tuple(provenance),
        eps=eps,
        cap=cap,
    )


def classify(ri: RoundedInstance) -> tuple[list[int], list[int], list[Size]]:
    """Split item ids into small (< eps) and large ([eps, 1/eps^2]),
    and collect the distinct large sizes in ascending order."""
    small: list[int] = []
    large: list[int] = []
    sizes: set[Size] = set()
    threshold = ri.eps.eps
    for t, s in enumerate(ri.items):
        if s < threshold:
            small.append(t)
        else:
            large.append(t)
            sizes.add(s)
    return small, large, sorted(sizes)


def lift_packing(pack: Packing, ri: RoundedInstance, g: Size) -> Packing:
    """Convert a feasible packing of the rounded instance back to the
    original (pre-scaling, pre-rounding) instance.

    Rounded-up items are shrunk back by trimming their largest part
    (ties to the lowest bin index), chunk/remainder parts are relabeled
    to the item they came from and merged per bin, and all sizes are
    multiplied by g.  Bin loads never grow.
    """
    report = verify_packing(ri.instance, pack)
    if not report.feasible:
        raise PreconditionError(
            f"packing infeasible for rounded instance: {report.violations[:3]}"
        )
    # Mutable copy: per bin, item id -> part size.
    bins: list[dict[int, Size]] = [dict(entries) for entries in pack.bins]

    for j, origin in enumerate(ri.provenance):
        excess = ri.items[j] - origin.pre_round
        while excess > 0:
            parts = [(b, bins[b][j]) for b in range(len(bins)) if j in bins[b]]
            b, largest = max(parts, key=lambda e: (e[1], -e[0]))
            cut = min(largest, excess)
            if largest == cut:
                del bins[b][j]
            else:
                bins[b][j] = largest - cut
            excess -= cut

    lifted: list[list[tuple[int, Size]]] = []
    for content in bins:
        entries = []
        for j, part in content.items():
            orig = ri.provenance[j].orig_id
            entries.append((orig, part * g))
        lifted.append(entries)
    return Packing.build(lifted)
