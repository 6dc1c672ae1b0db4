"""Problem data model: instances, packings, verification, trivial bounds.

All sizes are exact rationals (fractions.Fraction); every comparison in
this package is exact, there is no floating-point fast path.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

from .errors import FormatError, StructuralError

Size = Fraction

ZERO = Fraction(0)


def parse_size(text: str) -> Size:
    """Parse a size given as a decimal string ("0.137") or "p/q"."""
    try:
        value = Fraction(str(text).strip())
    except (ValueError, ZeroDivisionError) as exc:
        raise FormatError(f"cannot parse size {text!r}") from exc
    if value < 0:
        raise FormatError(f"negative size {text!r}")
    return value


def format_size(value: Size) -> str:
    return str(value)


@dataclass(frozen=True)
class Instance:
    """Items to pack, a fixed number of bins, and the per-bin part bound."""

    items: tuple[Size, ...]
    m: int
    k: int

    def __post_init__(self):
        if self.m < 1:
            raise StructuralError(f"bin count must be >= 1, got {self.m}")
        if self.k < 1:
            raise StructuralError(f"cardinality bound must be >= 1, got {self.k}")
        items = tuple(Fraction(s) for s in self.items)
        for t, s in enumerate(items):
            if s < 0:
                raise StructuralError(f"item {t} has negative size {s}")
        object.__setattr__(self, "items", items)

    @property
    def n(self) -> int:
        return len(self.items)

    @property
    def total_size(self) -> Size:
        return sum(self.items, ZERO)


# One bin: sorted ((item_id, part_size), ...) with at most one entry per item.
Bin = tuple[tuple[int, Size], ...]


@dataclass(frozen=True)
class Packing:
    """Per-bin lists of (item id, part size); parts of one item in one
    bin are merged on construction, so each id appears once per bin."""

    bins: tuple[Bin, ...]

    @classmethod
    def build(cls, bins: Iterable[Iterable[tuple[int, Size]]]) -> "Packing":
        canonical = []
        for entries in bins:
            merged: dict[int, Size] = {}
            for item_id, part in entries:
                merged[item_id] = merged.get(item_id, ZERO) + Fraction(part)
            canonical.append(tuple(sorted(merged.items())))
        return cls(bins=tuple(canonical))

    @classmethod
    def empty(cls, m: int) -> "Packing":
        return cls(bins=((),) * m)

    def bin_load(self, b: int) -> Size:
        return sum((part for _, part in self.bins[b]), ZERO)

    def max_load(self) -> Size:
        return max((self.bin_load(b) for b in range(len(self.bins))), default=ZERO)


@dataclass(frozen=True)
class VerificationReport:
    feasible: bool
    max_load: Size
    violations: tuple[str, ...] = field(default=())


def verify_packing(inst: Instance, pack: Packing) -> VerificationReport:
    """Check exact coverage of every item and the cardinality bound.

    Raises StructuralError for packings that do not even reference the
    instance correctly (unknown ids, wrong number of bins); returns an
    infeasibility report for well-formed but invalid packings.
    """
    if len(pack.bins) != inst.m:
        raise StructuralError(
            f"packing has {len(pack.bins)} bins, instance has {inst.m}"
        )
    violations: list[str] = []
    covered = [ZERO] * inst.n
    seen = [0] * inst.n
    for b, entries in enumerate(pack.bins):
        ids_here = set()
        for item_id, part in entries:
            if not 0 <= item_id < inst.n:
                raise StructuralError(f"unknown item id {item_id} in bin {b}")
            if item_id in ids_here:
                raise StructuralError(f"duplicate entry for item {item_id} in bin {b}")
            ids_here.add(item_id)
            if part < 0:
                violations.append(f"negative part of item {item_id} in bin {b}")
            elif part == 0 and inst.items[item_id] > 0:
                violations.append(f"zero-size part of item {item_id} in bin {b}")
            covered[item_id] += part
            seen[item_id] += 1
        if len(entries) > inst.k:
            violations.append(
                f"cardinality exceeded at bin {b}: {len(entries)} > {inst.k}"
            )
    for t in range(inst.n):
        if covered[t] < inst.items[t]:
            violations.append(f"item {t} underpacked: {covered[t]} < {inst.items[t]}")
        elif covered[t] > inst.items[t]:
            violations.append(f"item {t} overpacked: {covered[t]} > {inst.items[t]}")
        if inst.items[t] == 0 and seen[t] != 1:
            violations.append(
                f"zero-size item {t} must occupy exactly one part, has {seen[t]}"
            )
    return VerificationReport(
        feasible=not violations,
        max_load=pack.max_load(),
        violations=tuple(violations),
    )


def check_feasible(inst: Instance) -> bool:
    """Every item needs at least one part and a bin holds at most k."""
    return inst.n <= inst.k * inst.m


def round_robin_zero_packing(inst: Instance) -> Packing:
    """Packing for an all-zero instance: items dealt one slot at a time."""
    bins: list[list[tuple[int, Size]]] = [[] for _ in range(inst.m)]
    for t in range(inst.n):
        bins[t % inst.m].append((t, ZERO))
    return Packing.build(bins)


def fractional_opt_no_cardinality(inst: Instance) -> tuple[Size, Packing]:
    """Sequential fill to W/m per bin, splitting at bin boundaries.

    The cardinality bound is deliberately ignored; this realizes the
    unconstrained fractional optimum exactly.
    """
    target = inst.total_size / inst.m
    if target == 0:
        return ZERO, round_robin_zero_packing(inst)
    bins: list[list[tuple[int, Size]]] = [[] for _ in range(inst.m)]
    b = 0
    room = target
    for t, size in enumerate(inst.items):
        remaining = size
        if remaining == 0:
            bins[b].append((t, ZERO))
            continue
        while remaining > 0:
            take = min(remaining, room)
            bins[b].append((t, take))
            remaining -= take
            room -= take
            if room == 0 and b < inst.m - 1:
                b += 1
                room = target
    return target, Packing.build(bins)


def lower_bound(inst: Instance) -> Size:
    """W/m: no packing can have maximum load below the average."""
    return inst.total_size / inst.m


# ---------------------------------------------------------------------------
# JSON interchange


def instance_to_json(inst: Instance) -> dict:
    return {
        "k": inst.k,
        "bins": inst.m,
        "items": [format_size(s) for s in inst.items],
    }


def instance_from_json(data: dict) -> Instance:
    try:
        k = int(data["k"])
        m = int(data["bins"])
        items = tuple(parse_size(s) for s in data["items"])
    except (KeyError, TypeError, ValueError) as exc:
        raise FormatError(f"bad instance JSON: {exc}") from exc
    return Instance(items=items, m=m, k=k)


def packing_to_json(pack: Packing) -> dict:
    return {
        "bins": [
            [{"item": item_id, "size": format_size(part)} for item_id, part in entries]
            for entries in pack.bins
        ]
    }


def packing_from_json(data: dict) -> Packing:
    try:
        bins = [
            [(int(entry["item"]), parse_size(entry["size"])) for entry in entries]
            for entries in data["bins"]
        ]
    except (KeyError, TypeError, ValueError) as exc:
        raise FormatError(f"bad packing JSON: {exc}") from exc
    return Packing.build(bins)


def load_instance(path: str) -> Instance:
    try:
        with open(path) as fh:
            data = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise FormatError(f"cannot read instance {path}: {exc}") from exc
    return instance_from_json(data)


def load_packing(path: str) -> Packing:
    try:
        with open(path) as fh:
            data = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise FormatError(f"cannot read packing {path}: {exc}") from exc
    return packing_from_json(data)
