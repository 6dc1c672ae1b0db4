"""Benchmark harness: run the oracle and the scheme over instance sets,
verify every packing, and emit CSV/JSON reports."""

from __future__ import annotations

import csv
import json
import time
from dataclasses import asdict, dataclass, field
from fractions import Fraction
from typing import Optional, Sequence

from .core import Instance, format_size, lower_bound, verify_packing
from .errors import ResourceCapError, SplitbinError
from .oracle import DEFAULT_CELL_CAP, exact_opt
from .pipeline import eptas_solve
from .rounding import Epsilon


@dataclass
class BenchRow:
    name: str
    n: int
    m: int
    k: int
    eps_denominator: int
    lower_bound: str
    exact_value: Optional[str] = None
    eptas_value: Optional[str] = None
    ratio: Optional[str] = None
    exact_seconds: Optional[float] = None
    eptas_seconds: Optional[float] = None
    error: Optional[str] = None


@dataclass
class BenchReport:
    rows: list[BenchRow] = field(default_factory=list)

    def guarantee_holds(self) -> bool:
        """Every measured ratio within (1+eps)(1+4eps)(1+2eps)."""
        for row in self.rows:
            if row.ratio is None:
                continue
            E = row.eps_denominator
            eps = Fraction(1, E)
            bound = (1 + eps) * (1 + 4 * eps) * (1 + 2 * eps)
            if Fraction(row.ratio) > bound:
                return False
        return True


def run_bench(
    instances: Sequence[tuple[str, Instance]],
    eps_list: Sequence[Epsilon],
    oracle_cap: int = DEFAULT_CELL_CAP,
) -> BenchReport:
    report = BenchReport()
    for name, inst in instances:
        exact_value = None
        exact_seconds = None
        if inst.n * inst.m <= oracle_cap:
            start = time.perf_counter()
            try:
                result = exact_opt(inst, cell_cap=oracle_cap)
                exact_seconds = time.perf_counter() - start
                if result is not None:
                    exact_value = result[0]
            except ResourceCapError:
                pass
        for eps in eps_list:
            row = BenchRow(
                name=name,
                n=inst.n,
                m=inst.m,
                k=inst.k,
                eps_denominator=eps.E,
                lower_bound=format_size(lower_bound(inst)),
                exact_value=None if exact_value is None else format_size(exact_value),
                exact_seconds=exact_seconds,
            )
            report.rows.append(row)
            start = time.perf_counter()
            try:
                value, pack, _ = eptas_solve(inst, eps)
            except SplitbinError as exc:
                row.error = f"{type(exc).__name__}: {exc}"
                continue
            row.eptas_seconds = time.perf_counter() - start
            check = verify_packing(inst, pack)
            if not check.feasible:
                row.error = f"verification failed: {check.violations[:2]}"
                continue
            row.eptas_value = format_size(value)
            if exact_value is not None and exact_value > 0:
                row.ratio = format_size(value / exact_value)
    return report


def write_csv(report: BenchReport, path: str) -> None:
    fields = [f.name for f in BenchRow.__dataclass_fields__.values()]
    with open(path, "w", newline="") as fh:
        writer = csv.DictWriter(fh, fieldnames=fields)
        writer.writeheader()
        for row in report.rows:
            writer.writerow(asdict(row))


def write_json(report: BenchReport, path: str) -> None:
    with open(path, "w") as fh:
        json.dump({"rows": [asdict(row) for row in report.rows]}, fh, indent=2)
