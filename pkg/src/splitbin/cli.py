"""Command-line interface.

Exit codes: 0 success, 1 infeasible instance (or failed verification),
2 resource cap exceeded, 3 I/O or format error.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from dataclasses import asdict

from .bench import run_bench, write_csv, write_json
from .core import (
    format_size,
    instance_to_json,
    load_instance,
    load_packing,
    lower_bound,
    packing_to_json,
    verify_packing,
)
from .errors import (
    FormatError,
    InfeasibleInstanceError,
    ResourceCapError,
    SplitbinError,
)
from .generate import GenSpec, generate
from .oracle import DEFAULT_CELL_CAP, exact_opt
from .pipeline import eptas_solve
from .rounding import Epsilon

EXIT_OK = 0
EXIT_INFEASIBLE = 1
EXIT_RESOURCE = 2
EXIT_FORMAT = 3


def _parse_fraction(text: str):
    from .core import parse_size

    return parse_size(text)


def cmd_solve(args) -> int:
    inst = load_instance(args.input)
    eps = Epsilon(args.eps)
    value, pack, trace = eptas_solve(inst, eps, node_limit=args.node_limit)
    print(f"value {format_size(value)}")
    print(f"lower_bound {format_size(lower_bound(inst))}")
    if args.out:
        with open(args.out, "w") as fh:
            json.dump(packing_to_json(pack), fh, indent=2)
    if args.trace:
        records = [
            {
                "guess": format_size(rec.guess),
                "status": rec.status,
                "selected": rec.selected,
                "configurations": rec.num_configs,
                "patterns": rec.num_patterns,
                "variables": rec.num_variables,
                "nodes": rec.nodes,
                "converted_load": None
                if rec.converted_load is None
                else format_size(rec.converted_load),
                "value": None if rec.value is None else format_size(rec.value),
            }
            for rec in trace.records
        ]
        with open(args.trace, "w") as fh:
            json.dump(
                {"eps_denominator": trace.eps_denominator, "guesses": records},
                fh,
                indent=2,
            )
    return EXIT_OK


def cmd_exact(args) -> int:
    inst = load_instance(args.input)
    result = exact_opt(inst, cell_cap=args.cap)
    if result is None:
        print("infeasible")
        return EXIT_INFEASIBLE
    value, pack = result
    print(f"value {format_size(value)}")
    if args.out:
        with open(args.out, "w") as fh:
            json.dump(packing_to_json(pack), fh, indent=2)
    return EXIT_OK


def cmd_verify(args) -> int:
    inst = load_instance(args.input)
    pack = load_packing(args.packing)
    report = verify_packing(inst, pack)
    print(f"max_load {format_size(report.max_load)}")
    if report.feasible:
        print("feasible")
        return EXIT_OK
    for violation in report.violations:
        print(f"violation: {violation}")
    return EXIT_INFEASIBLE


def cmd_gen(args) -> int:
    spec = GenSpec(
        n=args.n,
        m=args.m,
        k=args.k,
        dist=args.dist,
        lo=_parse_fraction(args.lo),
        hi=_parse_fraction(args.hi),
        step=None if args.step is None else _parse_fraction(args.step),
        seed=args.seed,
        feasible_only=not args.allow_infeasible,
    )
    inst = generate(spec)
    payload = instance_to_json(inst)
    if args.out:
        with open(args.out, "w") as fh:
            json.dump(payload, fh, indent=2)
    else:
        json.dump(payload, sys.stdout, indent=2)
        print()
    return EXIT_OK


def cmd_bench(args) -> int:
    eps_list = [Epsilon(int(e)) for e in args.eps.split(",") if e]
    instances = []
    try:
        names = sorted(os.listdir(args.dir))
    except OSError as exc:
        raise FormatError(f"cannot list {args.dir}: {exc}") from exc
    for name in names:
        if name.endswith(".json"):
            path = os.path.join(args.dir, name)
            instances.append((name, load_instance(path)))
    report = run_bench(instances, eps_list, oracle_cap=args.oracle_cap)
    if args.csv:
        write_csv(report, args.csv)
    if args.json:
        write_json(report, args.json)
    failures = [row for row in report.rows if row.error]
    print(f"ran {len(report.rows)} (instance, eps) pairs, {len(failures)} failures")
    for row in failures:
        print(f"  {row.name} eps=1/{row.eps_denominator}: {row.error}")
    print(f"guarantee_holds {report.guarantee_holds()}")
    return EXIT_OK if not failures else EXIT_INFEASIBLE


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="splitbin",
        description="Splittable bin packing with a per-bin cardinality bound",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("solve", help="run the approximation scheme")
    p.add_argument("--eps", type=int, required=True, metavar="E",
                   help="accuracy denominator; eps = 1/E")
    p.add_argument("--input", required=True)
    p.add_argument("--out")
    p.add_argument("--trace")
    p.add_argument("--node-limit", type=int, default=5000)
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("exact", help="brute-force optimum (small instances)")
    p.add_argument("--input", required=True)
    p.add_argument("--out")
    p.add_argument("--cap", type=int, default=DEFAULT_CELL_CAP)
    p.set_defaults(func=cmd_exact)

    p = sub.add_parser("verify", help="check a packing against an instance")
    p.add_argument("--input", required=True)
    p.add_argument("--packing", required=True)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("gen", help="generate a random instance")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--dist", default="uniform",
                   choices=["uniform", "bimodal", "grid"])
    p.add_argument("--lo", default="0")
    p.add_argument("--hi", default="1")
    p.add_argument("--step", default=None)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out")
    p.add_argument("--allow-infeasible", action="store_true")
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("bench", help="run the benchmark harness")
    p.add_argument("--dir", required=True)
    p.add_argument("--eps", required=True, help="comma-separated denominators")
    p.add_argument("--csv")
    p.add_argument("--json")
    p.add_argument("--oracle-cap", type=int, default=DEFAULT_CELL_CAP)
    p.set_defaults(func=cmd_bench)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except InfeasibleInstanceError as exc:
        print(f"infeasible: {exc}", file=sys.stderr)
        return EXIT_INFEASIBLE
    except ResourceCapError as exc:
        print(f"resource cap: {exc}", file=sys.stderr)
        return EXIT_RESOURCE
    except FormatError as exc:
        print(f"format error: {exc}", file=sys.stderr)
        return EXIT_FORMAT
    except SplitbinError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_FORMAT


if __name__ == "__main__":
    sys.exit(main())
