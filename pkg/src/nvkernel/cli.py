"""Command line entry point: nvk <check|kernelize|propagate|oracle|gen|bench>."""

from __future__ import annotations

import argparse
import sys

from .bench import SUITES, run_bench
from .generate import GenParams, gen_random
from .instance_io import ParseError, read_instance, serialize_instance
from .kernel import kernelize
from .model import InstanceError
from .propagate import enforce_hac
from .solver import OracleCapError, min_hitting_oracle, solve
from .trace import format_trace


def _emit(text: str, out: str | None) -> None:
    if out:
        with open(out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def cmd_check(args) -> int:
    inst = read_instance(args.instance)
    v = solve(inst, method=args.method, prune=not args.no_prune)
    if not v.consistent:
        print("INCONSISTENT")
        return 1
    print("CONSISTENT")
    if args.witness:
        print(" ".join(map(str, v.witness.values)))
    return 0


def cmd_kernelize(args) -> int:
    kr = kernelize(read_instance(args.instance))
    _emit(serialize_instance(kr.kernel), args.output)
    if args.trace:
        with open(args.trace, "w") as fh:
            fh.write(format_trace(kr.trace))
    return 0


def cmd_propagate(args) -> int:
    res = enforce_hac(read_instance(args.instance), prune=not args.no_prune)
    if res.failed:
        print("FAILURE", file=sys.stderr)
        return 1
    _emit(serialize_instance(res.filtered_instance), args.output)
    print(f"removed {len(res.removed_values)} values in {res.checks_performed} checks:",
          *res.removed_values, file=sys.stderr)
    return 0


def cmd_oracle(args) -> int:
    inst = read_instance(args.instance)
    size, chosen = min_hitting_oracle(inst)
    ok = size <= inst.budget
    print("CONSISTENT" if ok else "INCONSISTENT", f"min={size}")
    if ok and args.witness:
        print(" ".join(map(str, chosen)))
    return 0 if ok else 1


def cmd_gen(args) -> int:
    p = GenParams(args.vars, args.values, args.holes, args.budget, seed=args.seed,
                  interval_len=(args.min_len, args.max_len))
    _emit(serialize_instance(gen_random(p)), args.output)
    return 0


def cmd_bench(args) -> int:
    if args.instances:
        report = run_bench(instances=[read_instance(f) for f in args.instances])
    else:
        report = run_bench(args.suite, count=args.count, seed=args.seed)
    _emit(report.to_csv(), args.output)
    flags = report.flags
    print(" ".join(f"{k}={v}" for k, v in flags.items()), file=sys.stderr)
    return 0 if not any(flags.values()) else 1


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="nvk", description="AtMost-NValue kernelization toolkit")
    sub = ap.add_subparsers(dest="cmd", required=True)

    p = sub.add_parser("check", help="decide consistency")
    p.add_argument("instance")
    p.add_argument("--witness", action="store_true")
    p.add_argument("--method", choices=("fpt", "enum", "oracle"), default="fpt")
    p.add_argument("--no-prune", action="store_true", help="disable the single-branch prune")
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("kernelize", help="write the kernel")
    p.add_argument("instance")
    p.add_argument("-o", "--output")
    p.add_argument("--trace", help="also write the reduction trace here")
    p.set_defaults(func=cmd_kernelize)

    p = sub.add_parser("propagate", help="filter values without support")
    p.add_argument("instance")
    p.add_argument("-o", "--output")
    p.add_argument("--no-prune", action="store_true")
    p.set_defaults(func=cmd_propagate)

    p = sub.add_parser("oracle", help="brute-force minimum hitting set")
    p.add_argument("instance")
    p.add_argument("--witness", action="store_true")
    p.set_defaults(func=cmd_oracle)

    p = sub.add_parser("gen", help="generate a random instance")
    p.add_argument("--vars", type=int, required=True)
    p.add_argument("--values", type=int, required=True)
    p.add_argument("--holes", type=int, default=0)
    p.add_argument("--budget", type=int, required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--min-len", type=int, default=1)
    p.add_argument("--max-len", type=int, default=3)
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("bench", help="write a CSV benchmark report")
    p.add_argument("instances", nargs="*")
    p.add_argument("--suite", choices=SUITES, default="all")
    p.add_argument("--count", type=int, default=200)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_bench)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (ParseError, InstanceError, OracleCapError, OSError) as exc:
        print(f"nvk: {exc}", file=sys.stderr)
        return 2
    except ValueError as exc:
        # infeasible generator parameters
        print(f"nvk: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
