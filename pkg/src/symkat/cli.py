"""Command-line entry point: ``symkat run|fuzz|gen|bench``."""
from __future__ import annotations

import argparse
import sys
from typing import List, Optional

from . import spp
from .automaton import DEFAULT_MAX_STATES


def _cmd_run(args) -> int:
    from .nkpl import Options, report_json, run_file

    if args.star_cap:
        spp.STAR_CAP = args.star_cap
    fields = [f.strip() for f in args.fields.split(",") if f.strip()] if args.fields else None
    opts = Options(max_states=args.max_states, fail_fast=args.fail_fast, dot_dir=args.dot_dir,
                   out=None if args.json else sys.stdout)
    rep = run_file(args.file, opts, fields)
    if args.json:
        print(report_json(rep))
        return rep.exit_code
    if rep.error:
        print(f"error: {rep.error}", file=sys.stderr)
    checks = rep.checks
    print(f"{len(checks) - len(rep.failed)}/{len(checks)} checks passed")
    if args.stats:
        print(f"states built: {rep.states_built}, SPP nodes: {rep.spp_nodes}, "
              f"SP nodes: {rep.sp_nodes}, time: {rep.ms:.1f} ms")
    return rep.exit_code


def _cmd_fuzz(args) -> int:
    from .oracle.fuzz import fuzz_suite

    rep = fuzz_suite(args.seed, args.cases, args.exp_cases)
    print(rep.summary())
    return 0 if rep.ok else 1


def _cmd_gen(args) -> int:
    from .oracle.generators import gen_combinatorial, gen_slices, gen_topology

    if args.what == "combinatorial":
        src = gen_combinatorial(args.kind, args.n)
    elif args.what == "topology":
        src = gen_topology(args.shape, args.n, args.queries)
    else:
        src = gen_slices(args.n, args.crossing)
    if args.out in (None, "-"):
        sys.stdout.write(src)
    else:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(src)
    return 0


def _cmd_bench(args) -> int:
    from .oracle.bench import DEFAULT_SIZES, run_bench

    sizes = dict(DEFAULT_SIZES)
    if args.only:
        sizes = {k: v for k, v in sizes.items() if k in args.only.split(",")}
    if args.n:
        sizes = {k: tuple(args.n) for k in sizes}
    if args.out:
        with open(args.out, "w", encoding="utf-8", newline="") as fh:
            rows = run_bench(sizes, fh)
    else:
        rows = run_bench(sizes)
    return 0 if all(r["exit"] == 0 for r in rows) else 1


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="symkat", description="Symbolic NetKAT verifier")
    sub = ap.add_subparsers(dest="cmd", required=True)

    r = sub.add_parser("run", help="run an NKPL file")
    r.add_argument("file")
    r.add_argument("--fields", help="explicit field order, comma separated")
    r.add_argument("--max-states", type=int, default=DEFAULT_MAX_STATES)
    r.add_argument("--star-cap", type=int, default=None, help="doubling limit for star")
    r.add_argument("--fail-fast", action="store_true")
    r.add_argument("--stats", action="store_true")
    r.add_argument("--dot-dir")
    r.add_argument("--json", action="store_true")
    r.set_defaults(fn=_cmd_run)

    f = sub.add_parser("fuzz", help="differential fuzzing against the reference semantics")
    f.add_argument("--seed", type=int, default=0)
    f.add_argument("--cases", type=int, default=1000)
    f.add_argument("--exp-cases", type=int, default=None)
    f.set_defaults(fn=_cmd_fuzz)

    g = sub.add_parser("gen", help="generate NKPL benchmark programs")
    gs = g.add_subparsers(dest="what", required=True)
    c = gs.add_parser("combinatorial")
    c.add_argument("--kind", choices=["inc", "flip", "nondet"], required=True)
    c.add_argument("--n", type=int, required=True)
    c.add_argument("--out")
    t = gs.add_parser("topology")
    t.add_argument("--shape", choices=["line", "grid", "star"], required=True)
    t.add_argument("--n", type=int, required=True)
    t.add_argument("--queries", choices=["linear", "pairs", "none"], default="linear")
    t.add_argument("--out")
    s = gs.add_parser("slices")
    s.add_argument("--n", type=int, required=True)
    s.add_argument("--crossing", action="store_true")
    s.add_argument("--out")
    g.set_defaults(fn=_cmd_gen)

    b = sub.add_parser("bench", help="run generated suites and print CSV")
    b.add_argument("--only", help="comma list of suites (inc,flip,nondet,line,line-pairs)")
    b.add_argument("--n", type=int, nargs="*", help="override sizes")
    b.add_argument("--out")
    b.set_defaults(fn=_cmd_bench)
    return ap


def main(argv: Optional[List[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    return args.fn(args)


if __name__ == "__main__":
    sys.exit(main())
