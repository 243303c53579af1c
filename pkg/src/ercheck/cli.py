"""Command-line entry point (``erc``).

Exit codes: 0 ok (feasible for ``check``), 1 infeasible, 2 unreadable
input, 3 node or time budget exhausted.
"""
from __future__ import annotations

import argparse
import json
import logging
import sys
from dataclasses import asdict
from pathlib import Path
from typing import Optional, Sequence

from . import bench
from .checkers import check_sweep, get_checker
from .instances import GenParams, ParseError, dumps, gen_random, load, parse_psplib, save
from .intervals import baptiste_intervals, pair_row_intervals, pair_rows
from .model import CuspInstance, RcpspInstance
from .solver import minimize_makespan, solve_decision
from .timetable import Wipeout, tt_check, tt_filter

EXIT_OK, EXIT_INFEASIBLE, EXIT_PARSE, EXIT_BUDGET = 0, 1, 2, 3


def _resources(inst) -> list[CuspInstance]:
    return list(inst.resources) if isinstance(inst, RcpspInstance) else [inst]


def _seconds(text: str) -> float:
    return float(text.strip().rstrip("s"))


def cmd_check(args) -> int:
    inst = load(args.file)
    if args.checker == "tt":
        run = tt_check
    elif args.checker == "sweep":
        def run(r):
            return check_sweep(r, mirror=not args.no_mirror)
    else:
        run = get_checker(args.checker)
    report = []
    feasible = True
    for k, res in enumerate(_resources(inst)):
        out = run(res)
        entry = {"resource": k, "feasible": out.feasible,
                 "intervals_examined": out.intervals_examined,
                 "events_processed": out.events_processed}
        if out.witness is not None:
            entry["witness"] = asdict(out.witness)
        report.append(entry)
        if not out.feasible:
            feasible = False
            if args.stats != "json":
                w = out.witness
                print(f"infeasible on resource {k}: slack {w.slack} on [{w.t1}, {w.t2})")
            break
    if args.stats == "json":
        print(json.dumps({"feasible": feasible, "checker": args.checker, "resources": report}))
    elif feasible:
        print("feasible")
    return EXIT_OK if feasible else EXIT_INFEASIBLE


def cmd_filter(args) -> int:
    inst = load(args.file)
    out = []
    for k, res in enumerate(_resources(inst)):
        try:
            ups = tt_filter(res)
        except Wipeout as exc:
            print(json.dumps({"resource": k, "wipeout": exc.activity}))
            return EXIT_INFEASIBLE
        out.extend({"resource": k, **asdict(u)} for u in ups)
    print(json.dumps(out))
    return EXIT_OK


def cmd_intervals(args) -> int:
    inst = load(args.file)
    res = _resources(inst)[0]
    if args.pair is not None:
        i, j = args.pair
        acts = res.activities
        for k in (i, j):
            if not 0 <= k < len(acts):
                raise ValueError(f"activity {k} out of range 0..{len(acts) - 1}")
        for row, t1, t2 in pair_rows(acts[i], acts[j]):
            print(f"{row} {t1} {t2}")
        return EXIT_OK
    if args.family == "baptiste":
        fam = baptiste_intervals(res)
    else:
        fam = pair_row_intervals(res, mirrored=True)
    print("t1,t2,provenance")
    for t1, t2 in fam:
        print(f"{t1},{t2},{fam.provenance}")
    return EXIT_OK


def cmd_solve(args) -> int:
    inst = load(args.file)
    time_limit = bench.env_time_limit(args.time_limit)
    solve = minimize_makespan if args.objective == "makespan" else solve_decision
    res = solve(inst, args.config, node_limit=args.node_limit, time_limit=time_limit)
    st = res.stats
    doc = {"result": res.status, "nodes": st.nodes, "fails": st.fails,
           "time_us": round(st.wall_time * 1e6, 1),
           "time_per_node_us": round(st.time_per_node, 3),
           "proved_optimal": st.proved_optimal}
    if res.makespan is not None:
        doc["makespan"] = res.makespan
    if args.seed is not None:
        doc["seed"] = args.seed
    if args.starts and res.starts is not None:
        doc["starts"] = res.starts
    print(json.dumps(doc))
    return EXIT_BUDGET if st.budget_exhausted else EXIT_OK


def cmd_gen(args) -> int:
    inst = gen_random(GenParams(args.n, seed=args.seed, capacity=args.capacity,
                                windows=args.windows))
    if args.out:
        save(inst, args.out)
    else:
        print(dumps(inst))
    return EXIT_OK


def cmd_bench(args) -> int:
    configs = [c.strip() for c in args.configs.split(",") if c.strip()]
    rows = bench.run_bench(args.suite, configs, count=args.count, node_limit=args.node_limit,
                           time_limit=args.time_limit)
    text = bench.write_csv(rows, args.out)
    if not args.out:
        sys.stdout.write(text)
    for config, med in sorted(bench.median_time_per_node(rows).items()):
        print(f"# median time per node {config}: {med:.1f} us", file=sys.stderr)
    mean, factor = bench.interval_reduction_factor(args.pairs)
    print(f"# pair intervals: mean {mean:.3f}, reduction factor {factor:.2f}", file=sys.stderr)
    errors = [r for r in rows if r.result.startswith("error")]
    if errors:
        print(f"# {len(errors)} row(s) failed to load", file=sys.stderr)
    if args.required and any(r.result in ("unknown", "feasible") for r in rows):
        return EXIT_BUDGET
    return EXIT_OK


def cmd_convert(args) -> int:
    text = Path(args.file).read_text() if args.file != "-" else sys.stdin.read()
    inst = parse_psplib(text)
    doc = dumps(inst)
    if args.out:
        Path(args.out).write_text(doc + "\n")
    else:
        print(doc)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="erc", description="Energetic-reasoning checks and search.")
    ap.add_argument("-v", "--verbose", action="store_true")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("check", help="run one checker on an instance")
    p.add_argument("file")
    p.add_argument("--checker", choices=["brute", "cubic", "baptiste", "sweep", "tt"],
                   default="sweep")
    p.add_argument("--no-mirror", action="store_true", help="sweep: forward pass only")
    p.add_argument("--stats", choices=["json"], help="print the verdict and counters as JSON")
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("filter", help="Time-Table bound updates as JSON")
    p.add_argument("file")
    p.set_defaults(func=cmd_filter)

    p = sub.add_parser("intervals", help="candidate intervals")
    p.add_argument("file")
    g = p.add_mutually_exclusive_group(required=True)
    g.add_argument("--pair", nargs=2, type=int, metavar=("I", "J"))
    g.add_argument("--family", choices=["baptiste", "table1"])
    p.set_defaults(func=cmd_intervals)

    p = sub.add_parser("solve", help="branch and bound")
    p.add_argument("file")
    p.add_argument("--config", default="tt+sweep")
    p.add_argument("--objective", choices=["decision", "makespan"], default="decision")
    p.add_argument("--time-limit", type=_seconds, help="seconds, e.g. 300 or 300s")
    p.add_argument("--node-limit", type=int)
    p.add_argument("--seed", type=int, help="recorded in the output; the search is deterministic")
    p.add_argument("--starts", action="store_true", help="include the start times")
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("gen", help="random single-resource instance")
    p.add_argument("--n", type=int, default=20)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--capacity", type=int)
    p.add_argument("--windows", choices=["random", "open", "planted"], default="random")
    p.add_argument("--out")
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("bench", help="run configs over a suite, CSV out")
    p.add_argument("--suite", required=True,
                   help=f"one of {', '.join(bench.SUITES)} or a path/glob")
    p.add_argument("--configs", default="tt+sweep,tt+baptiste,tt+cubic")
    p.add_argument("--count", type=int, help="instances per generated suite")
    p.add_argument("--node-limit", type=int)
    p.add_argument("--time-limit", type=_seconds)
    p.add_argument("--pairs", type=int, default=10_000, help="pairs for the interval count")
    p.add_argument("--required", action="store_true",
                   help="exit 3 if any run hit its budget")
    p.add_argument("--out")
    p.set_defaults(func=cmd_bench)

    p = sub.add_parser("convert", help="PSPLIB .sm to JSON")
    p.add_argument("file", help="input file, - for stdin")
    p.add_argument("--from", dest="src", choices=["psplib"], default="psplib")
    p.add_argument("--to", dest="dst", choices=["json"], default="json")
    p.add_argument("--out")
    p.set_defaults(func=cmd_convert)
    return ap


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return args.func(args)
    except (ParseError, ValueError, OSError) as exc:
        print(f"erc: {exc}", file=sys.stderr)
        return EXIT_PARSE


if __name__ == "__main__":
    sys.exit(main())
