"""Command line: ``gen``, ``solve``, ``bench`` and ``report``."""

from __future__ import annotations

import argparse
import json
import logging
import sys
from dataclasses import asdict
from pathlib import Path

from . import bench, instances
from .config import SolverConfig
from .errors import CcqoError


def _int_list(text: str):
    out = []
    for part in text.split(","):
        if ".." in part:
            a, b = part.split("..")
            out.extend(range(int(a), int(b) + 1))
        elif part:
            out.append(int(part))
    return out


def _float_list(text: str):
    return [float(v) for v in text.split(",") if v]


def _add_limits(ap: argparse.ArgumentParser) -> None:
    ap.add_argument("--select", choices=["bfs", "dfs"], default="bfs")
    ap.add_argument("--max-iter", type=int, default=1_000_000)
    ap.add_argument("--time-limit", type=float, default=600.0)
    ap.add_argument("--soft-iters", type=int, default=500, help="0 disables")
    ap.add_argument("--soft-time", type=float, default=300.0, help="0 disables")
    ap.add_argument("--sfs-every", type=int, default=100)
    ap.add_argument("--no-bound-deletion", action="store_true")
    ap.add_argument("--no-ordering", action="store_true", help="BB without in-level ordering")


def _config(args) -> SolverConfig:
    return SolverConfig(
        selection=args.select, max_iterations=args.max_iter, hard_time_limit=args.time_limit,
        soft_no_improve_iters=args.soft_iters or None, soft_no_improve_time=args.soft_time or None,
        sfs_every=args.sfs_every, disable_bound_deletion=args.no_bound_deletion,
        bb_inlevel_ordering=not args.no_ordering,
    )


def cmd_gen(args) -> int:
    inst = instances.generate(args.type, args.case, args.example, args.snr, args.seed,
                              k0=args.k0, k=args.k, rho=args.rho)
    inst.save(args.out)
    print(f"wrote {args.out}: {inst.label} n={inst.n} p={inst.p}", file=sys.stderr)
    return 0


def cmd_solve(args) -> int:
    inst = instances.RegressionInstance.load(args.instance)
    k = args.k if args.k is not None else inst.k
    logger = logging.getLogger("ccqo")
    handler = None
    if args.trace:
        handler = logging.StreamHandler(sys.stderr)
        handler.setFormatter(logging.Formatter("%(message)s"))
        logger.addHandler(handler)
        logger.setLevel(logging.DEBUG)
    try:
        rec = bench.run_algorithm(inst, args.algo, k, _config(args))
    finally:
        if handler is not None:
            logger.removeHandler(handler)
            logger.setLevel(logging.NOTSET)
    print(rec.to_json())
    return 0


def cmd_bench(args) -> int:
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    types = args.types.split(",") if args.types else instances.SUITES[args.suite]
    cfg = _config(args)
    algos = tuple(a for a in args.algos.split(",") if a)
    for a in algos:
        if a not in bench.ALGOS:
            raise SystemExit(f"unknown algorithm {a!r}")
    tasks = [
        bench.BenchTask(t, args.case, ex, snr, seed, args.k0, tuple(_int_list(args.k)), algos,
                        cfg, args.oracle_max)
        for t in types for ex in _int_list(args.examples) for snr in _float_list(args.snr)
        for seed in _int_list(args.seeds)
    ]
    records = bench.run_bench(tasks, workers=args.workers)
    bench.write_runs(records, out / "runs.csv")
    manifest = {"suite": args.suite, "types": types, "case": args.case, "k": _int_list(args.k),
                "snr": _float_list(args.snr), "seeds": _int_list(args.seeds),
                "examples": _int_list(args.examples), "algos": list(algos), "k0": args.k0,
                "oracle_max": args.oracle_max,
                "config": {k: (v.value if hasattr(v, "value") else v)
                           for k, v in asdict(cfg).items()}}
    (out / "manifest.json").write_text(json.dumps(manifest, indent=2))
    print(f"wrote {len(records)} records to {out / 'runs.csv'}", file=sys.stderr)
    return 0


def cmd_report(args) -> int:
    records = bench.read_runs(args.runs)
    profile, boxes = bench.report(records, args.metric, include_oracle=args.include_oracle)
    if args.profile:
        bench.write_profile(profile, args.profile)
    if args.boxplot:
        bench.write_boxplot(boxes, args.boxplot)
    for solver, b in boxes.items():
        print(f"{solver:8s} median={b.median:.6g} q25={b.q25:.6g} q75={b.q75:.6g} "
              f"outliers={len(b.outliers)}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="ccqo", description=__doc__)
    sub = ap.add_subparsers(dest="command", required=True)

    g = sub.add_parser("gen", help="generate a synthetic regression instance")
    g.add_argument("--type", required=True, choices=list(instances.SHAPES))
    g.add_argument("--case", choices=["od", "ud"], default="od")
    g.add_argument("--example", type=int, choices=[1, 2, 3], default=1)
    g.add_argument("--snr", type=float, default=1.0)
    g.add_argument("--k0", type=int, default=10)
    g.add_argument("--k", type=int, default=5)
    g.add_argument("--rho", type=float, default=0.8)
    g.add_argument("--seed", type=int, default=0)
    g.add_argument("--out", required=True)
    g.set_defaults(func=cmd_gen)

    s = sub.add_parser("solve", help="solve one instance and print a JSON run record")
    s.add_argument("--algo", choices=list(bench.ALGOS), default="ibb")
    s.add_argument("--k", type=int)
    s.add_argument("--instance", required=True)
    s.add_argument("--trace", action="store_true", help="per-iteration log on stderr")
    _add_limits(s)
    s.set_defaults(func=cmd_solve)

    b = sub.add_parser("bench", help="run a benchmark grid and write runs.csv")
    b.add_argument("--suite", choices=list(instances.SUITES), default="small")
    b.add_argument("--types", help="comma list overriding the suite's shapes")
    b.add_argument("--case", choices=["od", "ud"], default="od")
    b.add_argument("--examples", default="1,2,3")
    b.add_argument("--k", default="5,10")
    b.add_argument("--k0", type=int, default=10)
    b.add_argument("--snr", default="0.05,0.5,1,5")
    b.add_argument("--seeds", default="1..20")
    b.add_argument("--algos", default="ibb,bb,sfs")
    b.add_argument("--oracle-max", type=int, default=20000,
                   help="also run the brute-force oracle when C(p,k) is at most this")
    b.add_argument("--workers", type=int, default=1)
    b.add_argument("--out", required=True)
    _add_limits(b)
    b.set_defaults(func=cmd_bench)

    r = sub.add_parser("report", help="performance profile and box plots from runs.csv")
    r.add_argument("--runs", required=True)
    r.add_argument("--metric", choices=["gap", "time"], default="gap")
    r.add_argument("--profile")
    r.add_argument("--boxplot")
    r.add_argument("--include-oracle", action="store_true")
    r.set_defaults(func=cmd_report)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except CcqoError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
