"""Bound-call counts of IBB+ and BB run to completion on tabulated shapes.

A small-scale analogue of the bound-count comparison: for each k, reports the
median and range of lb_calls over the seeds, plus wall time.

    python3 scripts/lb_call_counts.py --shape small-1 --k 5,10 --seeds 1..10
"""

import argparse
import statistics
import time

from ccqo.bb import solve_bb
from ccqo.cli import _int_list
from ccqo.config import SolverConfig
from ccqo.ibb import solve
from ccqo.instances import SNR_VALUES, generate


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--shape", default="small-1")
    ap.add_argument("--case", default="od")
    ap.add_argument("--example", type=int, default=1)
    ap.add_argument("--k", default="5,10")
    ap.add_argument("--seeds", default="1..10")
    args = ap.parse_args()

    cfg = SolverConfig.exhaustive()
    for k in _int_list(args.k):
        counts = {"ibb": [], "bb": []}
        times = {"ibb": 0.0, "bb": 0.0}
        for seed in _int_list(args.seeds):
            inst = generate(args.shape, args.case, args.example, SNR_VALUES[seed % 4], seed)
            obj, box = inst.objective(), inst.box()
            for name, fn in (("ibb", solve), ("bb", solve_bb)):
                t0 = time.perf_counter()
                counts[name].append(fn(obj, box, k, cfg).lb_calls)
                times[name] += time.perf_counter() - t0
        for name in ("ibb", "bb"):
            c = counts[name]
            print(f"{args.shape} k={k:<3d} {name:4s} median={statistics.median(c):>9g} "
                  f"min={min(c):>8d} max={max(c):>8d} time={times[name]:.1f}s", flush=True)


if __name__ == "__main__":
    main()
