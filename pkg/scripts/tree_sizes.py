"""Node and bound-call counts of the full (deletion-free) trees for small p.

Prints T(p, k) for IBB+ next to the recurrence prediction, and the bound-call
counts of IBB+ and BB next to C(p+1, k+1) - C(p-1, k+1).

    python3 scripts/tree_sizes.py --p-max 8
"""

import argparse

from ccqo.bb import solve_bb
from ccqo.config import SolverConfig
from ccqo.ibb import solve
from ccqo.oracle import _tiny_instance, expected_lb_calls, tree_size_recurrence_check


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--p-max", type=int, default=8)
    args = ap.parse_args()

    rep = tree_size_recurrence_check(args.p_max)
    print(f"{'p':>3} {'k':>3} {'T(p,k)':>8} {'pred':>8} {'ibb lb':>8} {'bb lb':>8} {'formula':>8}")
    ibb_cfg = SolverConfig.exhaustive(disable_bound_deletion=True, sfs_every=0)
    bb_cfg = SolverConfig.exhaustive(disable_bound_deletion=True, bb_inlevel_ordering=False)
    for (p, k), t in sorted(rep.sizes.items()):
        a, b = rep.sizes.get((p - 1, k)), rep.sizes.get((p - 1, k - 1))
        pred = "-" if a is None or b is None else str(a + b + 1)
        obj, box = _tiny_instance(p)
        ibb_lb = solve(obj, box, k, ibb_cfg).lb_calls
        bb_lb = solve_bb(obj, box, k, bb_cfg).lb_calls
        print(f"{p:3d} {k:3d} {t:8d} {pred:>8} {ibb_lb:8d} {bb_lb:8d} "
              f"{expected_lb_calls(p, k):8d}")
    print("recurrence:", "holds" if rep.ok else rep.violations)


if __name__ == "__main__":
    main()
