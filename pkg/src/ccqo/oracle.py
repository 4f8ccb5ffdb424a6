"""Brute-force optimum and the tree-size / bound-count identities."""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Tuple

import numpy as np

from . import qp
from .config import SolverConfig
from .errors import TooLarge
from .qp import DEFAULT_TOL, QuadraticObjective, SearchBox

MAX_SUPPORTS = 10**6


@dataclass
class OracleResult:
    support: Tuple[int, ...]
    point: np.ndarray
    value: float
    n_supports: int


def brute_force_oracle(obj: QuadraticObjective, box: SearchBox, k: int,
                       tol: float = DEFAULT_TOL) -> OracleResult:
    """Best of the box-QP minima over all size-k supports.

    Size-k supports suffice: a smaller support is a face of some size-k one
    because every box contains 0. Ties keep the lexicographically first support.
    """
    p = obj.p
    if not 1 <= k <= p:
        raise ValueError(f"need 1 <= k <= p, got k={k}, p={p}")
    n = math.comb(p, k)
    if n > MAX_SUPPORTS:
        raise TooLarge(f"C({p},{k}) = {n} supports exceeds {MAX_SUPPORTS}")
    best: Optional[OracleResult] = None
    for supp in itertools.combinations(range(p), k):
        sol = qp.lower_bound(obj, box, supp, tol)
        if best is None or sol.value < best.value:
            best = OracleResult(supp, sol.point, sol.value, n)
    return best


def expected_lb_calls(p: int, k: int) -> int:
    """Bound evaluations of either tree with no bound-based deletion."""
    if not 1 <= k < p:
        raise ValueError(f"need 1 <= k < p, got k={k}, p={p}")
    return math.comb(p + 1, k + 1) - math.comb(p - 1, k + 1)


@dataclass
class RecurrenceReport:
    sizes: Dict[Tuple[int, int], int]
    violations: List[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations


def _tiny_instance(p: int) -> Tuple[QuadraticObjective, SearchBox]:
    rng = np.random.default_rng(p)
    A = rng.normal(size=(2 * p, p))
    Q = A.T @ A
    return QuadraticObjective((Q + Q.T) / 2, rng.normal(size=p)), SearchBox(-np.ones(p), np.ones(p))


def tree_size_recurrence_check(p_max: int = 8) -> RecurrenceReport:
    """Count IBB+ tree nodes with deletion off for every ``1 <= k < p <= p_max``.

    Checks ``T(p, k) = T(p-1, k) + T(p-1, k-1) + 1`` wherever both terms are
    admissible and ``T(5, 2) = 19``.
    """
    from .ibb import solve

    if p_max > 9:
        raise TooLarge("full trees are only enumerated up to p = 9")
    cfg = SolverConfig.exhaustive(disable_bound_deletion=True, sfs_every=0)
    sizes: Dict[Tuple[int, int], int] = {}
    for p in range(2, p_max + 1):
        obj, box = _tiny_instance(p)
        for k in range(1, p):
            sizes[(p, k)] = solve(obj, box, k, cfg).nodes_created
    report = RecurrenceReport(sizes)
    for (p, k), t in sizes.items():
        a, b = sizes.get((p - 1, k)), sizes.get((p - 1, k - 1))
        if a is None or b is None:
            continue
        if t != a + b + 1:
            report.violations.append(f"T({p},{k})={t} != T({p-1},{k})+T({p-1},{k-1})+1={a + b + 1}")
    if p_max >= 5 and sizes[(5, 2)] != 19:
        report.violations.append(f"T(5,2)={sizes[(5, 2)]} != 19")
    return report
