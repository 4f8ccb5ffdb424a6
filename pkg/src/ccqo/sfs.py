"""Sequential feature swapping: a drop/pick local search over size-k supports.

``q(I)`` below is the box-constrained minimum of the objective with every
coordinate outside ``I`` fixed at zero. Each iteration drops the member of
``I`` whose removal raises ``q`` least, picks the outsider whose addition
lowers ``q`` most, and switches only on strict improvement, so ``q`` strictly
decreases and the search stops after finitely many switches.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from . import qp
from .errors import InvalidInitialSupport
from .qp import DEFAULT_TOL, QpSolution, QuadraticObjective, SearchBox


def support_value(obj: QuadraticObjective, box: SearchBox, support, tol: float = DEFAULT_TOL,
                  x0=None) -> QpSolution:
    return qp.lower_bound(obj, box, support, tol, x0)


def gain(obj: QuadraticObjective, box: SearchBox, support: Sequence[int], s: int,
         tol: float = DEFAULT_TOL) -> float:
    """``q(I \\ {s}) - q(I)``."""
    support = tuple(support)
    if s not in support:
        raise ValueError(f"{s} is not in the support")
    rest = tuple(i for i in support if i != s)
    return (support_value(obj, box, rest, tol).value
            - support_value(obj, box, support, tol).value)


def reduction(obj: QuadraticObjective, box: SearchBox, support: Sequence[int], s: int,
              tol: float = DEFAULT_TOL) -> float:
    """``q(I) - q(I + {s})``."""
    support = tuple(support)
    if s in support:
        raise ValueError(f"{s} is already in the support")
    return (support_value(obj, box, support, tol).value
            - support_value(obj, box, support + (s,), tol).value)


def top_k_support(x, k: int, allowed=None) -> Tuple[int, ...]:
    """Indices of the ``k`` largest ``|x_i|`` (ties to the lower index), sorted.

    ``allowed`` optionally restricts the candidates.
    """
    a = np.abs(np.asarray(x, dtype=float))
    cand = np.arange(a.size) if allowed is None else np.asarray(sorted(allowed), dtype=np.intp)
    order = cand[np.argsort(-a[cand], kind="stable")]
    return tuple(sorted(int(i) for i in order[:k]))


@dataclass
class SfsResult:
    support: Tuple[int, ...]
    point: np.ndarray
    value: float
    # q(I) of the initial support followed by the value after every switch
    history: List[float] = field(default_factory=list)
    iterations: int = 0
    qp_calls: int = 0


class SupportCache:
    """Memoized ``q(.)`` keyed by sorted support tuples.

    ``calls`` counts the QPs actually solved. The table is cleared once it
    holds ``max_size`` entries.
    """

    def __init__(self, obj, box, tol, max_size: int = 200_000):
        self.obj, self.box, self.tol = obj, box, tol
        self.max_size = max_size
        self.table: Dict[Tuple[int, ...], QpSolution] = {}
        self.calls = 0

    def __call__(self, support: Tuple[int, ...], x0=None) -> QpSolution:
        sol = self.table.get(support)
        if sol is None:
            self.calls += 1
            sol = qp.lower_bound(self.obj, self.box, support, self.tol, x0)
            if len(self.table) >= self.max_size:
                self.table.clear()
            self.table[support] = sol
        return sol


def run_sfs(obj: QuadraticObjective, box: SearchBox, k: int,
            initial: Optional[Sequence[int]] = None, tol: float = DEFAULT_TOL,
            max_iter: Optional[int] = None, cache: Optional[SupportCache] = None) -> SfsResult:
    """Run the swap search from ``initial`` (default: top-k of the box-QP minimizer).

    ``cache`` lets several runs on the same problem share solved supports.
    """
    p = obj.p
    if initial is None:
        initial = top_k_support(qp.minimize_box_qp(obj, box, tol).point, k)
    current = tuple(sorted(int(i) for i in initial))
    if len(set(current)) != k or len(current) != k or (k and not 0 <= current[0] <= current[-1] < p):
        raise InvalidInitialSupport(f"initial support must hold {k} distinct indices in [0, {p})")

    q_of = cache if cache is not None else SupportCache(obj, box, tol)
    calls0 = q_of.calls
    cur = q_of(current)
    history = [cur.value]
    iterations = 0
    while max_iter is None or iterations < max_iter:
        iterations += 1
        members = set(current)
        outside = [s for s in range(p) if s not in members]
        if not outside:
            break
        gains = [q_of(tuple(i for i in current if i != s), cur.point).value - cur.value
                 for s in current]
        drop = current[int(np.argmin(gains))]
        reductions = [cur.value - q_of(tuple(sorted(current + (s,))), cur.point).value
                      for s in outside]
        pick = outside[int(np.argmax(reductions))]
        swapped = tuple(sorted([i for i in current if i != drop] + [pick]))
        cand = q_of(swapped, cur.point)
        if cand.value < cur.value:
            current, cur = swapped, cand
            history.append(cur.value)
        else:
            break
    return SfsResult(current, cur.point.copy(), cur.value, history, iterations,
                     q_of.calls - calls0)
