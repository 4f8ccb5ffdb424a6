"""IBB+: interval branch-and-bound specialised to the cardinality constraint.

Boxes are flag vectors (see :mod:`ccqo.flagbox`). Each iteration takes a node
from the list, branches one undecided coordinate at zero, and processes the two
children: boxes violating the cardinality counts are dropped, boxes whose
support is fully determined are solved exactly and fed to the incumbent, and
the rest get a feasible sample and a bound before being queued. The child that
forces a coordinate nonzero keeps its parent's bound and minimizer, since the
parent's minimum over the closed box is still attained there.
"""

from __future__ import annotations

import heapq
import itertools
import logging
from dataclasses import dataclass
from typing import List, Optional, Sequence, Tuple

import numpy as np

from . import qp, sfs
from .config import SolverConfig, SolveResult, SolveTrace, StopReason, StopWatch, Selection
from .errors import EmptyList, InfeasibleCandidate, InvalidK, NoBranchableCoordinate
from .flagbox import ONE, TWO, FlagBox, Verdict, branch, check_deletion, initial_flagbox, support
from .qp import QuadraticObjective, SearchBox

log = logging.getLogger(__name__)


@dataclass(eq=False)
class Node:
    fb: FlagBox
    feasible_point: np.ndarray
    feasible_value: float
    lower_bound_value: float
    lb_point: np.ndarray
    lb_inherited: bool = False
    order: int = 0


@dataclass
class Incumbent:
    point: np.ndarray
    value: float


def _key(node: Node, selection: Selection):
    if selection is Selection.BFS:
        return (node.lower_bound_value, node.order)
    return (-node.fb.n_two, node.order)


def select_node(nodes: Sequence[Node], selection) -> Node:
    """BFS: smallest lower bound. DFS: most flag-2 coordinates. Ties go to the oldest node."""
    if not nodes:
        raise EmptyList("no node to select")
    selection = Selection(selection)
    return min(nodes, key=lambda n: _key(n, selection))


class NodeQueue:
    """Heap keyed like :func:`select_node`."""

    def __init__(self, selection):
        self.selection = Selection(selection)
        self._heap: list = []
        self._counter = itertools.count()

    def __len__(self) -> int:
        return len(self._heap)

    def push(self, node: Node) -> None:
        node.order = next(self._counter)
        heapq.heappush(self._heap, (_key(node, self.selection), node.order, node))

    def pop(self) -> Node:
        if not self._heap:
            raise EmptyList("node list is empty")
        return heapq.heappop(self._heap)[2]


def choose_branch_coordinate(flags, lb_minimizer) -> int:
    """Undecided coordinate with the largest ``|x_i|`` at the node's bound minimizer.

    Ties (including the all-zero case) go to the lowest index.
    """
    flags = np.asarray(getattr(flags, "flags", flags))
    eligible = flags == ONE
    if not eligible.any():
        raise NoBranchableCoordinate("no coordinate with flag 1")
    score = np.where(eligible, np.abs(np.asarray(lb_minimizer, dtype=float)), -1.0)
    return int(np.argmax(score))


def update_incumbent(inc: Incumbent, point, value: float, k: int,
                     box: Optional[SearchBox] = None) -> Incumbent:
    """Return the candidate if it is strictly better, else ``inc``."""
    point = np.asarray(point, dtype=float)
    if np.count_nonzero(point) > k:
        raise InfeasibleCandidate(f"candidate has {np.count_nonzero(point)} nonzeros > k={k}")
    if box is not None and not box.contains(point):
        raise InfeasibleCandidate("candidate lies outside the search box")
    if value < inc.value:
        return Incumbent(point, float(value))
    return inc


def solve(obj: QuadraticObjective, box: SearchBox, k: int,
          cfg: SolverConfig = SolverConfig()) -> SolveResult:
    p = obj.p
    if not 1 <= k < p:
        raise InvalidK(f"need 1 <= k < p, got k={k}, p={p}")
    if box.p != p:
        raise ValueError("box and objective dimensions differ")
    tol = cfg.qp_tol
    prune = not cfg.disable_bound_deletion
    watch = StopWatch(cfg, soft=True)
    trace = SolveTrace() if cfg.record_trace else None
    debug = log.isEnabledFor(logging.DEBUG)

    root = initial_flagbox(p)
    root_sol = qp.lower_bound(obj, box, range(p), tol)
    lb_calls = 1
    cache = sfs.SupportCache(obj, box, tol)
    start = sfs.run_sfs(obj, box, k, sfs.top_k_support(root_sol.point, k), tol, cache=cache)
    inc = Incumbent(start.point, start.value)
    nodes_created = 1
    iteration = 0

    def offer(point, value):
        nonlocal inc
        new = update_incumbent(inc, point, value, k)
        if new is not inc:
            inc = new
            watch.improved(iteration)

    def sample(fb: FlagBox, lb_point) -> Tuple[np.ndarray, float]:
        twos = fb.indices(TWO)
        need = k - len(twos)
        pad = sfs.top_k_support(lb_point, need, allowed=fb.indices(ONE)) if need > 0 else ()
        guess = tuple(sorted(twos + pad))
        if cfg.sfs_every and nodes_created % cfg.sfs_every == 0:
            res = sfs.run_sfs(obj, box, k, guess, tol, cache=cache)
            return res.point, res.value
        sol = cache(guess, lb_point)
        return sol.point, sol.value

    queue = NodeQueue(cfg.selection)
    queue.push(Node(root, start.point, start.value, root_sol.value, root_sol.point))
    stop = StopReason.EXHAUSTED

    while len(queue):
        reason = watch.check(iteration)
        if reason is not None:
            stop = reason
            break
        node = queue.pop()
        if prune and inc.value <= node.lower_bound_value:
            if trace is not None:
                trace.deleted.append((str(node.fb), "bound", node.lower_bound_value))
            continue
        iteration += 1
        if debug:
            log.debug("iter=%d list=%d incumbent=%.12g node=%s lb=%.12g", iteration,
                      len(queue) + 1, inc.value, node.fb, node.lower_bound_value)
        try:
            eta = choose_branch_coordinate(node.fb.flags, node.lb_point)
        except NoBranchableCoordinate:
            continue

        for child, fixes_zero in zip(branch(node.fb, eta), (True, False)):
            nodes_created += 1
            verdict = check_deletion(child, p, k)
            if verdict.kind is Verdict.INFEASIBLE:
                if trace is not None:
                    trace.deleted.append((str(child), "infeasible", np.nan))
                continue
            if verdict.terminal:
                sol = qp.lower_bound(obj, box, verdict.support, tol, node.lb_point)
                lb_calls += 1
                offer(sol.point, sol.value)
                if trace is not None:
                    trace.deleted.append((str(child), "terminal", sol.value))
                    trace.parent_child_bounds.append((node.lower_bound_value, sol.value, False))
                continue

            if fixes_zero:
                warm = node.lb_point.copy()
                warm[eta] = 0.0
                sol = qp.lower_bound(obj, box, support(child), tol, warm)
                lb_calls += 1
                lb, lb_point, inherited = sol.value, sol.point, False
            else:
                lb, lb_point, inherited = node.lower_bound_value, node.lb_point, True
            if trace is not None:
                trace.parent_child_bounds.append((node.lower_bound_value, lb, inherited))

            fpoint, fvalue = sample(child, lb_point)
            offer(fpoint, fvalue)
            if prune and inc.value <= lb:
                if trace is not None:
                    trace.deleted.append((str(child), "bound", lb))
                continue
            queue.push(Node(child, fpoint, fvalue, lb, lb_point, inherited))

        if trace is not None:
            trace.incumbents.append((iteration, inc.value))

    return SolveResult(
        point=inc.point, value=inc.value, iterations=iteration, lb_calls=lb_calls,
        nodes_created=nodes_created, elapsed=watch.elapsed(), stop_reason=stop,
        sample_qp_calls=cache.calls, trace=trace,
    )
