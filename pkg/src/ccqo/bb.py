"""Classical feature-selection branch-and-bound (the BB baseline).

The search tree deletes one feature per level until ``p - k`` are gone. A node
keeps its retained set plus the pool of features it may still delete; child
``i`` deletes the ``i``-th pool feature and may only delete the pool features
after it, so sibling subtrees shrink from left to right and every size-k subset
is reached exactly once. The rightmost child always has exactly as many pool
features as deletions left, i.e. its subtree is a single chain, so it jumps
straight to its leaf without evaluating the chain (minimum-solution-tree).

The criterion ``q(S)`` (box-QP minimum over the retained set ``S``) only grows
as features are deleted, so a node with ``q(S) >= incumbent`` is pruned. With
in-level ordering on, the pool is sorted by descending gain ``q(S - s) - q(S)``
before branching: the largest (left) subtree deletes the most useful feature
and is the one most likely to be pruned, while the rightmost chain deletes the
least useful ones and yields a greedy incumbent. The depth-first search pops
the rightmost (smallest) subtree first.
"""

from __future__ import annotations

import math

import numpy as np

from . import qp, sfs
from .config import SolverConfig, SolveResult, StopReason, StopWatch
from .errors import InvalidK
from .ibb import Incumbent, update_incumbent
from .qp import QuadraticObjective, SearchBox


def solve_bb(obj: QuadraticObjective, box: SearchBox, k: int,
             cfg: SolverConfig = SolverConfig()) -> SolveResult:
    p = obj.p
    if not 1 <= k < p:
        raise InvalidK(f"need 1 <= k < p, got k={k}, p={p}")
    tol = cfg.qp_tol
    prune = not cfg.disable_bound_deletion
    depth = p - k
    watch = StopWatch(cfg, soft=False)
    lb_calls = 0

    def q_of(retained, x0=None):
        nonlocal lb_calls
        lb_calls += 1
        return qp.lower_bound(obj, box, retained, tol, x0)

    inc = Incumbent(np.zeros(p), math.inf)
    full = tuple(range(p))
    root = q_of(full)
    # entries: (retained, pool, level, value or None, minimizer or warm start)
    stack = [(full, full, 0, root.value, root.point)]
    nodes_created = 1
    iteration = 0
    stop = StopReason.EXHAUSTED

    while stack:
        reason = watch.check(iteration)
        if reason is not None:
            stop = reason
            break
        retained, pool, level, value, point = stack.pop()
        if value is None:
            sol = q_of(retained, point)
            value, point = sol.value, sol.point
        if level == depth:
            inc = update_incumbent(inc, point, value, k)
            continue
        if prune and value >= inc.value:
            continue
        iteration += 1
        remaining = depth - level
        n_children = len(pool) - remaining + 1

        child_vals = {}
        if cfg.bb_inlevel_ordering:
            for s in pool:
                warm = point.copy()
                warm[s] = 0.0
                child_vals[s] = q_of(tuple(i for i in retained if i != s), warm)
            gains = np.array([child_vals[s].value - value for s in pool])
            order = np.argsort(-gains, kind="stable")
            pool = tuple(pool[i] for i in order)

        children = []
        for i in range(n_children):
            s = pool[i]
            rest = pool[i + 1:]
            known = child_vals.get(s)
            if known is not None and prune and known.value >= inc.value:
                continue
            warm = point.copy()
            warm[s] = 0.0
            if i == n_children - 1 and remaining > 1:
                dropped = set(rest) | {s}
                warm[list(rest)] = 0.0
                leaf = tuple(j for j in retained if j not in dropped)
                children.append((leaf, (), depth, None, warm))
            elif known is not None:
                children.append((tuple(j for j in retained if j != s), rest, level + 1,
                                 known.value, known.point))
            else:
                children.append((tuple(j for j in retained if j != s), rest, level + 1,
                                  None, warm))
        nodes_created += len(children)
        # rightmost (smallest) subtree is popped first
        stack.extend(children)

    if not math.isfinite(inc.value):
        # stopped before reaching any leaf
        guess = sfs.top_k_support(root.point, k)
        sol = qp.lower_bound(obj, box, guess, tol, root.point)
        inc = Incumbent(sol.point, sol.value)

    return SolveResult(
        point=inc.point, value=inc.value, iterations=iteration, lb_calls=lb_calls,
        nodes_created=nodes_created, elapsed=watch.elapsed(), stop_reason=stop,
    )
