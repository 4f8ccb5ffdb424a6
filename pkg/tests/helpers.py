import itertools

import numpy as np

from ccqo.qp import QuadraticObjective, SearchBox, kkt_residual


def random_problem(p, seed, rank=None, box=1.0):
    """Random PSD objective (rank deficient when ``rank < p``) over ``[-box, box]^p``."""
    rng = np.random.default_rng(seed)
    A = rng.normal(size=(rank or 2 * p, p))
    Q = A.T @ A
    Q = 0.5 * (Q + Q.T)
    obj = QuadraticObjective(Q, rng.normal(size=p) * 3, float(rng.uniform(0, 5)))
    return obj, SearchBox(np.full(p, -box), np.full(p, box))


def kkt_enumeration(Q, q, c, lo, hi):
    """Box QP minimum by trying every (lower / free / upper) pattern.

    Exponential in p; independent of the active-set code.
    """
    p = len(q)
    best = np.inf
    for pattern in itertools.product((0, 1, 2), repeat=p):
        x = np.zeros(p)
        fixed = np.array(pattern) != 1
        x[np.array(pattern) == 0] = lo[np.array(pattern) == 0]
        x[np.array(pattern) == 2] = hi[np.array(pattern) == 2]
        free = ~fixed
        if free.any():
            H = Q[np.ix_(free, free)]
            rhs = -(q[free] + Q[np.ix_(free, fixed)] @ x[fixed])
            sol, *_ = np.linalg.lstsq(H, rhs, rcond=None)
            if not np.allclose(H @ sol, rhs, atol=1e-9):
                continue
            x[free] = sol
        if np.any(x < lo - 1e-12) or np.any(x > hi + 1e-12):
            continue
        if kkt_residual(Q, q, lo, hi, np.clip(x, lo, hi)) > 1e-7:
            continue
        best = min(best, 0.5 * x @ Q @ x + q @ x + c)
    return best


def subset_minimum(obj, box, support):
    """Restricted minimum via enumeration, for small supports."""
    idx = np.array(sorted(support), dtype=int)
    if idx.size == 0:
        return obj.c
    return kkt_enumeration(obj.Q[np.ix_(idx, idx)], obj.q[idx], obj.c, box.lower[idx],
                           box.upper[idx])
