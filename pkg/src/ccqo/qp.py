"""Convex quadratic minimization over a box.

The objective is ``f(x) = 0.5 x'Qx + q'x + c`` with ``Q`` symmetric positive
semi-definite. Every bound used by the branch-and-bound solvers is the exact
minimum of ``f`` over a box with some coordinates pinned to zero, so this module
is the workhorse of the package.

The solver is a primal active-set method. On the current free face it takes a
Newton step (Cholesky, or an eigen-split when the face Hessian is singular, in
which case it first descends along the zero-curvature part of the gradient),
with an exact line search capped at the first blocking bound. When the face is
stationary, the bound with the worst multiplier is released. A steepest-descent
step is used whenever the Newton direction fails to be a descent direction.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Optional

import numpy as np
from scipy import linalg

from .errors import EmptySupport, NonConvergence

DEFAULT_TOL = 1e-9
_EPS = np.finfo(float).eps


@dataclass(frozen=True, eq=False)
class QuadraticObjective:
    """``f(x) = 0.5 x'Qx + q'x + c``.

    Symmetry and positive semi-definiteness of ``Q`` are checked on
    construction (the eigenvalue check is skipped above p = 500). Pass
    ``check=False`` for objects built from an already validated one.
    """

    Q: np.ndarray
    q: np.ndarray
    c: float = 0.0
    check: bool = field(default=True, repr=False)

    def __post_init__(self):
        Q = np.array(self.Q, dtype=float, ndmin=2)
        q = np.array(self.q, dtype=float).ravel()
        object.__setattr__(self, "Q", Q)
        object.__setattr__(self, "q", q)
        object.__setattr__(self, "c", float(self.c))
        p = q.size
        if p < 1 or Q.shape != (p, p):
            raise ValueError(f"Q must be {p}x{p}, got {Q.shape}")
        if not self.check:
            return
        if not (np.all(np.isfinite(Q)) and np.all(np.isfinite(q)) and np.isfinite(self.c)):
            raise ValueError("objective data must be finite")
        asym = np.max(np.abs(Q - Q.T))
        if asym > 1e-12:
            raise ValueError(f"Q is not symmetric (max asymmetry {asym:.3g})")
        if p <= 500:
            w = np.linalg.eigvalsh(Q)
            scale = max(abs(w[0]), abs(w[-1]))
            if w[0] < -1e-8 * scale:
                raise ValueError(f"Q is not positive semi-definite (min eigenvalue {w[0]:.3g})")

    @property
    def p(self) -> int:
        return self.q.size

    def value(self, x) -> float:
        x = np.asarray(x, dtype=float)
        return float(x @ (0.5 * (self.Q @ x) + self.q) + self.c)

    def gradient(self, x) -> np.ndarray:
        return self.Q @ np.asarray(x, dtype=float) + self.q

    def restrict(self, support) -> "QuadraticObjective":
        """Objective over the coordinates in ``support``, the rest fixed at 0."""
        idx = index_set(support, self.p)
        if idx.size == 0:
            raise EmptySupport("restriction to an empty support is the constant c")
        return QuadraticObjective(self.Q[np.ix_(idx, idx)], self.q[idx], self.c, check=False)


@dataclass(frozen=True, eq=False)
class SearchBox:
    """Per-coordinate bounds ``lower_i <= x_i <= upper_i`` with 0 strictly inside the span."""

    lower: np.ndarray
    upper: np.ndarray

    def __post_init__(self):
        lo = np.array(self.lower, dtype=float).ravel()
        hi = np.array(self.upper, dtype=float).ravel()
        object.__setattr__(self, "lower", lo)
        object.__setattr__(self, "upper", hi)
        if lo.shape != hi.shape:
            raise ValueError("lower and upper must have the same length")
        if np.any(lo > 0) or np.any(hi < 0):
            raise ValueError("every interval must contain 0")
        if np.any(lo >= hi):
            raise ValueError("every interval must be non-degenerate")

    @property
    def p(self) -> int:
        return self.lower.size

    def restrict(self, support) -> "SearchBox":
        idx = index_set(support, self.p)
        return SearchBox(self.lower[idx], self.upper[idx])

    def contains(self, x, atol: float = 1e-12) -> bool:
        x = np.asarray(x, dtype=float)
        return bool(np.all(x >= self.lower - atol) and np.all(x <= self.upper + atol))


@dataclass
class QpSolution:
    point: np.ndarray
    value: float
    kkt_residual: float
    iterations: int


def index_set(support: Iterable[int], p: int) -> np.ndarray:
    """Sorted array of distinct 0-based indices, validated against ``p``."""
    if not isinstance(support, (np.ndarray, tuple, list, range)):
        support = list(support)
    idx = np.asarray(support, dtype=np.intp).ravel()
    if idx.size > 1 and np.any(idx[1:] <= idx[:-1]):
        idx = np.unique(idx)
    if idx.size and (idx[0] < 0 or idx[-1] >= p):
        raise IndexError(f"support indices must lie in [0, {p})")
    return idx


def kkt_residual(Q, q, lower, upper, x) -> float:
    """Largest violation of the box KKT conditions at ``x``.

    A coordinate sitting exactly on a bound only needs its gradient to point
    outward; interior coordinates need a zero gradient.
    """
    g = Q @ x + q
    at_lo = x <= lower
    at_hi = x >= upper
    r = np.abs(g)
    r = np.where(at_lo, np.maximum(-g, 0.0), r)
    r = np.where(at_hi, np.maximum(g, 0.0), r)
    return float(r.max()) if r.size else 0.0


_potrf, _potrs = linalg.lapack.get_lapack_funcs(("potrf", "potrs"), (np.zeros((1, 1)),))


def _chol_solve(H: np.ndarray, rhs: np.ndarray) -> Optional[np.ndarray]:
    """``H^{-1} rhs`` by Cholesky, or None when the factorization breaks down."""
    factor, info = _potrf(H, lower=0, clean=0)
    if info != 0:
        return None
    x, info = _potrs(factor, rhs)
    if info != 0 or not np.all(np.isfinite(x)):
        return None
    return x


def _face_direction(H: np.ndarray, g: np.ndarray, tol: float) -> np.ndarray:
    d = _chol_solve(H, -g)
    if d is not None:
        return d
    w, V = np.linalg.eigh(H)
    cutoff = max(w[-1], 0.0) * H.shape[0] * _EPS * 16
    pos = w > cutoff
    gt = V.T @ g
    null_part = V[:, ~pos] @ gt[~pos]
    if null_part.size and np.max(np.abs(null_part)) > tol:
        # zero-curvature descent: runs until a bound blocks
        return -null_part
    return -(V[:, pos] @ (gt[pos] / w[pos]))


def _solve(Q, q, c, lo, hi, tol, x0=None, max_iter=None) -> QpSolution:
    p = q.size
    if p == 0:
        return QpSolution(np.zeros(0), float(c), 0.0, 0)
    if max_iter is None:
        max_iter = 50 * p
    # interior minimizer: one factorization, no working set
    x = _chol_solve(Q, -q)
    if x is not None and np.all(x > lo) and np.all(x < hi):
        g = Q @ x + q
        res = float(np.max(np.abs(g)))
        if res <= tol:
            return QpSolution(x, float(x @ (0.5 * (Q @ x) + q) + c), res, 1)

    x = np.zeros(p) if x0 is None else np.array(x0, dtype=float)
    np.clip(x, lo, hi, out=x)
    g = Q @ x + q
    # a coordinate on a bound joins the working set only if pushed outward
    at_lo = (x <= lo) & (g > 0)
    at_hi = (x >= hi) & (g < 0)

    for it in range(1, max_iter + 1):
        free = ~(at_lo | at_hi)
        idx = np.flatnonzero(free)
        gf = g[idx]
        if idx.size and np.max(np.abs(gf)) > tol:
            H = Q.take(idx, 0).take(idx, 1)
            d = _face_direction(H, gf, tol)
            slope = gf @ d
            if not slope < 0:
                d = -gf
                slope = -(gf @ gf)
            curv = d @ H @ d
            alpha = -slope / curv if curv > 0 else np.inf
            xf = x[idx]
            with np.errstate(divide="ignore", invalid="ignore"):
                ratio = np.where(d > 0, (hi[idx] - xf) / d,
                                 np.where(d < 0, (lo[idx] - xf) / d, np.inf))
            j = int(np.argmin(ratio))
            amax = ratio[j]
            if alpha >= amax:
                if not np.isfinite(amax):
                    raise NonConvergence("unbounded descent direction inside a finite box")
                x[idx] = xf + amax * d
                blocked = idx[ratio <= amax]
                up = d[ratio <= amax] > 0
                x[blocked[up]] = hi[blocked[up]]
                x[blocked[~up]] = lo[blocked[~up]]
                at_hi[blocked[up]] = True
                at_lo[blocked[~up]] = True
            else:
                x[idx] = xf + alpha * d
            np.clip(x, lo, hi, out=x)
            g = Q @ x + q
            continue

        viol = np.zeros(p)
        viol[at_lo] = -g[at_lo]
        viol[at_hi] = g[at_hi]
        j = int(np.argmax(viol))
        if viol[j] <= tol:
            res = kkt_residual(Q, q, lo, hi, x)
            return QpSolution(x, float(x @ (0.5 * (Q @ x) + q) + c), res, it)
        at_lo[j] = at_hi[j] = False

    res = kkt_residual(Q, q, lo, hi, x)
    if res <= tol:
        return QpSolution(x, float(x @ (0.5 * (Q @ x) + q) + c), res, max_iter)
    raise NonConvergence(f"box QP (p={p}) stopped after {max_iter} iterations, "
                         f"KKT residual {res:.3g} > {tol:.3g}")


def minimize_box_qp(obj: QuadraticObjective, box: SearchBox, tol: float = DEFAULT_TOL,
                    x0=None, max_iter: Optional[int] = None) -> QpSolution:
    """Global minimum of ``obj`` over ``box`` with a KKT certificate at ``tol``."""
    if tol <= 0:
        raise ValueError("tol must be positive")
    if box.p != obj.p:
        raise ValueError("box and objective dimensions differ")
    return _solve(obj.Q, obj.q, obj.c, box.lower, box.upper, tol, x0, max_iter)


def lower_bound(obj: QuadraticObjective, box: SearchBox, support, tol: float = DEFAULT_TOL,
                x0=None) -> QpSolution:
    """Minimum of ``obj`` over ``box`` with coordinates outside ``support`` fixed at 0.

    The returned point is a full p-vector. An empty support gives ``f(0) = c``.
    ``x0`` is an optional full-length warm start.
    """
    p = obj.p
    idx = index_set(support, p)
    if idx.size == 0:
        return QpSolution(np.zeros(p), obj.c, 0.0, 0)
    if idx.size == p:
        return _solve(obj.Q, obj.q, obj.c, box.lower, box.upper, tol, x0)
    start = None if x0 is None else np.asarray(x0, dtype=float)[idx]
    sol = _solve(obj.Q.take(idx, 0).take(idx, 1), obj.q[idx], obj.c, box.lower[idx],
                 box.upper[idx], tol, start)
    full = np.zeros(p)
    full[idx] = sol.point
    return QpSolution(full, sol.value, sol.kkt_residual, sol.iterations)
