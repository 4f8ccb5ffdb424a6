"""Solver configuration, results and stopping-rule bookkeeping shared by IBB+ and BB."""

from __future__ import annotations

import enum
import time
from dataclasses import dataclass, field
from typing import List, Optional, Tuple

import numpy as np

from .qp import DEFAULT_TOL


class Selection(str, enum.Enum):
    BFS = "bfs"
    DFS = "dfs"


class StopReason(str, enum.Enum):
    EXHAUSTED = "Exhausted"
    HARD_TIME = "HardTime"
    HARD_ITER = "HardIter"
    SOFT_NO_IMPROVE_ITERS = "SoftNoImproveIters"
    SOFT_NO_IMPROVE_TIME = "SoftNoImproveTime"


@dataclass(frozen=True)
class SolverConfig:
    """Limits and switches for a branch-and-bound run.

    Setting a soft limit to ``None`` turns it off; the defaults are the
    10-minute / 1e6-iteration hard stops and 500-iteration / 5-minute soft
    stops used in the benchmark protocol. Soft stops apply to IBB+ only.
    """

    selection: Selection = Selection.BFS
    max_iterations: int = 1_000_000
    hard_time_limit: float = 600.0
    soft_no_improve_iters: Optional[int] = 500
    soft_no_improve_time: Optional[float] = 300.0
    qp_tol: float = DEFAULT_TOL
    disable_bound_deletion: bool = False
    # full SFS pass at the root and on every sfs_every-th created node; 0 = root only
    sfs_every: int = 100
    bb_inlevel_ordering: bool = True
    record_trace: bool = False

    def __post_init__(self):
        object.__setattr__(self, "selection", Selection(self.selection))
        for name in ("max_iterations", "hard_time_limit", "qp_tol"):
            if not getattr(self, name) > 0:
                raise ValueError(f"{name} must be positive")
        for name in ("soft_no_improve_iters", "soft_no_improve_time"):
            v = getattr(self, name)
            if v is not None and not v > 0:
                raise ValueError(f"{name} must be positive or None")
        if self.sfs_every < 0:
            raise ValueError("sfs_every must be non-negative")

    @classmethod
    def exhaustive(cls, **kw) -> "SolverConfig":
        """No soft stops and effectively unlimited hard limits."""
        base = dict(max_iterations=10**12, hard_time_limit=float("inf"),
                    soft_no_improve_iters=None, soft_no_improve_time=None)
        base.update(kw)
        return cls(**base)


@dataclass
class SolveTrace:
    """Instrumentation collected when ``record_trace`` is on.

    ``incumbents`` holds ``(iteration, value)`` after every iteration.
    ``deleted`` holds ``(flags, reason, bound)`` for every discarded box, with
    reason one of ``"infeasible"``, ``"terminal"``, ``"bound"``.
    ``parent_child_bounds`` holds ``(parent lb, child lb, inherited)``.
    """

    incumbents: List[Tuple[int, float]] = field(default_factory=list)
    deleted: List[Tuple[str, str, float]] = field(default_factory=list)
    parent_child_bounds: List[Tuple[float, float, bool]] = field(default_factory=list)


@dataclass
class SolveResult:
    point: np.ndarray
    value: float
    iterations: int
    lb_calls: int
    nodes_created: int
    elapsed: float
    stop_reason: StopReason
    sample_qp_calls: int = 0
    trace: Optional[SolveTrace] = None

    @property
    def support(self) -> Tuple[int, ...]:
        return tuple(int(i) for i in np.flatnonzero(self.point))


class StopWatch:
    """Tracks the hard and soft stopping rules for one run (wall clock)."""

    def __init__(self, cfg: SolverConfig, soft: bool):
        self.cfg = cfg
        self.soft = soft
        self.start = time.perf_counter()
        self.last_improve_iter = 0
        self.last_improve_time = self.start

    def elapsed(self) -> float:
        return time.perf_counter() - self.start

    def improved(self, iteration: int) -> None:
        self.last_improve_iter = iteration
        self.last_improve_time = time.perf_counter()

    def check(self, iteration: int) -> Optional[StopReason]:
        cfg = self.cfg
        now = time.perf_counter()
        if now - self.start >= cfg.hard_time_limit:
            return StopReason.HARD_TIME
        if iteration >= cfg.max_iterations:
            return StopReason.HARD_ITER
        if self.soft:
            if (cfg.soft_no_improve_iters is not None
                    and iteration - self.last_improve_iter >= cfg.soft_no_improve_iters):
                return StopReason.SOFT_NO_IMPROVE_ITERS
            if (cfg.soft_no_improve_time is not None
                    and now - self.last_improve_time >= cfg.soft_no_improve_time):
                return StopReason.SOFT_NO_IMPROVE_TIME
        return None
