"""Exact and heuristic solvers for cardinality-constrained convex quadratic programs.

``minimize 0.5 x'Qx + q'x + c  over a box,  subject to  ||x||_0 <= k``
"""

from .bb import solve_bb
from .config import SolverConfig, SolveResult, StopReason
from .ibb import solve
from .instances import build_ccqo, generate, generate_custom
from .oracle import brute_force_oracle, expected_lb_calls
from .qp import QuadraticObjective, SearchBox, lower_bound, minimize_box_qp
from .sfs import run_sfs

__all__ = [
    "QuadraticObjective", "SearchBox", "SolverConfig", "SolveResult", "StopReason",
    "brute_force_oracle", "build_ccqo", "expected_lb_calls", "generate", "generate_custom",
    "lower_bound", "minimize_box_qp", "run_sfs", "solve", "solve_bb",
]
