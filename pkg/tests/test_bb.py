import numpy as np
import pytest

from ccqo.bb import solve_bb
from ccqo.config import SolverConfig, StopReason
from ccqo.errors import InvalidK
from ccqo.oracle import brute_force_oracle, expected_lb_calls
from ccqo.qp import lower_bound

from helpers import random_problem


def test_lb_call_identity_p5_k2():
    obj, box = random_problem(5, 0)
    cfg = SolverConfig.exhaustive(disable_bound_deletion=True, bb_inlevel_ordering=False)
    assert solve_bb(obj, box, 2, cfg).lb_calls == 16


@pytest.mark.parametrize("p", range(3, 9))
def test_lb_call_identity(p):
    obj, box = random_problem(p, p)
    cfg = SolverConfig.exhaustive(disable_bound_deletion=True, bb_inlevel_ordering=False)
    for k in range(1, p):
        assert solve_bb(obj, box, k, cfg).lb_calls == expected_lb_calls(p, k)


@pytest.mark.parametrize("seed", range(16))
@pytest.mark.parametrize("ordering", [True, False])
def test_matches_oracle(seed, ordering):
    p = 5 + seed % 6
    k = 1 + seed % (p - 1)
    obj, box = random_problem(p, 50 + seed, box=0.5 + seed % 3)
    ref = brute_force_oracle(obj, box, k)
    res = solve_bb(obj, box, k, SolverConfig.exhaustive(bb_inlevel_ordering=ordering))
    assert res.value == pytest.approx(ref.value, rel=1e-9, abs=1e-9)
    assert np.count_nonzero(res.point) <= k


def test_depth_one():
    obj, box = random_problem(6, 3)
    res = solve_bb(obj, box, 5, SolverConfig.exhaustive())
    best = min(lower_bound(obj, box, [j for j in range(6) if j != i]).value for i in range(6))
    assert res.value == pytest.approx(best, abs=1e-12)


def test_invalid_k():
    obj, box = random_problem(4, 0)
    with pytest.raises(InvalidK):
        solve_bb(obj, box, 4)


def test_hard_stop_still_feasible():
    obj, box = random_problem(12, 1)
    res = solve_bb(obj, box, 4, SolverConfig.exhaustive(max_iterations=1))
    assert res.stop_reason is StopReason.HARD_ITER
    assert np.count_nonzero(res.point) <= 4
    assert np.isfinite(res.value)
