import numpy as np
import pytest

from got import _kernels
from got.errors import ValidationError
from got.graphs import DirectedGraph, shortest_path_metric
from got.simplex import LinearProgram, solve_lp
from got.transport import w1_kantorovich


def test_trivial_lp():
    sol = solve_lp(LinearProgram([1.0, 1.0], [[1.0, 1.0]], [1.0]))
    assert sol.status == "optimal"
    assert sol.objective_value == pytest.approx(1.0)


def test_infeasible():
    sol = solve_lp(LinearProgram([0.0], [[1.0]], [-1.0]))
    assert sol.status == "infeasible"
    assert sol.x is None


def test_unbounded():
    sol = solve_lp(LinearProgram([-1.0, 0.0], [[0.0, 1.0]], [1.0]))
    assert sol.status == "unbounded"


def test_point_mass_transport_on_path():
    # marginals are point masses, so the only coupling pairs them directly
    path4 = DirectedGraph(tuple("0123"), ((0, 1), (1, 2), (2, 3)), root=0)
    f0 = np.array([1.0, 0, 0, 0])
    f1 = np.array([0, 0, 0, 1.0])
    value, plan = w1_kantorovich(path4, f0, f1)
    assert value == pytest.approx(shortest_path_metric(path4)[0, 3])
    assert value == pytest.approx(3.0)
    assert plan[0, 3] == pytest.approx(1.0)


def test_redundant_rows_are_handled():
    # duplicated constraint: rank-deficient but feasible
    lp = LinearProgram([1.0, 2.0], [[1.0, 1.0], [1.0, 1.0]], [1.0, 1.0])
    sol = solve_lp(lp)
    assert sol.status == "optimal"
    assert sol.objective_value == pytest.approx(1.0)


def test_validation():
    with pytest.raises(ValidationError):
        LinearProgram([1.0], [[1.0, 2.0]], [1.0])
    with pytest.raises(ValidationError):
        LinearProgram([np.inf, 1.0], [[1.0, 1.0]], [1.0])


def _random_lp(rng, m=6, n=14):
    A = rng.normal(size=(m, n))
    x_feasible = rng.random(n)
    b = A @ x_feasible
    c = rng.normal(size=n)
    return LinearProgram(c, A, b)


@pytest.mark.parametrize("seed", range(10))
def test_solution_certificates(seed):
    rng = np.random.default_rng(seed)
    lp = _random_lp(rng)
    sol = solve_lp(lp)
    if sol.status != "optimal":
        assert sol.status == "unbounded"
        return
    assert np.abs(lp.eq_matrix @ sol.x - lp.eq_rhs).max() <= 1e-8
    assert sol.x.min() >= 0.0
    assert sol.objective_value == pytest.approx(lp.objective @ sol.x)


def test_determinism():
    rng = np.random.default_rng(3)
    lp = _random_lp(rng)
    first = solve_lp(lp)
    second = solve_lp(lp)
    assert first.status == second.status
    assert np.array_equal(first.x, second.x)
    assert first.iterations == second.iterations


@pytest.mark.parametrize("seed", range(5))
def test_objective_invariant_under_permutation(seed):
    rng = np.random.default_rng(50 + seed)
    lp = _random_lp(rng, m=5, n=10)
    base = solve_lp(lp)
    if base.status != "optimal":
        return
    rows = rng.permutation(5)
    cols = rng.permutation(10)
    permuted = LinearProgram(
        lp.objective[cols], lp.eq_matrix[np.ix_(rows, cols)], lp.eq_rhs[rows]
    )
    again = solve_lp(permuted)
    assert again.status == "optimal"
    assert abs(again.objective_value - base.objective_value) <= 1e-9


def test_kernels_agree():
    if _kernels.simplex_iterate_numba is None:
        pytest.skip("numba kernel disabled")
    rng = np.random.default_rng(11)
    for _ in range(5):
        lp = _random_lp(rng)
        saved = _kernels.simplex_iterate
        try:
            _kernels.simplex_iterate = _kernels.simplex_iterate_numba
            fast = solve_lp(lp)
            _kernels.simplex_iterate = _kernels.simplex_iterate_numpy
            slow = solve_lp(lp)
        finally:
            _kernels.simplex_iterate = saved
        assert fast.status == slow.status
        if fast.status == "optimal":
            assert np.abs(fast.x - slow.x).max() <= 1e-12
            assert fast.iterations == slow.iterations
