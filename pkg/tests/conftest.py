import pytest

from got.simplex import LinearProgram, solve_lp


@pytest.fixture(scope="session", autouse=True)
def warm_kernel():
    # first solve triggers numba compilation; keep it out of timed tests
    solve_lp(LinearProgram([1.0, 1.0], [[1.0, 1.0]], [1.0]))
