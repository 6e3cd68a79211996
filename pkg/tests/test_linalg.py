import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from pumcode import InconsistentSystemError, MatrixGF, UsageError, get_field
from pumcode.linalg import Solver, mat_vec, matmul, rank, solve_determined, solve_unique, vstack

F8 = get_field(2, 3)
F9 = get_field(3, 2)


@st.composite
def matrices(draw, field=F8, max_rows=4, max_cols=6):
    rows = draw(st.integers(1, max_rows))
    cols = draw(st.integers(rows, max_cols))
    entries = [[draw(st.integers(0, field.q - 1)) for _ in range(cols)] for _ in range(rows)]
    return MatrixGF(field, entries, cols)


def vandermonde(field, rows, cols):
    pts = field.nonzero_elements()[:cols]
    return MatrixGF(field, [[field.pow(x, r) for x in pts] for r in range(rows)], cols)


@settings(max_examples=100, deadline=None)
@given(st.sampled_from([F8, F9]), st.data())
def test_solve_recovers_vector(field, data):
    rows = data.draw(st.integers(1, 4))
    cols = data.draw(st.integers(rows, 7))
    m = vandermonde(field, rows, cols)
    x = [data.draw(st.integers(0, field.q - 1)) for _ in range(rows)]
    rhs = mat_vec(m, x)
    assert solve_unique(m, rhs) == x
    assert Solver(m).solve(rhs) == x


@settings(max_examples=100, deadline=None)
@given(matrices())
def test_rank_bounds_and_transpose(m):
    r = rank(m)
    assert 0 <= r <= min(m.rows, m.cols)
    assert rank(m.transpose()) == r


def test_inconsistent_rhs_raises():
    m = vandermonde(F8, 2, 4)
    with pytest.raises(InconsistentSystemError):
        solve_unique(m, [1, 0, 0, 0])
    with pytest.raises(InconsistentSystemError):
        Solver(m).solve([1, 0, 0, 0])
    # the unchecked solve trusts the caller
    Solver(m).solve([1, 0, 0, 0], check=False)


def test_rank_deficient_solver_rejected():
    m = MatrixGF(F8, [[1, 2, 3], [2, 4, 6]])
    assert rank(m) == 1
    with pytest.raises(UsageError):
        Solver(m)


def test_solve_determined_partial():
    # x0 + x1 = 3, x2 = 5: only x2 is pinned down
    values = solve_determined(F8, [[1, 1, 0], [0, 0, 1]], [3, 5], 3)
    assert values == {2: 5}
    with pytest.raises(InconsistentSystemError):
        solve_determined(F8, [[1, 0], [1, 0]], [1, 2], 2)


def test_matmul_identity_and_stack():
    m = vandermonde(F8, 3, 5)
    assert matmul(MatrixGF.identity(F8, 3), m) == m
    stacked = vstack(m.row_slice(0, 1), m.row_slice(1, 3))
    assert stacked == m
    assert m.column_slice(1, 3).cols == 2
    with pytest.raises(UsageError):
        vstack(m, vandermonde(F8, 2, 4))
    with pytest.raises(UsageError):
        MatrixGF(F8, [[1, 2], [3]])
    with pytest.raises(UsageError):
        MatrixGF(F8, [[9]])
