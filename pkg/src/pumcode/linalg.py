"""Dense matrices over GF(q) with row-vector conventions (v . M)."""
from __future__ import annotations

from typing import Sequence

from .errors import InconsistentSystemError, UsageError
from .galois import Field


class MatrixGF:
    """Immutable dense matrix; ``entries`` is a tuple of row tuples."""

    __slots__ = ("field", "rows", "cols", "entries")

    def __init__(self, field: Field, entries: Sequence[Sequence[int]], cols: int | None = None):
        rows = tuple(tuple(int(x) for x in row) for row in entries)
        if cols is None:
            if not rows:
                raise UsageError("cannot infer the column count of an empty matrix")
            cols = len(rows[0])
        for row in rows:
            if len(row) != cols:
                raise UsageError("ragged matrix rows")
            for x in row:
                field.check(x)
        self.field = field
        self.rows = len(rows)
        self.cols = cols
        self.entries = rows

    @classmethod
    def zeros(cls, field: Field, rows: int, cols: int) -> "MatrixGF":
        return cls(field, [[0] * cols for _ in range(rows)], cols)

    @classmethod
    def identity(cls, field: Field, size: int) -> "MatrixGF":
        return cls(field, [[int(i == j) for j in range(size)] for i in range(size)], size)

    def __getitem__(self, idx: int) -> tuple[int, ...]:
        return self.entries[idx]

    def __eq__(self, other: object) -> bool:
        return (
            isinstance(other, MatrixGF)
            and self.field == other.field
            and self.cols == other.cols
            and self.entries == other.entries
        )

    def __repr__(self) -> str:
        return f"MatrixGF({self.rows}x{self.cols}, {list(map(list, self.entries))})"

    def row_slice(self, start: int, stop: int) -> "MatrixGF":
        return MatrixGF(self.field, self.entries[start:stop], self.cols)

    def column_slice(self, start: int, stop: int) -> "MatrixGF":
        return MatrixGF(self.field, [row[start:stop] for row in self.entries], stop - start)

    def transpose(self) -> "MatrixGF":
        return MatrixGF(self.field, list(zip(*self.entries)) if self.rows else [], self.rows)

    def tolist(self) -> list[list[int]]:
        return [list(row) for row in self.entries]


def vstack(*blocks: MatrixGF) -> MatrixGF:
    field, cols = blocks[0].field, blocks[0].cols
    rows: list[tuple[int, ...]] = []
    for b in blocks:
        if b.cols != cols or b.field != field:
            raise UsageError("cannot stack matrices of different widths or fields")
        rows.extend(b.entries)
    return MatrixGF(field, rows, cols)


def mat_vec(m: MatrixGF, v: Sequence[int]) -> list[int]:
    """Row vector times matrix: v . m."""
    if len(v) != m.rows:
        raise UsageError(f"vector of length {len(v)} does not match {m.rows} matrix rows")
    f = m.field
    out = [0] * m.cols
    for coef, row in zip(v, m.entries):
        if coef:
            out = f.vec_add(out, f.vec_scale(coef, row))
    return out


def matmul(a: MatrixGF, b: MatrixGF) -> MatrixGF:
    if a.cols != b.rows:
        raise UsageError("inner dimensions differ")
    return MatrixGF(a.field, [mat_vec(b, row) for row in a.entries], b.cols)


def rref(rows: list[list[int]], field: Field, ncols: int | None = None) -> tuple[list[list[int]], list[int]]:
    """Reduced row echelon form in place on a copy.

    Pivots are chosen as the first nonzero entry scanning columns left to
    right and rows top-down.  ``ncols`` limits pivot search to the leading
    columns (used for augmented systems).
    """
    rows = [list(r) for r in rows]
    if not rows:
        return rows, []
    width = len(rows[0]) if ncols is None else ncols
    pivots: list[int] = []
    r = 0
    for c in range(width):
        pivot = next((i for i in range(r, len(rows)) if rows[i][c]), None)
        if pivot is None:
            continue
        rows[r], rows[pivot] = rows[pivot], rows[r]
        lead = rows[r][c]
        if lead != 1:
            rows[r] = field.vec_scale(field.inv(lead), rows[r])
        for i in range(len(rows)):
            if i != r and rows[i][c]:
                rows[i] = field.vec_sub(rows[i], field.vec_scale(rows[i][c], rows[r]))
        pivots.append(c)
        r += 1
        if r == len(rows):
            break
    return rows, pivots


def rank(m: MatrixGF) -> int:
    return len(rref([list(r) for r in m.entries], m.field)[1])


def solve_unique(m: MatrixGF, rhs: Sequence[int]) -> list[int]:
    """The unique x with x . m = rhs, for m of full row rank."""
    if len(rhs) != m.cols:
        raise UsageError(f"right-hand side of length {len(rhs)} does not match {m.cols} columns")
    # x . m = rhs  <=>  m^T x^T = rhs^T
    aug = [[m.entries[r][c] for r in range(m.rows)] + [rhs[c]] for c in range(m.cols)]
    red, pivots = rref(aug, m.field, ncols=m.rows)
    if len(pivots) < m.rows:
        raise UsageError("matrix does not have full row rank")
    for row in red[len(pivots):]:
        if row[-1]:
            raise InconsistentSystemError("right-hand side is not in the row space")
    return [red[i][-1] for i in range(m.rows)]


class Solver:
    """Precomputed left inverse for repeated x . m = rhs solves.

    Picks an information set of ``m.rows`` independent columns; the
    remaining columns are only used for the consistency check.
    """

    def __init__(self, m: MatrixGF):
        if m.rows == 0:
            raise UsageError("empty matrix")
        f = m.field
        _, colpiv = rref([list(r) for r in m.entries], f)
        if len(colpiv) < m.rows:
            raise UsageError("matrix does not have full row rank")
        self.matrix = m
        self.info_set = colpiv
        sub = MatrixGF(f, [[row[c] for c in colpiv] for row in m.entries], len(colpiv))
        aug = [list(sub.entries[i]) + [int(i == j) for j in range(m.rows)] for i in range(m.rows)]
        red_inv, _ = rref(aug, f, ncols=m.rows)
        self._inv = MatrixGF(f, [row[m.rows:] for row in red_inv], m.rows)

    def solve(self, rhs: Sequence[int], check: bool = True) -> list[int]:
        """x with x . m = rhs; raises if rhs is outside the row space."""
        m = self.matrix
        if len(rhs) != m.cols:
            raise UsageError(f"right-hand side of length {len(rhs)} does not match {m.cols} columns")
        # x . sub = rhs[info_set]  =>  x = rhs[info_set] . sub^{-1}
        x = mat_vec(self._inv, [rhs[c] for c in self.info_set])
        if check and mat_vec(m, x) != list(rhs):
            raise InconsistentSystemError("right-hand side is not in the row space")
        return x


def solve_determined(
    field: Field, coeffs: Sequence[Sequence[int]], rhs: Sequence[int], nvars: int
) -> dict[int, int]:
    """Solve coeffs . x = rhs (one equation per row) as far as it is determined.

    Returns ``{variable index: value}`` for every variable whose value is the
    same in all solutions.  Raises :class:`InconsistentSystemError` when no
    solution exists.
    """
    aug = [list(row) + [b] for row, b in zip(coeffs, rhs)]
    if not aug:
        return {}
    red, pivots = rref(aug, field, ncols=nvars)
    for row in red[len(pivots):]:
        if row[-1]:
            raise InconsistentSystemError("linear system has no solution")
    pivot_set = set(pivots)
    free = [c for c in range(nvars) if c not in pivot_set]
    values: dict[int, int] = {}
    for r, c in enumerate(pivots):
        row = red[r]
        if all(row[f] == 0 for f in free):
            values[c] = row[-1]
    return values
