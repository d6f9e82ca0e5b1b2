"""Small dense linear solves and determinants over Scalar.

Exact-mode systems go through fraction-free (Bareiss) elimination, so every
intermediate value is a minor of the input matrix; float-mode systems use
plain Gaussian elimination with partial pivoting.  Matrices at the scales
used here are tiny (at most a few dozen rows), so no structure is exploited.
"""

from __future__ import annotations

from typing import List, Sequence

from .errors import SingularMatrixError
from .scalar import ONE, ZERO, Scalar


def _is_exact(matrix: Sequence[Sequence[Scalar]]) -> bool:
    return all(entry.is_exact for row in matrix for entry in row)


def _copy(matrix) -> List[List[Scalar]]:
    return [list(row) for row in matrix]


def _bareiss(rows: List[List[Scalar]]):
    """In-place fraction-free elimination; returns the row-swap sign."""
    n = len(rows)
    sign = 1
    prev = ONE
    for k in range(n):
        pivot_row = next((i for i in range(k, n) if not rows[i][k].is_zero()), None)
        if pivot_row is None:
            raise SingularMatrixError("matrix is singular")
        if pivot_row != k:
            rows[k], rows[pivot_row] = rows[pivot_row], rows[k]
            sign = -sign
        pivot = rows[k][k]
        for i in range(k + 1, n):
            for j in range(k + 1, len(rows[i])):
                rows[i][j] = (pivot * rows[i][j] - rows[i][k] * rows[k][j]) / prev
            rows[i][k] = ZERO
        prev = pivot
    return sign


def _partial_pivot(rows: List[List[Scalar]]):
    n = len(rows)
    sign = 1
    for k in range(n):
        pivot_row = max(range(k, n), key=lambda i: abs(rows[i][k]))
        if rows[pivot_row][k].is_zero():
            raise SingularMatrixError("matrix is singular")
        if pivot_row != k:
            rows[k], rows[pivot_row] = rows[pivot_row], rows[k]
            sign = -sign
        pivot = rows[k][k]
        for i in range(k + 1, n):
            factor = rows[i][k] / pivot
            for j in range(k, len(rows[i])):
                rows[i][j] = rows[i][j] - factor * rows[k][j]
            rows[i][k] = ZERO
    return sign


def solve(matrix: Sequence[Sequence[Scalar]], rhs: Sequence[Scalar]) -> List[Scalar]:
    """Solve the square system matrix @ x = rhs; raises SingularMatrixError."""
    n = len(matrix)
    if any(len(row) != n for row in matrix) or len(rhs) != n:
        raise ValueError("solve expects a square matrix and a matching vector")
    if n == 0:
        return []
    rows = [list(row) + [rhs[i]] for i, row in enumerate(matrix)]
    if _is_exact(rows):
        _bareiss(rows)
    else:
        _partial_pivot(rows)
    x: List[Scalar] = [ZERO] * n
    for i in range(n - 1, -1, -1):
        acc = rows[i][n]
        for j in range(i + 1, n):
            acc = acc - rows[i][j] * x[j]
        x[i] = acc / rows[i][i]
    return x


def determinant(matrix: Sequence[Sequence[Scalar]]) -> Scalar:
    """Determinant of a square Scalar matrix (zero for singular input)."""
    n = len(matrix)
    if any(len(row) != n for row in matrix):
        raise ValueError("determinant expects a square matrix")
    if n == 0:
        return ONE
    rows = _copy(matrix)
    try:
        sign = _bareiss(rows) if _is_exact(rows) else _partial_pivot(rows)
    except SingularMatrixError:
        return ZERO
    det = rows[n - 1][n - 1]
    if not _is_exact(rows):
        # plain elimination leaves the product of pivots
        det = ONE
        for i in range(n):
            det = det * rows[i][i]
    return det if sign > 0 else -det
