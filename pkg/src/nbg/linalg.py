"""Dense linear algebra, generic over the package's scalar types.

These routines run unchanged over floats, Fractions, and the Q(sqrt 5)
field, which is what lets the solvers offer exact and approximate modes
through one code path. Matrices are plain lists of lists.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from . import numeric

_PIVOT_TOLERANCE = 1e-12


def _is_exact_matrix(rows, extra=()):
    values = [v for row in rows for v in row] + list(extra)
    return numeric.all_exact(values)


def _promote_ints(m):
    # int / int is float division in Python; Fractions keep exact rows exact
    return [[Fraction(v) if isinstance(v, int) else v for v in row] for row in m]


def _zero_test_for(rows, extra=()):
    if _is_exact_matrix(rows, extra):
        return lambda v: v == 0
    scale = max((abs(float(v)) for row in rows for v in row), default=1.0)
    threshold = _PIVOT_TOLERANCE * max(scale, 1.0)
    return lambda v: abs(float(v)) <= threshold


def rref(rows, is_zero=None):
    """Reduced row echelon form. Returns (new_rows, pivot_columns)."""
    m = [list(row) for row in rows]
    if not m:
        return m, []
    if _is_exact_matrix(m):
        m = _promote_ints(m)
    if is_zero is None:
        is_zero = _zero_test_for(m)
    n_rows, n_cols = len(m), len(m[0])
    pivots = []
    row = 0
    for col in range(n_cols):
        if row >= n_rows:
            break
        # choose the pivot: largest magnitude keeps float mode stable and is
        # deterministic for exact scalars too
        best, best_size = None, None
        for i in range(row, n_rows):
            if not is_zero(m[i][col]):
                size = abs(float(m[i][col]))
                if best is None or size > best_size:
                    best, best_size = i, size
        if best is None:
            continue
        m[row], m[best] = m[best], m[row]
        pivot = m[row][col]
        m[row] = [v / pivot for v in m[row]]
        for i in range(n_rows):
            if i != row and not is_zero(m[i][col]):
                factor = m[i][col]
                m[i] = [a - factor * b for a, b in zip(m[i], m[row])]
        pivots.append(col)
        row += 1
    return m, pivots


@dataclass(frozen=True)
class LinearSolution:
    """Solution set of A x = b.

    status is one of "unique", "family", "none". For a family, `solution`
    is one particular solution and `basis` spans the kernel of A.
    """

    status: str
    solution: tuple | None
    basis: tuple

    @property
    def dimension(self) -> int:
        return len(self.basis)


def solve_linear_system(a_rows, rhs) -> LinearSolution:
    """Solve A x = b, classifying the solution set exactly when possible."""
    if len(a_rows) != len(rhs):
        raise ValueError("matrix and right-hand side sizes differ")
    if not a_rows:
        return LinearSolution("unique", (), ())
    n_cols = len(a_rows[0])
    augmented = [list(row) + [b] for row, b in zip(a_rows, rhs)]
    is_zero = _zero_test_for(augmented)
    reduced, pivots = rref(augmented, is_zero=is_zero)
    if n_cols in pivots:
        return LinearSolution("none", None, ())
    pivot_rows = {col: i for i, col in enumerate(pivots)}
    zero = 0 if _is_exact_matrix(augmented) else 0.0
    particular = [zero] * n_cols
    for col, i in pivot_rows.items():
        particular[col] = reduced[i][n_cols]
    free_cols = [c for c in range(n_cols) if c not in pivot_rows]
    basis = []
    for free in free_cols:
        direction = [zero] * n_cols
        direction[free] = zero + 1
        for col, i in pivot_rows.items():
            direction[col] = -reduced[i][free]
        basis.append(tuple(direction))
    status = "unique" if not basis else "family"
    return LinearSolution(status, tuple(particular), tuple(basis))


def determinant(rows):
    """Determinant by fraction-free Bareiss elimination.

    Exact over Fractions and Q(sqrt 5); over floats it behaves like ordinary
    Gaussian elimination with the divisions folded in.
    """
    n = len(rows)
    if any(len(row) != n for row in rows):
        raise ValueError("determinant needs a square matrix")
    if n == 0:
        return 1
    m = [list(row) for row in rows]
    if _is_exact_matrix(m):
        m = _promote_ints(m)
    is_zero = _zero_test_for(m)
    sign = 1
    prev = 1
    for k in range(n - 1):
        if is_zero(m[k][k]):
            swap = next((i for i in range(k + 1, n) if not is_zero(m[i][k])), None)
            if swap is None:
                return 0 * m[0][0]
            m[k], m[swap] = m[swap], m[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) / prev
            m[i][k] = 0
        prev = m[k][k]
    return sign * m[n - 1][n - 1]


def matvec(rows, vector):
    return [sum(a * x for a, x in zip(row, vector)) for row in rows]
