"""Exact linear algebra against numpy and a cofactor-expansion oracle."""

import random
from fractions import Fraction

import numpy as np
import pytest

from nbg import PHI, QuadExt, determinant, matvec, rref, solve_linear_system
from util import cofactor_determinant


def random_fraction_matrix(rng, rows, cols, lo=-6, hi=6):
    return [[Fraction(rng.randint(lo, hi), rng.randint(1, 4))
             for _ in range(cols)] for _ in range(rows)]


class TestRref:
    def test_identity_fixed_point(self):
        rows = [[1, 0, 0], [0, 1, 0], [0, 0, 1]]
        reduced, pivots = rref(rows)
        assert reduced == [[1, 0, 0], [0, 1, 0], [0, 0, 1]]
        assert pivots == [0, 1, 2]

    def test_random_exact_matrices_have_correct_rank(self):
        rng = random.Random(3)
        for _ in range(60):
            m = rng.randint(1, 5)
            n = rng.randint(1, 5)
            rows = random_fraction_matrix(rng, m, n)
            reduced, pivots = rref(rows)
            rank = np.linalg.matrix_rank(
                np.array([[float(v) for v in row] for row in rows]))
            assert len(pivots) == rank
            # pivot columns carry a unit vector
            for k, col in enumerate(pivots):
                for i in range(m):
                    assert reduced[i][col] == (1 if i == k else 0)

    def test_row_space_is_preserved(self):
        rng = random.Random(4)
        for _ in range(30):
            rows = random_fraction_matrix(rng, 3, 4)
            reduced, _ = rref(rows)
            a = np.array([[float(v) for v in row] for row in rows])
            b = np.array([[float(v) for v in row] for row in reduced])
            stacked = np.vstack([a, b])
            assert np.linalg.matrix_rank(stacked) == pytest.approx(
                np.linalg.matrix_rank(a))

    def test_mixed_int_and_fraction_rows_stay_exact(self):
        # regression: int/int pivots must not decay to float division
        rows = [[1, 1, Fraction(1, 2)], [0, 1, 1]]
        reduced, pivots = rref(rows)
        for row in reduced:
            for value in row:
                assert isinstance(value, (int, Fraction))
        assert pivots == [0, 1]

    def test_float_matrices_use_scaled_zero_threshold(self):
        rows = [[1e8, 2e8], [1e8, 2e8 + 1e-9]]
        _, pivots = rref(rows)
        assert len(pivots) == 1


class TestSolve:
    def test_unique_solution_matches_numpy(self):
        rng = random.Random(9)
        count = 0
        while count < 40:
            n = rng.randint(1, 5)
            a = random_fraction_matrix(rng, n, n)
            if determinant([list(r) for r in a]) == 0:
                continue
            count += 1
            x_expected = [Fraction(rng.randint(-5, 5), rng.randint(1, 3))
                          for _ in range(n)]
            rhs = matvec(a, x_expected)
            result = solve_linear_system(a, rhs)
            assert result.status == "unique"
            assert list(result.solution) == x_expected
            assert all(isinstance(v, Fraction) for v in result.solution)

    def test_family_basis_spans_the_kernel(self):
        rng = random.Random(21)
        for _ in range(30):
            n = rng.randint(2, 5)
            m = rng.randint(1, n - 1)
            a = random_fraction_matrix(rng, m, n)
            x_any = [Fraction(rng.randint(-3, 3)) for _ in range(n)]
            rhs = matvec(a, x_any)
            result = solve_linear_system(a, rhs)
            assert result.status == "family"
            rank = np.linalg.matrix_rank(
                np.array([[float(v) for v in row] for row in a]))
            assert result.dimension == n - rank
            assert len(result.basis) == result.dimension
            # particular solution solves the system, basis vectors kill it
            assert matvec(a, list(result.solution)) == rhs
            for vec in result.basis:
                assert all(v == 0 for v in matvec(a, list(vec)))

    def test_inconsistent_system(self):
        a = [[1, 1], [2, 2]]
        result = solve_linear_system(a, [1, 3])
        assert result.status == "none"
        assert result.solution is None

    def test_overdetermined_consistent(self):
        a = [[1, 0], [0, 1], [1, 1]]
        result = solve_linear_system(a, [2, 3, 5])
        assert result.status == "unique"
        assert list(result.solution) == [2, 3]

    def test_quadext_entries(self):
        a = [[PHI, 1], [1, -1]]
        rhs = [1, 0]
        result = solve_linear_system(a, rhs)
        assert result.status == "unique"
        x = list(result.solution)
        assert PHI * x[0] + x[1] == 1
        assert x[0] - x[1] == 0

    def test_float_systems_match_numpy(self):
        rng = random.Random(33)
        for _ in range(30):
            n = rng.randint(2, 5)
            a = [[rng.uniform(-3, 3) for _ in range(n)] for _ in range(n)]
            if abs(np.linalg.det(np.array(a))) < 1e-6:
                continue
            rhs = [rng.uniform(-3, 3) for _ in range(n)]
            result = solve_linear_system([list(r) for r in a], list(rhs))
            assert result.status == "unique"
            expected = np.linalg.solve(np.array(a), np.array(rhs))
            for got, want in zip(result.solution, expected):
                assert got == pytest.approx(want, rel=1e-8, abs=1e-8)


class TestDeterminant:
    def test_against_cofactor_oracle(self):
        rng = random.Random(17)
        for _ in range(60):
            n = rng.randint(1, 5)
            a = random_fraction_matrix(rng, n, n)
            assert determinant([list(r) for r in a]) == cofactor_determinant(a)

    def test_mixed_int_fraction_exact(self):
        a = [[1, Fraction(1, 2)], [2, 1]]
        value = determinant(a)
        assert value == 0
        assert not isinstance(value, float)

    def test_quadext_determinant(self):
        # det [[phi, 1], [1, phi]] = phi^2 - 1 = -phi
        a = [[PHI, 1], [1, PHI]]
        assert determinant(a) == -PHI

    def test_float_matches_numpy(self):
        rng = random.Random(29)
        for _ in range(30):
            n = rng.randint(1, 5)
            a = [[rng.uniform(-2, 2) for _ in range(n)] for _ in range(n)]
            got = determinant([list(r) for r in a])
            assert got == pytest.approx(np.linalg.det(np.array(a)),
                                        rel=1e-8, abs=1e-9)

    def test_rejects_non_square(self):
        with pytest.raises(ValueError):
            determinant([[1, 2, 3], [4, 5, 6]])


def test_matvec():
    assert matvec([[1, 2], [3, 4]], [5, 6]) == [17, 39]
    assert matvec([], []) == []
