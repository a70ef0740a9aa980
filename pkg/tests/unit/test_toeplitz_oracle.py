"""Unit tests for the Toeplitz-determinant oracle."""

import numpy as np
import pytest

from src.exceptions import WallError
from src.sequences import cantor_tilde, make_seq
from src.toeplitz_oracle import det_mod_p, oracle_cell, oracle_wall, toeplitz_matrix
from tests.fixtures.sample_data import CANTOR_SQUARE_3_1


@pytest.mark.unit
class TestToeplitzMatrix:
    """Test T_S(n; m)."""

    def test_entries(self):
        """Test that entry (i, j) is s_{i-j+n}."""
        s = make_seq(3, [1, 2, 0, 1, 1])
        assert toeplitz_matrix(s, 2, 1).tolist() == [[0, 2], [1, 0]]
        assert toeplitz_matrix(s, 2, 2).tolist() == [[0, 2, 1], [1, 0, 2], [1, 1, 0]]

    def test_undefined_entry(self):
        """Test that a matrix reaching past a finite word is None."""
        s = make_seq(3, [1, 2, 0])
        assert toeplitz_matrix(s, 0, 1) is None

    def test_negative_size(self):
        """Test that m < 0 is refused."""
        with pytest.raises(WallError):
            toeplitz_matrix(make_seq(3, [1]), 0, -1)


@pytest.mark.unit
class TestDeterminant:
    """Test determinants over F_p."""

    def test_two_by_two(self):
        """Test ad - bc reduced mod p."""
        assert det_mod_p(np.array([[2, 1], [1, 2]]), 5) == 3

    def test_pivot_swap(self):
        """Test that a zero pivot triggers a row swap and a sign change."""
        assert det_mod_p(np.array([[0, 1], [1, 0]]), 5) == 4

    def test_singular(self):
        """Test a rank-deficient matrix."""
        assert det_mod_p(np.array([[1, 2, 3], [2, 4, 6], [0, 1, 1]]), 7) == 0

    def test_matches_integer_determinant(self):
        """Test against the integer determinant of a small matrix."""
        matrix = np.array([[3, 1, 4], [1, 5, 9], [2, 6, 5]])
        exact = int(round(float(np.linalg.det(matrix))))
        assert det_mod_p(matrix, 11) == exact % 11

    def test_empty_matrix(self):
        """Test that the 0x0 determinant is 1."""
        assert det_mod_p(np.zeros((0, 0), dtype=np.int64), 3) == 1

    def test_not_square(self):
        """Test that a non-square matrix raises WallError."""
        with pytest.raises(WallError):
            det_mod_p(np.zeros((2, 3), dtype=np.int64), 3)


@pytest.mark.unit
class TestOracleCell:
    """Test single oracle cells."""

    def test_rows_above_the_wall(self):
        """Test rows -2 and -1 of an (r0, a0)-wall."""
        s = make_seq(5, [1, 2, 3])
        assert oracle_cell(s, -2, 1) == 0
        assert oracle_cell(s, -5, 1) == 0
        assert oracle_cell(s, -1, 3) == 1
        assert oracle_cell(s, -1, 3, r0=2, a0=3) == 3 * 8 % 5

    def test_row_zero_is_the_sequence(self):
        """Test W[0, n] = s_n."""
        s = make_seq(5, [1, 2, 3])
        assert [oracle_cell(s, 0, n) for n in range(3)] == [1, 2, 3]

    def test_first_row(self):
        """Test W[1, n] = s_n^2 - s_{n-1} s_{n+1}."""
        s = make_seq(7, [2, 3, 2, 4])
        assert oracle_cell(s, 1, 1) == (9 - 4) % 7
        assert oracle_cell(s, 1, 2) == (4 - 12) % 7

    def test_undefined_cell(self):
        """Test a cell whose matrix leaves the finite word."""
        assert oracle_cell(make_seq(5, [1, 2, 3]), 1, 0) is None

    def test_ra_scaling(self):
        """Test that an (r0, a0)-wall cell is det / (r0^(nm) a0^m)."""
        s = make_seq(7, [1, 3, 2, 6, 5])
        plain = oracle_cell(s, 2, 2)
        scaled = oracle_cell(s, 2, 2, r0=3, a0=2)
        assert scaled * pow(3, 4, 7) * pow(2, 2, 7) % 7 == plain


@pytest.mark.unit
class TestOracleWall:
    """Test whole oracle walls."""

    def test_cantor_square(self):
        """Test the level-1 Cantor square over F_3."""
        w = oracle_wall(cantor_tilde(3, 1), 2)
        assert w.origin == "oracle"
        assert w.block((0, 3), (3, 6)).tolist() == [list(row) for row in CANTOR_SQUARE_3_1]

    def test_shape_and_undefined_margin(self):
        """Test rows -2..max_row and Undefined cells past the word."""
        s = make_seq(3, [1, 1, 2, 1, 2])
        w = oracle_wall(s, 2)
        assert w.shape == (5, 5)
        assert w.get(1, 0) is None
        assert w.get(2, 2) is not None
        assert w.get(2, 3) is None

    def test_explicit_columns(self):
        """Test a column range narrower than the word."""
        s = make_seq(3, [1, 1, 2, 1, 2])
        w = oracle_wall(s, 1, cols=(1, 3))
        assert (w.col_lo, w.col_hi) == (1, 3)
        assert w.row(0).tolist() == [1, 2]
