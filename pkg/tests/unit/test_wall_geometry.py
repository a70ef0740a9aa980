"""Unit tests for reflections, rotations and region extraction."""

import numpy as np
import pytest

from src.exceptions import RegionError
from src.finite_field import Prime
from src.wall import UNDEFINED, Wall
from src.wall_geometry import (
    extract_region,
    reflect_horizontal,
    reflect_vertical,
    rotate_ccw,
    rotate_cw,
    same_cells,
    translate,
)


@pytest.fixture
def small_wall() -> Wall:
    """A 3x4 block with distinct cells and one Undefined, rows -1..1, cols 2..5."""
    values = np.array(
        [
            [1, 2, 3, 4],
            [0, 1, 2, 3],
            [4, UNDEFINED, 1, 2],
        ],
        dtype=np.int64,
    )
    return Wall(Prime(5), -1, 2, values, origin="test")


def _stored(w: Wall):
    return [(m, n) for m, n, _ in w.cells()]


@pytest.mark.unit
class TestReflections:
    """Test the two reflections."""

    def test_vertical_default_span(self, small_wall):
        """Test output[m, l - n] = input[m, n] with l from the stored columns."""
        out = reflect_vertical(small_wall)
        axis = 2 + 6 - 1
        assert (out.col_lo, out.col_hi) == (2, 6)
        for m, n in _stored(small_wall):
            assert out.get(m, axis - n) == small_wall.get(m, n)

    def test_vertical_explicit_span(self, small_wall):
        """Test a reflection about a different axis."""
        out = reflect_vertical(small_wall, span=(0, 4))
        for m, n in _stored(small_wall):
            assert out.get(m, 3 - n) == small_wall.get(m, n)
        assert out.col_lo == -2

    def test_horizontal(self, small_wall):
        """Test output[m, n] = input[-m, n]."""
        out = reflect_horizontal(small_wall)
        assert (out.row_lo, out.row_hi) == (-1, 2)
        for m, n in _stored(small_wall):
            assert out.get(-m, n) == small_wall.get(m, n)

    def test_involutions(self, small_wall):
        """Test that each reflection undoes itself."""
        assert same_cells(reflect_vertical(reflect_vertical(small_wall)), small_wall)
        assert same_cells(reflect_horizontal(reflect_horizontal(small_wall)), small_wall)

    def test_image_drops_sequence_and_windows(self, cantor_tilde_wall):
        """Test that images read Undefined outside their block."""
        out = reflect_horizontal(cantor_tilde_wall)
        assert out.sequence is None
        assert out.windows == []
        assert out.get(-100, 0) is None
        assert out.origin == "H(engine)"


@pytest.mark.unit
class TestRotations:
    """Test quarter turns."""

    def test_clockwise(self, small_wall):
        """Test output[m, n] = input[-n, m]."""
        out = rotate_cw(small_wall)
        assert out.shape == (4, 3)
        for m, n in _stored(small_wall):
            assert out.get(n, -m) == small_wall.get(m, n)

    def test_counter_clockwise(self, small_wall):
        """Test output[m, n] = input[n, -m]."""
        out = rotate_ccw(small_wall)
        for m, n in _stored(small_wall):
            assert out.get(-n, m) == small_wall.get(m, n)

    def test_inverse_pair(self, small_wall):
        """Test that the two rotations are mutually inverse."""
        assert same_cells(rotate_ccw(rotate_cw(small_wall)), small_wall)
        assert same_cells(rotate_cw(rotate_ccw(small_wall)), small_wall)

    def test_four_turns(self, small_wall):
        """Test that four clockwise turns are the identity."""
        out = small_wall
        for _ in range(4):
            out = rotate_cw(out)
        assert same_cells(out, small_wall)

    def test_half_turn_is_both_reflections(self, small_wall):
        """Test rho^2 = H V about the origin."""
        half = rotate_cw(rotate_cw(small_wall))
        both = reflect_horizontal(reflect_vertical(small_wall, span=(-5, 6)))
        for m, n in _stored(small_wall):
            assert half.get(-m, -n) == small_wall.get(m, n)
            assert both.get(-m, -n) == small_wall.get(m, n)


@pytest.mark.unit
class TestExtractRegion:
    """Test region copies."""

    def test_extract(self, small_wall):
        """Test a sub-block keeps absolute indices."""
        out = extract_region(small_wall, (0, 2), (3, 5))
        assert (out.row_lo, out.col_lo) == (0, 3)
        assert out.values.tolist() == [[1, 2], [UNDEFINED, 1]]
        assert out.origin == "test[0:2,3:5]"

    def test_rebase(self, small_wall):
        """Test re-indexing to [0, 0]."""
        out = extract_region(small_wall, (0, 2), (3, 5), rebase=True)
        assert out.get(0, 0) == 1
        assert out.get(1, 0) is None

    def test_copy_is_independent(self, small_wall):
        """Test that writing to the copy leaves the source alone."""
        out = extract_region(small_wall, (-1, 0), (2, 6))
        out.values[0, 0] = 3
        assert small_wall.get(-1, 2) == 1

    @pytest.mark.parametrize(
        "rows,cols",
        [((0, 0), (2, 4)), ((1, 0), (2, 4)), ((-2, 0), (2, 4)), ((0, 1), (2, 7))],
    )
    def test_bad_regions(self, small_wall, rows, cols):
        """Test empty regions and regions leaving storage."""
        with pytest.raises(RegionError):
            extract_region(small_wall, rows, cols)


@pytest.mark.unit
class TestSameCells:
    """Test whole-wall comparison."""

    def test_offsets_matter(self, small_wall):
        """Test that equal values at different offsets differ."""
        moved = extract_region(small_wall, (-1, 2), (2, 6), rebase=True)
        assert not same_cells(moved, small_wall)
        assert same_cells(extract_region(small_wall, (-1, 2), (2, 6)), small_wall)


@pytest.mark.unit
class TestTranslate:
    """Test index shifts."""

    def test_shift(self, small_wall):
        """Test output[m + rows, n + cols] = input[m, n]."""
        out = translate(small_wall, 4, -2)
        assert (out.row_lo, out.col_lo) == (3, 0)
        for m, n in _stored(small_wall):
            assert out.get(m + 4, n - 2) == small_wall.get(m, n)
        assert out.origin == "T4,-2(test)"

    def test_turn_then_shift_places_a_frame_wall(self, small_wall):
        """Test that a quarter turn and a shift send [i, j] to [t - 1 + j, c - 2 - i]."""
        t, c = 10, 20
        placed = translate(rotate_cw(small_wall), t - 1, c - 2)
        for i, j in _stored(small_wall):
            assert placed.get(t - 1 + j, c - 2 - i) == small_wall.get(i, j)
