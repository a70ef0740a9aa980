"""Unit tests for PPM/PGM rendering."""

import numpy as np
import pytest

from src.exceptions import WallFormatError
from src.finite_field import Prime
from src.render import (
    Palette,
    decode_pnm,
    encode_pnm,
    profile_gray,
    render_wall,
    wall_rgb,
    write_image,
)
from src.wall import UNDEFINED, ProfileGrid, Wall
from src.wall_engine import profile
from tests.fixtures.sample_data import GRAY, YELLOW


@pytest.fixture
def tiny_wall() -> Wall:
    """One row over F_7: zero, 1, 6, Undefined."""
    return Wall(Prime(7), 0, 0, np.array([[0, 1, 6, UNDEFINED]], dtype=np.int64))


@pytest.mark.unit
class TestColourScheme:
    """Test the P6 palette."""

    def test_cell_colours(self, tiny_wall):
        """Test yellow zeros, blue residues and gray Undefined."""
        rgb = wall_rgb(tiny_wall)
        assert tuple(rgb[0, 0]) == YELLOW
        assert tuple(rgb[0, 1]) == (0, 64, 255)
        assert tuple(rgb[0, 2]) == (0, 224, 255)
        assert tuple(rgb[0, 3]) == GRAY

    def test_p3_residues(self):
        """Test that p = 3 keeps both residues distinct."""
        rgb = wall_rgb(Wall(Prime(3), 0, 0, np.array([[1, 2]], dtype=np.int64)))
        assert rgb[0, 0, 1] < rgb[0, 1, 1]

    def test_header(self, tiny_wall):
        """Test the P6 header."""
        data = render_wall(tiny_wall)
        assert data.startswith(b"P6\n4 1\n255\n")
        assert len(data) == len(b"P6\n4 1\n255\n") + 4 * 3

    def test_round_trip(self, cantor_tilde_wall):
        """Test that decoding returns the rendered pixels."""
        pixels = decode_pnm(render_wall(cantor_tilde_wall))
        assert pixels.shape == cantor_tilde_wall.shape + (3,)
        assert np.array_equal(pixels, wall_rgb(cantor_tilde_wall))

    def test_profile_in_colour(self, cantor_tilde_wall):
        """Test that a profile renders X in the darkest blue."""
        pixels = decode_pnm(render_wall(profile(cantor_tilde_wall), Palette.COLOR))
        assert tuple(pixels[2, 3]) == (0, 64, 255)
        assert tuple(pixels[2, 4]) == YELLOW


@pytest.mark.unit
class TestGrayScheme:
    """Test the P5 palette."""

    def test_profile_gray(self):
        """Test Zero 255, X 0, Undefined 128."""
        pg = ProfileGrid.from_text("X0.\n")
        assert profile_gray(pg).tolist() == [[0, 255, 128]]

    def test_wall_is_reduced_to_profile(self, cantor_tilde_wall):
        """Test that a wall in gray renders its profile."""
        data = render_wall(cantor_tilde_wall, Palette.GRAY)
        assert data.startswith(b"P5\n")
        assert data == render_wall(profile(cantor_tilde_wall), "gray")

    def test_write_image(self, tmp_path, cantor_tilde_wall):
        """Test that the returned size matches the file."""
        path = tmp_path / "wall.pgm"
        height, width = write_image(cantor_tilde_wall, path, Palette.GRAY)
        assert (height, width) == cantor_tilde_wall.shape
        assert decode_pnm(path.read_bytes()).shape == (height, width)


@pytest.mark.unit
class TestPnmErrors:
    """Test encoder and decoder errors."""

    def test_bad_array(self):
        """Test that a 4-channel array is refused."""
        with pytest.raises(WallFormatError):
            encode_pnm(np.zeros((2, 2, 4), dtype=np.uint8))

    @pytest.mark.parametrize(
        "data",
        [b"P6\n", b"P3\n1 1\n255\n\x00\x00\x00", b"P5\n2 2\n255\n\x00", b"P5\n1 1\n65535\n\x00\x00"],
    )
    def test_bad_images(self, data):
        """Test truncated, ASCII, short and 16-bit images."""
        with pytest.raises(WallFormatError):
            decode_pnm(data)
