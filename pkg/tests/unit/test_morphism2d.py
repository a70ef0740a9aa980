"""
Unit tests for 2D morphisms.

Tests Grid2D, Morphism2D, expand2d and the Phi_p / Phi_0,p / Phi_F,p
families with the coding Pi.
"""

import numpy as np
import pytest

from src.exceptions import MorphismError
from src.morphism2d import (
    ALPHABET,
    Grid2D,
    Letter,
    Morphism2D,
    expand2d,
    nonzero_count,
    phi_frame,
    phi_p,
    phi_variants,
    phi_zero,
    pi_coding,
    pi_morphism,
    thue_morse_2d,
    thue_morse_coding,
)
from tests.fixtures.sample_data import CANTOR_PROFILE_3_1, PHI_3_A, PHI_3_F


@pytest.mark.unit
class TestGrid2D:
    """Test the symbol grid."""

    def test_from_rows(self):
        """Test shape, lookups and counts."""
        g = Grid2D.from_rows(["A0", "FB"])
        assert g.shape == (2, 2)
        assert g.get(1, 0) == "F"
        assert g.count("0") == 1
        assert g.rows() == ["A0", "FB"]

    def test_bad_rows(self):
        """Test ragged rows and unknown symbols."""
        with pytest.raises(MorphismError):
            Grid2D.from_rows(["A0", "F"])
        with pytest.raises(MorphismError):
            Grid2D.from_rows(["AZ"])
        with pytest.raises(MorphismError):
            Grid2D.from_rows([])

    def test_nonzero_mask(self):
        """Test the mask of letters other than 0."""
        g = Grid2D.from_rows(["A0", "0N"])
        assert g.nonzero_mask().tolist() == [[True, False], [False, True]]
        tm = Grid2D.from_rows(["01"], ("0", "1"))
        assert tm.nonzero_mask().tolist() == [[False, True]]

    def test_equality_and_text(self):
        """Test equality, hashing and the text form."""
        a = Grid2D.from_text("A0\nFB\n")
        b = Grid2D.from_rows(["A0", "FB"])
        assert a == b
        assert hash(a) == hash(b)
        assert a.to_text() == "A0\nFB\n"
        assert a.block((1, 2), (0, 2)).rows() == ["FB"]


@pytest.mark.unit
class TestMorphism2D:
    """Test generic [k, l]-morphisms."""

    def test_thue_morse(self):
        """Test two iterations of the 2D Thue-Morse morphism."""
        tm = thue_morse_2d()
        assert expand2d(tm, "0", 1).rows() == ["01", "10"]
        assert expand2d(tm, "0", 2).rows() == ["0110", "1001", "1001", "0110"]

    def test_coding_changes_alphabet(self):
        """Test a [1, 2]-coding into another alphabet."""
        grid = expand2d(thue_morse_2d(), "0", 1)
        coded = thue_morse_coding().apply(grid)
        assert coded.alphabet == ("a", "b")
        assert coded.rows() == ["aabb", "bbaa"]

    def test_coding_cannot_be_iterated(self):
        """Test that expand2d refuses maps between alphabets."""
        with pytest.raises(MorphismError):
            expand2d(thue_morse_coding(), "0", 1)

    def test_missing_and_non_uniform_images(self):
        """Test construction errors."""
        with pytest.raises(MorphismError):
            Morphism2D({"0": ["0"]}, ("0", "1"))
        with pytest.raises(MorphismError):
            Morphism2D({"0": ["00"], "1": ["1"]}, ("0", "1"))

    def test_wrong_alphabet(self):
        """Test applying a morphism to a grid over another alphabet."""
        with pytest.raises(MorphismError):
            thue_morse_2d().apply(Grid2D.from_rows(["A"]))

    def test_unknown_symbol_image(self):
        """Test asking for the image of a foreign symbol."""
        with pytest.raises(MorphismError):
            thue_morse_2d().image("2")

    def test_iteration_guards(self):
        """Test negative iteration counts and non-prolongable seeds."""
        with pytest.raises(MorphismError):
            expand2d(phi_p(3), "A", -1)
        with pytest.raises(MorphismError):
            expand2d(phi_p(3), "F", 1)

    def test_zero_iterations(self):
        """Test that zero iterations return the seed."""
        assert expand2d(phi_p(3), Letter.A, 0).rows() == ["A"]


@pytest.mark.unit
class TestPhiP:
    """Test the Cantor-wall morphism and its coding."""

    def test_alphabet(self):
        """Test the 12-letter alphabet."""
        assert len(ALPHABET) == 12
        assert Letter.C_SW.value == "3"

    def test_images_for_p3(self):
        """Test the images of A and F."""
        phi = phi_p(3)
        assert (phi.k, phi.l) == (3, 3)
        assert phi.image("A").rows() == PHI_3_A
        assert phi.image("F").rows() == PHI_3_F
        assert phi.image("B").rows() == ["BFB", "0A0", "BFB"]
        assert phi.image("0").rows() == ["000"] * 3

    def test_edge_and_corner_images(self):
        """Test that edges and corners stay on their border."""
        phi = phi_p(5)
        assert phi.image("N").rows()[0] == "NNNNN"
        assert phi.image("N").rows()[1:] == ["00000"] * 4
        assert phi.image("2").rows() == ["0000E", "0000E", "0000E", "0000E", "SSSS2"]

    def test_pi_of_first_level(self):
        """Test that Pi(Phi_3(A)) is the level-1 Cantor profile."""
        pg = pi_coding(expand2d(phi_p(3), "A", 1))
        assert pg.to_text(header=False) == CANTOR_PROFILE_3_1

    def test_pi_morphism_matches_pi_coding(self):
        """Test the explicit coding against the array form."""
        grid = expand2d(phi_p(3), "A", 2)
        coded = pi_morphism().apply(grid)
        expected = np.where(pi_coding(grid).cells == 1, "X", "0")
        assert coded.rows() == ["".join(row) for row in expected]

    def test_second_level_window(self):
        """Test that block (0, 1) of Phi_3^2(A) is all zero."""
        grid = expand2d(phi_p(3), "A", 2)
        assert grid.shape == (9, 9)
        assert grid.block((0, 3), (3, 6)).rows() == ["000"] * 3


@pytest.mark.unit
class TestBoundingMorphisms:
    """Test Phi_0,p and Phi_F,p."""

    def test_phi_zero_images(self):
        """Test A on cells of equal parity and 0 elsewhere."""
        lower = phi_zero(3)
        assert lower.source == ("0", "A")
        assert lower.image("A").rows() == ["A0A", "0A0", "A0A"]

    def test_phi_frame_images(self):
        """Test A on cells of equal parity and F elsewhere; no B."""
        upper = phi_frame(3)
        assert "B" not in upper.source
        assert upper.image("A").rows() == ["AFA", "FAF", "AFA"]
        assert upper.image("F").rows() == PHI_3_F

    @pytest.mark.parametrize("p,k,lower,upper", [(3, 1, 5, 9), (3, 2, 25, 77), (5, 1, 13, 25), (5, 2, 169, 517)])
    def test_counts(self, p, k, lower, upper):
        """Test nonzero counts of both bounds."""
        lo, up = phi_variants(p)
        assert nonzero_count(expand2d(lo, "A", k)) == lower
        assert nonzero_count(expand2d(up, "A", k)) == upper

    def test_pointwise_sandwich(self):
        """Test Phi_0 <= Phi_p <= Phi_F cell by cell at level 2."""
        lower = expand2d(phi_zero(5), "A", 2).nonzero_mask()
        middle = expand2d(phi_p(5), "A", 2).nonzero_mask()
        upper = expand2d(phi_frame(5), "A", 2).nonzero_mask()
        assert not np.any(lower & ~middle)
        assert not np.any(middle & ~upper)
