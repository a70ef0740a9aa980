"""
Unit tests for the verification checks at small parameters.

Every check is run once where it is cheap; failure paths are provoked
with mocked engines.
"""

import numpy as np
import pytest

from src.exceptions import EngineConsistencyError
from src.verify.closed_forms import check_base_case, check_recurrence_forms
from src.verify.engine_checks import (
    check_engine_oracle,
    check_profile_theorem,
    compare_walls,
    random_sequence,
)
from src.verify.fractal_checks import check_dimension_estimate, check_fractal_counts
from src.verify.models import CheckRecorder
from src.verify.sequence_checks import check_sequence_identities
from src.verify.transforms import check_wall_transforms
from src.verify.windows import check_window_lemmata
from src.wall_geometry import extract_region


def _assert_passed(report):
    assert report.passed, [m.model_dump() for m in report.mismatches]
    assert report.details["failures"] == 0
    assert report.details["comparisons"] > 0


@pytest.mark.unit
class TestRandomSequence:
    """Test the seeded sequence generator."""

    def test_reproducible(self):
        """Test that one seed gives one sequence."""
        a = random_sequence(np.random.default_rng(3), 5, 20)
        b = random_sequence(np.random.default_rng(3), 5, 20)
        assert a == b
        assert len(a) == 20
        assert all(0 <= v < 5 for v in a.values)

    def test_zero_rate_and_offset(self):
        """Test planted zeros and a shifted start."""
        s = random_sequence(np.random.default_rng(0), 7, 200, zero_rate=0.9, lo=-3)
        assert s.lo == -3
        assert s.values.count(0) > 150


@pytest.mark.unit
class TestSequenceAndClosedForms:
    """Test the identity checks that need no wall."""

    def test_sequences(self):
        """Test the sequence identities on a short prefix."""
        report = check_sequence_identities(3, 81)
        _assert_passed(report)
        assert report.details["levels"] >= 3

    def test_sequences_p5(self):
        """Test the sequence identities for p = 5."""
        _assert_passed(check_sequence_identities(5, 125))

    def test_base_case(self):
        """Test the base-case wall identities."""
        report = check_base_case(3)
        _assert_passed(report)
        assert report.details["p2"] == 1

    def test_recurrences(self):
        """Test the coefficient recurrences."""
        report = check_recurrence_forms(3)
        _assert_passed(report)
        assert report.details["steps"] > 0


@pytest.mark.unit
class TestEngineChecks:
    """Test engine against oracle and the profile theorem."""

    def test_engine_oracle(self):
        """Test four random walls."""
        report = check_engine_oracle(3, trials=4, seed=7)
        _assert_passed(report)
        assert report.details["walls"] == 4
        assert report.params == {"p": 3, "trials": 4, "seed": 7}

    def test_engine_oracle_p5(self):
        """Test short random walls for p = 5."""
        _assert_passed(check_engine_oracle(5, trials=3, seed=1, max_length=30))

    @pytest.mark.parametrize("h", [1, 2])
    def test_profile(self, h):
        """Test the profile theorem at levels 1 and 2."""
        report = check_profile_theorem(3, h)
        _assert_passed(report)
        assert report.details["cells"] == 9**h

    def test_profile_level_1_counts(self):
        """Test that the level-1 square has seven nonzero cells."""
        assert check_profile_theorem(3, 1).details["nonzero"] == 7

    def test_engine_error_is_reported(self, mocker):
        """Test that an engine contradiction fails the report, not the run."""
        mocker.patch(
            "src.verify.engine_checks.generate_wall",
            side_effect=EngineConsistencyError("Zero ratio", 1, 2),
        )
        report = check_engine_oracle(3, trials=2, seed=1)
        assert not report.passed
        assert report.details["failures"] == 2
        assert "Zero ratio" in report.mismatches[0].context

    def test_compare_walls_reports_cells(self, cantor_tilde_wall):
        """Test that a changed cell is reported at its absolute index."""
        rec = CheckRecorder("demo", {})
        altered = extract_region(cantor_tilde_wall, (-2, cantor_tilde_wall.row_hi), (0, 9))
        altered.values[2 - altered.row_lo, 3] = 2
        compare_walls(rec, cantor_tilde_wall, altered, "altered")
        assert rec.failures == 1
        mm = rec.mismatches[0]
        assert (mm.m, mm.n, mm.expected, mm.actual) == (2, 3, 1, 2)

    def test_compare_walls_shape(self, cantor_tilde_wall):
        """Test that walls at other offsets fail on shape."""
        rec = CheckRecorder("demo", {})
        part = extract_region(cantor_tilde_wall, (0, 3), (0, 9))
        compare_walls(rec, cantor_tilde_wall, part, "part")
        assert rec.failures == 1


@pytest.mark.unit
class TestLemmaChecks:
    """Test window lemmata and transform identities."""

    def test_windows_level_1(self):
        """Test the window lemmata on C~_1, C~_2 and C~_3."""
        report = check_window_lemmata(3, 1, seed=5)
        _assert_passed(report)
        assert report.details["singer_between_j1"] > 0
        assert report.details["cantor_frames_j1"] > 0
        assert report.details["singer_frames_j1"] > 0
        assert report.details["corner_layouts"] > 0

    def test_windows_bad_level(self):
        """Test that h < 1 fails the report."""
        assert not check_window_lemmata(3, 0).passed

    def test_transforms(self):
        """Test four random transform instances."""
        report = check_wall_transforms(3, trials=4, seed=3)
        _assert_passed(report)
        assert report.details["instances"] == 4
        assert report.details["frame_windows"] > 0


@pytest.mark.unit
class TestFractalChecks:
    """Test box-count checks."""

    def test_fractal_counts(self):
        """Test three levels of exact counts for p = 3."""
        report = check_fractal_counts(3, levels=3)
        _assert_passed(report)
        assert report.details["level_2"] == {"N_k": 25, "count": 51, "a_k": 77}

    @pytest.mark.slow
    def test_dimension_p5(self):
        """Test the p = 5 slope over three levels."""
        report = check_dimension_estimate(5, levels=3)
        _assert_passed(report)
        assert report.details["counts"] == [19, 343, 5035]
        assert abs(report.details["tail_slope"] - report.details["target"]) <= 0.1
        estimators = report.details["estimators"]
        assert set(estimators) == {"deepest", "slope", "tail_slope"}
        assert estimators["tail_slope"]["within_tolerance"]

    def test_dimension_outside_tolerance(self):
        """Test that the p = 3 slope misses a tight tolerance at two levels."""
        report = check_dimension_estimate(3, levels=2, tolerance=0.01)
        assert not report.passed
        assert report.details["counts"] == [7, 51]

    def test_dimension_reports_every_estimator(self):
        """Test that each estimator carries its value, its gap to the target and its verdict."""
        report = check_dimension_estimate(3, levels=2, tolerance=0.01)
        estimators = report.details["estimators"]
        assert report.details["criterion"] == "tail_slope"
        for name, entry in estimators.items():
            assert entry["value"] == report.details[name]
            assert entry["gap"] == pytest.approx(entry["value"] - report.details["target"], abs=1e-8)
            assert not entry["within_tolerance"]
        assert estimators["deepest"]["gap"] == pytest.approx(0.3246, abs=1e-3)
        assert estimators["slope"]["value"] == pytest.approx(estimators["tail_slope"]["value"])
