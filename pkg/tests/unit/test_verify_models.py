"""
Unit tests for verification data models.

Tests Mismatch, CheckReport, CheckSpec, SuiteDefinition,
load_suite_from_yaml and CheckRecorder.
"""

import pytest
import yaml
from pydantic import ValidationError

from src.finite_field import Prime
from src.verify.models import (
    MAX_MISMATCHES,
    CheckRecorder,
    CheckReport,
    CheckSpec,
    Mismatch,
    SuiteDefinition,
    SuiteMetadata,
    load_suite_from_yaml,
)
from tests.fixtures.sample_data import SUITE_YAML_VALID


@pytest.mark.unit
class TestCheckReport:
    """Test the report model."""

    def test_pass_alias(self):
        """Test that 'pass' is accepted on input and written on output."""
        report = CheckReport(**{"check": "engine", "pass": True})
        assert report.passed
        assert report.to_dict()["pass"] is True
        assert "passed" not in report.to_dict()

    def test_populate_by_name(self):
        """Test construction with the field name."""
        report = CheckReport(check="engine", passed=False, millis=12.5)
        assert not report.passed

    def test_deterministic_drops_millis(self):
        """Test that timings are only kept on request."""
        report = CheckReport(check="engine", passed=True, millis=12.5)
        assert "millis" not in report.to_dict()
        assert report.to_dict(deterministic=False)["millis"] == 12.5

    def test_mismatch_defaults(self):
        """Test an empty mismatch."""
        mm = Mismatch()
        assert (mm.m, mm.n, mm.expected, mm.actual, mm.context) == (None, None, None, None, "")

    def test_missing_check_name(self):
        """Test that check is required."""
        with pytest.raises(ValidationError):
            CheckReport(passed=True)


@pytest.mark.unit
class TestSuiteModels:
    """Test suite definitions."""

    def test_minimal_spec(self):
        """Test a check entry with default params."""
        spec = CheckSpec(name="a", check="base_case")
        assert spec.params == {}

    def test_metadata_defaults(self):
        """Test optional metadata fields."""
        meta = SuiteMetadata(id="x", name="X")
        assert meta.version == "1"
        assert meta.tags == []

    def test_load_from_yaml(self):
        """Test a valid suite document."""
        suite = load_suite_from_yaml(SUITE_YAML_VALID)
        assert isinstance(suite, SuiteDefinition)
        assert suite.metadata.id == "tiny"
        assert [c.check for c in suite.checks] == ["base_case", "sequences"]
        assert suite.checks[1].params == {"p": 3, "length": 81}

    def test_load_fixture_files(self, suites_dir):
        """Test the suite files under tests/suites."""
        suite = load_suite_from_yaml((suites_dir / "valid_small.yaml").read_text())
        assert suite.metadata.version == "1.0.0"
        assert len(suite.checks) == 3

    def test_invalid_syntax(self, suites_dir):
        """Test that malformed YAML raises YAMLError."""
        with pytest.raises(yaml.YAMLError):
            load_suite_from_yaml((suites_dir / "invalid_syntax.yaml").read_text())

    def test_missing_required(self, suites_dir):
        """Test that a suite without id or check raises ValidationError."""
        with pytest.raises(ValidationError):
            load_suite_from_yaml((suites_dir / "missing_required.yaml").read_text())

    def test_repository_suites_load(self):
        """Test that the shipped suites validate."""
        from pathlib import Path

        root = Path(__file__).resolve().parents[2] / "suites"
        for name in ("desk.yaml", "acceptance.yaml"):
            suite = load_suite_from_yaml((root / name).read_text())
            assert suite.checks


@pytest.mark.unit
class TestCheckRecorder:
    """Test comparison bookkeeping."""

    def test_passing_comparisons(self):
        """Test that matching values count and pass."""
        rec = CheckRecorder("demo", {"p": 3})
        assert rec.equal(1, 1, "one")
        assert rec.expect(True, "ok")
        assert rec.passed
        assert rec.comparisons == 2

    def test_failures_are_recorded(self):
        """Test a mismatch with cell coordinates."""
        rec = CheckRecorder("demo", {"p": 3})
        assert not rec.equal(1, 2, "cell", 4, -1)
        report = rec.report()
        assert not report.passed
        assert report.mismatches[0].model_dump() == {
            "m": 4,
            "n": -1,
            "expected": 1,
            "actual": 2,
            "context": "cell",
        }
        assert report.details["failures"] == 1

    def test_field_elements_are_plain(self):
        """Test that residues are stored as ints."""
        rec = CheckRecorder("demo", {})
        f5 = Prime(5)
        rec.equal(f5(1), f5(2), "residues")
        mm = rec.report().mismatches[0]
        assert (mm.expected, mm.actual) == (1, 2)

    def test_equal_seq(self):
        """Test entrywise comparison with the index in m."""
        rec = CheckRecorder("demo", {})
        assert not rec.equal_seq([1, 2, 3], [1, 0, 3], "row")
        assert rec.mismatches[0].m == 1
        assert not rec.equal_seq([1, 2], [1], "short")
        assert rec.failures == 2

    def test_mismatch_cap(self):
        """Test that stored mismatches are capped but all failures counted."""
        rec = CheckRecorder("demo", {})
        for i in range(MAX_MISMATCHES + 10):
            rec.fail("boom", m=i)
        report = rec.report()
        assert len(report.mismatches) == MAX_MISMATCHES
        assert report.details["failures"] == MAX_MISMATCHES + 10

    def test_counts_and_notes(self):
        """Test detail counters and notes."""
        rec = CheckRecorder("demo", {"p": 3})
        rec.count("walls")
        rec.count("walls", 2)
        rec.note("target", 1.5)
        report = rec.report()
        assert report.details["walls"] == 3
        assert report.details["target"] == 1.5
        assert report.details["comparisons"] == 0
        assert report.params == {"p": 3}
        assert report.millis is not None
