"""Verification harness: identity checks over number walls and their reports."""

from src.verify.models import CheckReport, CheckSpec, Mismatch, SuiteDefinition, load_suite_from_yaml
from src.verify.runner import CHECKS, FILTERS, reports_to_json, run_suite, run_suite_definition

__all__ = [
    "CHECKS",
    "FILTERS",
    "CheckReport",
    "CheckSpec",
    "Mismatch",
    "SuiteDefinition",
    "load_suite_from_yaml",
    "reports_to_json",
    "run_suite",
    "run_suite_definition",
]
