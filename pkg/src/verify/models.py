"""
Verification Models - Reports, suite definitions and the check recorder.

This module provides:
- Mismatch / CheckReport: the machine-readable result of one check
- CheckSpec / SuiteDefinition: YAML-defined batches of checks
- CheckRecorder: accumulates cell comparisons while a check runs
"""

import time
from typing import Any, Dict, List, Optional, Sequence, Union

import yaml
from pydantic import BaseModel, ConfigDict, Field

from src.logging_config import StructuredLogContext, configure_module_logging

logger = configure_module_logging("verify")

# Mismatches stored per report; the total is always kept in details.
MAX_MISMATCHES = 25

Value = Union[int, str, None]


class Mismatch(BaseModel):
    """One counterexample: where, what was expected, what was found."""

    m: Optional[int] = Field(None, description="Row (or first index) of the cell")
    n: Optional[int] = Field(None, description="Column (or second index) of the cell")
    expected: Value = Field(None, description="Expected value or symbol")
    actual: Value = Field(None, description="Value or symbol found")
    context: str = Field("", description="Which identity and which instance")


class CheckReport(BaseModel):
    """Result of one check run with one parameter set."""

    model_config = ConfigDict(populate_by_name=True)

    check: str = Field(..., description="Check name")
    params: Dict[str, Any] = Field(default_factory=dict, description="Parameters used")
    passed: bool = Field(..., alias="pass", description="True iff no mismatch was found")
    mismatches: List[Mismatch] = Field(default_factory=list, description="First counterexamples")
    millis: Optional[float] = Field(None, description="Wall-clock time, omitted when deterministic")
    details: Dict[str, Any] = Field(default_factory=dict, description="Counters and notes")

    def to_dict(self, deterministic: bool = True) -> Dict[str, Any]:
        exclude = {"millis"} if deterministic or self.millis is None else set()
        return self.model_dump(by_alias=True, exclude=exclude)


class CheckSpec(BaseModel):
    """One entry of a suite file."""

    name: str = Field(..., description="Label for this entry")
    check: str = Field(..., description="Check name from the catalogue")
    params: Dict[str, Any] = Field(default_factory=dict, description="Keyword arguments")


class SuiteMetadata(BaseModel):
    id: str = Field(..., description="Unique suite identifier")
    name: str = Field(..., description="Human-readable name")
    version: str = Field("1", description="Suite version")
    description: str = Field("", description="What the suite covers")
    tags: List[str] = Field(default_factory=list, description="Tags for filtering")


class SuiteDefinition(BaseModel):
    """A named batch of checks."""

    metadata: SuiteMetadata = Field(..., description="Suite metadata")
    checks: List[CheckSpec] = Field(..., description="Checks to run, in order")


def load_suite_from_yaml(yaml_content: str) -> SuiteDefinition:
    """
    Load and validate a suite from YAML string content.

    Args:
        yaml_content: YAML string content (not a file path)

    Returns:
        Validated SuiteDefinition

    Raises:
        yaml.YAMLError: If YAML is malformed
        pydantic.ValidationError: If the suite structure is invalid

    Example:
        suite = load_suite_from_yaml(Path("suites/desk.yaml").read_text())
    """
    data = yaml.safe_load(yaml_content)
    return SuiteDefinition(**data)


def _plain(value: Any) -> Value:
    if value is None or isinstance(value, str):
        return value
    try:
        return int(value)
    except (TypeError, ValueError):
        return str(value)


class CheckRecorder:
    """Collects comparisons for one check and builds its report."""

    def __init__(self, check: str, params: Dict[str, Any]):
        self.check = check
        self.params = dict(params)
        self.mismatches: List[Mismatch] = []
        self.failures = 0
        self.comparisons = 0
        self.details: Dict[str, Any] = {}
        self._started = time.perf_counter()

    def expect(
        self,
        ok: bool,
        context: str,
        m: Optional[int] = None,
        n: Optional[int] = None,
        expected: Any = None,
        actual: Any = None,
    ) -> bool:
        self.comparisons += 1
        if ok:
            return True
        self.failures += 1
        if len(self.mismatches) < MAX_MISMATCHES:
            self.mismatches.append(
                Mismatch(m=m, n=n, expected=_plain(expected), actual=_plain(actual), context=context)
            )
        return False

    def equal(self, expected: Any, actual: Any, context: str, m: Optional[int] = None, n: Optional[int] = None) -> bool:
        return self.expect(expected == actual, context, m, n, expected, actual)

    def equal_seq(self, expected: Sequence[Any], actual: Sequence[Any], context: str) -> bool:
        """Entrywise comparison; mismatches carry the index in m."""
        ok = len(expected) == len(actual)
        if not ok:
            self.fail(f"{context}: length", expected=len(expected), actual=len(actual))
        for i, (e, a) in enumerate(zip(expected, actual)):
            ok = self.equal(e, a, context, i) and ok
        return ok

    def fail(self, context: str, **cell) -> None:
        self.expect(False, context, **cell)

    def count(self, key: str, amount: int = 1) -> None:
        self.details[key] = self.details.get(key, 0) + amount

    def note(self, key: str, value: Any) -> None:
        self.details[key] = value

    @property
    def passed(self) -> bool:
        return self.failures == 0

    def report(self) -> CheckReport:
        millis = (time.perf_counter() - self._started) * 1000.0
        details = dict(self.details)
        details["comparisons"] = self.comparisons
        details["failures"] = self.failures
        status = "✓ pass" if self.passed else "✗ FAIL"
        context = StructuredLogContext(**self.params, comparisons=self.comparisons, millis=f"{millis:.1f}")
        logger.info(f"{self.check} {status} | {context}")
        return CheckReport(
            check=self.check,
            params=self.params,
            passed=self.passed,
            mismatches=self.mismatches,
            millis=round(millis, 3),
            details=details,
        )
