"""
Verification Runner - Check catalogue, filters and report serialization.

This module provides:
- CHECKS: check name -> function returning a CheckReport
- FILTERS: suite filter name -> the checks it selects
- run_suite: filtered checks over a grid of primes and levels
- run_suite_definition: the checks listed in a YAML suite
- reports_to_json: byte-stable JSON of a list of reports
"""

import json
from typing import Any, Callable, Dict, List, Optional, Sequence, Tuple

from src.exceptions import SuiteError
from src.logging_config import StructuredLogContext, configure_module_logging
from src.settings import DEFAULT_SEED
from src.verify.closed_forms import check_base_case, check_recurrence_forms
from src.verify.engine_checks import check_engine_oracle, check_profile_theorem
from src.verify.fractal_checks import check_dimension_estimate, check_fractal_counts
from src.verify.models import CheckReport, SuiteDefinition
from src.verify.sequence_checks import check_sequence_identities
from src.verify.transforms import check_wall_transforms
from src.verify.windows import check_window_lemmata

logger = configure_module_logging("verify.runner")

CheckFunction = Callable[..., CheckReport]

CHECKS: Dict[str, CheckFunction] = {
    "sequences": check_sequence_identities,
    "engine": check_engine_oracle,
    "profile": check_profile_theorem,
    "base_case": check_base_case,
    "recurrences": check_recurrence_forms,
    "windows": check_window_lemmata,
    "transforms": check_wall_transforms,
    "fractal_counts": check_fractal_counts,
    "dimension": check_dimension_estimate,
}

FILTERS: Dict[str, Tuple[str, ...]] = {
    "sequences": ("sequences",),
    "engine": ("engine",),
    "profile": ("profile",),
    "base_case": ("base_case",),
    "recurrences": ("recurrences",),
    "windows": ("windows",),
    "transforms": ("transforms",),
    "fractal": ("fractal_counts", "dimension"),
}

ALL = "all"


def select_checks(filters: Sequence[str]) -> List[str]:
    """
    Check names selected by `filters`, in catalogue order.

    An empty list or "all" selects every check.

    Raises:
        SuiteError: If a filter name is unknown
    """
    if not filters or ALL in filters:
        return list(CHECKS)
    unknown = [f for f in filters if f not in FILTERS]
    if unknown:
        raise SuiteError(f"Unknown filter(s) {unknown}; choose from {[ALL, *FILTERS]}")
    chosen = {name for f in filters for name in FILTERS[f]}
    return [name for name in CHECKS if name in chosen]


def default_params(check: str, p: int, h: int, seed: int, trials: int) -> Dict[str, Any]:
    """Keyword arguments for one check at prime p and level h."""
    if check == "sequences":
        return {"p": p, "length": max(243, 3 * p ** (h + 1))}
    if check in ("engine", "transforms"):
        return {"p": p, "trials": trials, "seed": seed}
    if check == "profile":
        return {"p": p, "h": h}
    if check in ("base_case", "recurrences"):
        return {"p": p}
    if check == "windows":
        return {"p": p, "h": h, "seed": seed}
    if check == "fractal_counts":
        return {"p": p, "levels": h + 2}
    if check == "dimension":
        # p = 3 needs five levels before the two-level slope settles within 0.1
        return {"p": p, "levels": 5 if p == 3 else 3}
    raise SuiteError(f"Unknown check {check!r}")


def _run(check: str, params: Dict[str, Any]) -> CheckReport:
    try:
        fn = CHECKS[check]
    except KeyError:
        raise SuiteError(f"Unknown check {check!r}; choose from {list(CHECKS)}") from None
    try:
        return fn(**params)
    except TypeError as e:
        raise SuiteError(f"Bad parameters for {check}: {e}") from e


def run_suite(
    filters: Sequence[str] = (),
    primes: Sequence[int] = (3,),
    levels: Sequence[int] = (1,),
    seed: int = DEFAULT_SEED,
    trials: int = 20,
) -> List[CheckReport]:
    """
    Run the selected checks for every prime and level.

    Checks that take no level run once per prime; duplicate parameter sets
    are run once.

    Args:
        filters: Filter names from FILTERS; empty or "all" means every check
        primes: Odd primes
        levels: Levels h for the checks that take one
        seed: Seed for the randomized checks
        trials: Random instances per randomized check

    Returns:
        Reports in run order

    Raises:
        SuiteError: If a filter is unknown
    """
    names = select_checks(filters)
    logger.info(f"Running suite | {StructuredLogContext(checks=len(names), primes=list(primes), levels=list(levels), seed=seed)}")
    reports: List[CheckReport] = []
    seen = set()
    for name in names:
        for p in primes:
            for h in levels:
                params = default_params(name, p, h, seed, trials)
                key = (name, json.dumps(params, sort_keys=True))
                if key in seen:
                    continue
                seen.add(key)
                reports.append(_run(name, params))
    failed = sum(not r.passed for r in reports)
    logger.info(f"Suite finished | {StructuredLogContext(reports=len(reports), failed=failed)}")
    return reports


def run_suite_definition(suite: SuiteDefinition, seed: Optional[int] = None) -> List[CheckReport]:
    """
    Run the checks of a YAML suite in order.

    Args:
        suite: Validated suite definition
        seed: Overrides the "seed" parameter of every check that takes one

    Raises:
        SuiteError: If an entry names an unknown check or bad parameters
    """
    logger.info(f"Running suite {suite.metadata.id} ({len(suite.checks)} checks)")
    reports = []
    for spec in suite.checks:
        params = dict(spec.params)
        if seed is not None and "seed" in params:
            params["seed"] = seed
        logger.debug(f"{spec.name}: {spec.check} {params}")
        reports.append(_run(spec.check, params))
    return reports


def all_passed(reports: Sequence[CheckReport]) -> bool:
    return all(r.passed for r in reports)


def reports_to_json(reports: Sequence[CheckReport], deterministic: bool = True) -> str:
    """
    Reports sorted by check name then parameters, as indented JSON.

    With deterministic=True timings are dropped, so identical seeds give
    identical bytes.
    """
    ordered = sorted(reports, key=lambda r: (r.check, json.dumps(r.params, sort_keys=True)))
    return json.dumps([r.to_dict(deterministic) for r in ordered], indent=2, sort_keys=True) + "\n"
