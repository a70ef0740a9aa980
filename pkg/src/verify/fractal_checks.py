"""Box counts of the Cantor-wall profile against the two bounding morphisms."""

import math

from src.exceptions import EngineConsistencyError, FractalError, WindowShapeError
from src.finite_field import PrimeLike, as_prime
from src.fractal import (
    BoxLevel,
    box_dim_estimate,
    boxes_from_grid,
    cantor_wall_boxes,
    lower_count,
    phi_zero_boxes,
    upper_count_closed_form,
    upper_count_recurrence,
)
from src.logging_config import configure_module_logging
from src.morphism2d import expand2d, nonzero_count, phi_frame, phi_zero, pi_coding
from src.verify.models import CheckRecorder, CheckReport

logger = configure_module_logging("verify.fractal_checks")

DIMENSION_TOLERANCE = 0.1


def _contained(rec: CheckRecorder, inner: BoxLevel, outer: BoxLevel, context: str) -> None:
    """Every box of `inner` is a box of `outer`; reports the first few strays."""
    stray = inner.mask & ~outer.mask
    rec.comparisons += inner.count
    for m, n in [tuple(int(x) for x in cell) for cell in zip(*stray.nonzero())][:5]:
        rec.fail(context, m=m, n=n)


def check_fractal_counts(p: PrimeLike, levels: int = 4) -> CheckReport:
    """
    Exact box counts for levels 1..levels.

    Per level k:
    - Phi_0,p^k(A) keeps N_k = ((p^2+1)/2)^k cells, the same cells as the
      base-p digit criterion, also after the coding Pi
    - Phi_F,p^k(A) keeps a_k cells; the recurrence and the closed form agree
    - Phi_0 boxes, Cantor-wall boxes and Phi_F boxes are nested, so
      N_k <= wall count <= a_k
    - every box set refines its level k-1 counterpart
    """
    prime = as_prime(p)
    q = prime.p
    rec = CheckRecorder("fractal_counts", {"p": q, "levels": levels})
    lower_morphism, upper_morphism = phi_zero(prime), phi_frame(prime)
    previous = None
    try:
        for k in range(1, levels + 1):
            lower_grid = expand2d(lower_morphism, "A", k)
            upper_grid = expand2d(upper_morphism, "A", k)
            n_k = lower_count(prime, k)
            a_k = upper_count_recurrence(prime, k)

            rec.equal(n_k, nonzero_count(lower_grid), f"N_{k}: Phi_0 count", k)
            rec.equal(n_k, pi_coding(lower_grid).count(), f"N_{k}: Pi(Phi_0) count", k)
            rec.equal(a_k, nonzero_count(upper_grid), f"a_{k}: Phi_F count", k)
            rec.equal(a_k, upper_count_closed_form(prime, k), f"a_{k}: closed form", k)

            lower = boxes_from_grid(lower_grid, k, prime)
            upper = boxes_from_grid(upper_grid, k, prime)
            wall = cantor_wall_boxes(prime, k)
            digits = phi_zero_boxes(prime, k)
            rec.expect(bool((lower.mask == digits.mask).all()), f"level {k}: Phi_0 cells differ from the digit criterion", k)
            _contained(rec, lower, wall, f"level {k}: Phi_0 box missing from the wall")
            _contained(rec, wall, upper, f"level {k}: wall box outside Phi_F")
            rec.expect(n_k <= wall.count <= a_k, f"level {k}: N_k <= count <= a_k", k, expected=f"[{n_k}, {a_k}]", actual=wall.count)

            if previous is not None:
                for name, fine in (("Phi_0", lower), ("wall", wall), ("Phi_F", upper)):
                    rec.expect(fine.refines(previous[name]), f"level {k}: {name} boxes do not refine level {k - 1}", k)
            previous = {"Phi_0": lower, "wall": wall, "Phi_F": upper}
            rec.note(f"level_{k}", {"N_k": n_k, "count": wall.count, "a_k": a_k})
    except (EngineConsistencyError, WindowShapeError, FractalError) as e:
        rec.fail(f"{type(e).__name__}: {e}")
    return rec.report()


def check_dimension_estimate(p: PrimeLike, levels: int = 5, tolerance: float = DIMENSION_TOLERANCE) -> CheckReport:
    """
    Box-counting slope of the Cantor-wall profile against log((p^2+1)/2)/log p.

    The slope over the two deepest levels must be within `tolerance`; exact
    N_k inputs must reproduce the target to rounding.
    """
    prime = as_prime(p)
    q = prime.p
    rec = CheckRecorder("dimension", {"p": q, "levels": levels, "tolerance": tolerance})
    ks = list(range(1, levels + 1))
    try:
        counts = [cantor_wall_boxes(prime, k).count for k in ks]
        estimate = box_dim_estimate(counts, prime, ks, tail=2)
        exact = box_dim_estimate([lower_count(prime, k) for k in ks], prime, ks)
    except (EngineConsistencyError, WindowShapeError, FractalError) as e:
        rec.fail(f"{type(e).__name__}: {e}")
        return rec.report()

    rec.expect(
        abs(estimate.tail_slope - estimate.target) <= tolerance,
        "tail slope outside tolerance",
        expected=f"{estimate.target:.5f}",
        actual=f"{estimate.tail_slope:.5f}",
    )
    for name in ("deepest", "slope"):
        value = getattr(exact, name)
        rec.expect(math.isclose(value, exact.target, rel_tol=1e-9), f"exact N_k {name}", expected=f"{exact.target:.9f}", actual=f"{value:.9f}")
    rec.note("counts", counts)
    rec.note("target", round(estimate.target, 9))
    rec.note("criterion", "tail_slope")
    estimators = {}
    for name in ("deepest", "slope", "tail_slope"):
        value = getattr(estimate, name)
        rec.note(name, round(value, 9))
        gap = value - estimate.target
        estimators[name] = {"value": round(value, 9), "gap": round(gap, 9), "within_tolerance": abs(gap) <= tolerance}
    rec.note("estimators", estimators)
    logger.info(f"Dimension p={q} levels={levels}: {estimators}")
    return rec.report()
