"""
Fractal Box Counting - Box sets, exact counts and dimension estimates.

This module provides the box-counting side of the p-Cantor wall:
- BoxLevel: the retained p^-k boxes of one level, built from a wall profile
  or a morphism grid
- closed_form_counts: exact N_k (lower morphism) and a_k (upper morphism)
- box_dim_estimate: log-count estimates across levels
- cantor_wall_counts / fractal_rows / write_csv: the engine-driven table
  behind the `fractal` CLI command

Counts are exact integers; floating point only enters the final log ratios.
"""

import csv
import math
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

import numpy as np
from pydantic import BaseModel, Field

from src.exceptions import FractalError
from src.finite_field import PrimeLike, as_prime
from src.logging_config import StructuredLogContext, configure_module_logging
from src.morphism2d import Grid2D
from src.sequences import cantor_tilde
from src.wall import ProfileGrid
from src.wall_engine import generate_wall, profile

logger = configure_module_logging("fractal")

CSV_COLUMNS = ("level", "k_count", "N_k", "a_k", "estimate")


@dataclass(frozen=True)
class BoxLevel:
    """Retained boxes I_{m,n} of side p^-k, as a p^k x p^k boolean mask."""

    level: int
    p: int
    mask: np.ndarray

    @property
    def side(self) -> int:
        return self.p**self.level

    @property
    def count(self) -> int:
        return int(np.count_nonzero(self.mask))

    def boxes(self) -> List[Tuple[int, int]]:
        return [(int(m), int(n)) for m, n in np.argwhere(self.mask)]

    def __contains__(self, box: Tuple[int, int]) -> bool:
        m, n = box
        return 0 <= m < self.side and 0 <= n < self.side and bool(self.mask[m, n])

    def coarsen(self) -> "BoxLevel":
        """Boxes of level k-1 that contain at least one retained level-k box."""
        if self.level == 0:
            raise FractalError("Level 0 has no coarser level")
        starts = np.arange(0, self.side, self.p)
        sums = np.add.reduceat(np.add.reduceat(self.mask.astype(np.int64), starts, axis=0), starts, axis=1)
        return BoxLevel(self.level - 1, self.p, sums > 0)

    def refines(self, coarse: "BoxLevel") -> bool:
        """True if every retained box lies inside a retained box of `coarse`."""
        if coarse.p != self.p or coarse.level != self.level - 1:
            raise FractalError(
                f"Level {coarse.level} (p={coarse.p}) is not the parent of level {self.level} (p={self.p})"
            )
        parents = np.repeat(np.repeat(coarse.mask, self.p, axis=0), self.p, axis=1)
        return bool(np.all(parents[self.mask]))


def _check_side(shape: Tuple[int, int], k: int, p: int, what: str):
    side = p**k
    if shape != (side, side):
        raise FractalError(f"{what} has shape {shape}, level {k} needs {side}x{side}")


def boxes_from_profile(pg: ProfileGrid, k: int, p: PrimeLike) -> BoxLevel:
    """
    Level-k box set of a profile: box (m, n) is kept iff cell [m, n] is X.

    Cells are read relative to the profile's first row and column.

    Raises:
        FractalError: If the profile is not p^k x p^k or holds Undefined cells
    """
    q = as_prime(p).p
    _check_side(pg.shape, k, q, "Profile")
    if np.any(pg.cells == ProfileGrid.UNDEFINED):
        raise FractalError(f"Profile at level {k} has Undefined cells")
    return BoxLevel(k, q, pg.cells == ProfileGrid.X)


def boxes_from_grid(grid: Grid2D, k: int, p: PrimeLike) -> BoxLevel:
    """Level-k box set of a morphism grid: every letter other than 0 is kept."""
    q = as_prime(p).p
    _check_side(grid.shape, k, q, "Grid")
    return BoxLevel(k, q, grid.nonzero_mask())


def phi_zero_boxes(p: PrimeLike, k: int) -> BoxLevel:
    """
    Nonzero cells of Phi_0,p^k(A) from base-p digits.

    [m, n] is kept iff every digit pair (m_j, n_j) has m_j = n_j mod 2.
    """
    q = as_prime(p).p
    idx = np.arange(q**k)
    keep = np.ones((q**k, q**k), dtype=bool)
    for j in range(k):
        digit = (idx // q**j) % q
        keep &= (digit[:, None] - digit[None, :]) % 2 == 0
    return BoxLevel(k, q, keep)


# ---------------------------------------------------------------------------
# Exact counts
# ---------------------------------------------------------------------------


def lower_count(p: PrimeLike, k: int) -> int:
    """N_k = ((p^2 + 1) / 2)^k."""
    q = as_prime(p).p
    return ((q * q + 1) // 2) ** k


def upper_count_recurrence(p: PrimeLike, k: int) -> int:
    """a_1 = p^2, a_{k+1} = ((p^2 + 1) / 2) a_k + 2 (p^2 - 1)(p^k - 1)."""
    q = as_prime(p).p
    if k < 1:
        raise FractalError(f"Level must be >= 1, got {k}")
    ratio = (q * q + 1) // 2
    a = q * q
    for j in range(1, k):
        a = ratio * a + 2 * (q * q - 1) * (q**j - 1)
    return a


def upper_count_closed_form(p: PrimeLike, k: int) -> Fraction:
    """Unrolled a_k as an exact rational; an integer for every k >= 1."""
    q = as_prime(p).p
    if k < 1:
        raise FractalError(f"Level must be >= 1, got {k}")
    s = Fraction(q * q + 1)
    bracket = (
        Fraction(2 * q * q) / s
        + Fraction(8, q - 1)
        - Fraction(4 * (q + 1), q - 1) * (Fraction(2 * q) / s) ** k
        + 4 * (Fraction(2) / s) ** k
    )
    return (s / 2) ** k * bracket


def closed_form_counts(p: PrimeLike, k: int) -> Tuple[int, int]:
    """
    (N_k, a_k) for level k.

    Raises:
        FractalError: If k < 1, or if the closed form and the recurrence for
            a_k disagree
    """
    recurrence = upper_count_recurrence(p, k)
    closed = upper_count_closed_form(p, k)
    if closed != recurrence:
        raise FractalError(f"a_{k} closed form {closed} != recurrence {recurrence}")
    return lower_count(p, k), recurrence


# ---------------------------------------------------------------------------
# Dimension estimate
# ---------------------------------------------------------------------------


def target_dimension(p: PrimeLike) -> float:
    """log((p^2 + 1) / 2) / log p."""
    q = as_prime(p).p
    return math.log((q * q + 1) / 2) / math.log(q)


class DimensionEstimate(BaseModel):
    """Box-counting estimates for one prime."""

    p: int = Field(..., description="Prime")
    levels: List[int] = Field(..., description="Levels the counts belong to")
    counts: List[int] = Field(..., description="Retained boxes per level")
    deepest: float = Field(..., description="log(count)/(k log p) at the deepest level")
    slope: float = Field(..., description="Least-squares slope of log count against k log p")
    tail_slope: float = Field(..., description="Slope over the deepest `tail` levels")
    target: float = Field(..., description="log((p^2+1)/2)/log p")


def _slope(levels: np.ndarray, counts: np.ndarray, p: int) -> float:
    return float(np.polyfit(levels * math.log(p), np.log(counts), 1)[0])


def box_dim_estimate(
    counts: Sequence[int],
    p: PrimeLike,
    levels: Optional[Sequence[int]] = None,
    tail: int = 2,
) -> DimensionEstimate:
    """
    Estimate the box-counting dimension from per-level box counts.

    Args:
        counts: Retained boxes at each level
        p: Prime; boxes at level k have side p^-k
        levels: Level of each count, defaults to 1, 2, ...
        tail: Number of deepest levels used for `tail_slope`

    Returns:
        DimensionEstimate with the deepest-level ratio, the slope over all
        levels and the slope over the last `tail` levels

    Raises:
        FractalError: If there are fewer than two counts, a count is not
            positive, or levels and counts differ in length
    """
    q = as_prime(p).p
    if not counts:
        raise FractalError("No counts to estimate from")
    if len(counts) < 2:
        raise FractalError("Need at least two levels")
    ks = list(levels) if levels is not None else list(range(1, len(counts) + 1))
    if len(ks) != len(counts):
        raise FractalError(f"{len(ks)} levels for {len(counts)} counts")
    if any(c <= 0 for c in counts) or any(k <= 0 for k in ks):
        raise FractalError("Counts and levels must be positive")
    tail = max(2, min(tail, len(counts)))

    x = np.array(ks, dtype=float)
    y = np.array(counts, dtype=float)
    deepest = math.log(counts[-1]) / (ks[-1] * math.log(q))
    estimate = DimensionEstimate(
        p=q,
        levels=ks,
        counts=[int(c) for c in counts],
        deepest=deepest,
        slope=_slope(x, y, q),
        tail_slope=_slope(x[-tail:], y[-tail:], q),
        target=target_dimension(q),
    )
    logger.debug(
        "Dimension estimate %s",
        StructuredLogContext(p=q, deepest=f"{estimate.deepest:.5f}", slope=f"{estimate.slope:.5f}"),
    )
    return estimate


# ---------------------------------------------------------------------------
# Engine-driven counts and CSV
# ---------------------------------------------------------------------------


def cantor_wall_boxes(p: PrimeLike, k: int) -> BoxLevel:
    """Level-k boxes from rows [0, p^k) x cols [p^k, 2p^k) of the p-Cantor wall."""
    prime = as_prime(p)
    side = prime.p**k
    s = cantor_tilde(prime, k)
    w = generate_wall(s, side - 1)
    pg = profile(w).region((0, side), (side, 2 * side))
    return boxes_from_profile(pg, k, prime)


def cantor_wall_counts(p: PrimeLike, levels: Iterable[int]) -> Dict[int, int]:
    """Retained boxes of the Cantor-wall profile at each level."""
    return {k: cantor_wall_boxes(p, k).count for k in levels}


class FractalRow(BaseModel):
    """One CSV row."""

    level: int
    k_count: int
    N_k: int
    a_k: int
    estimate: float


def fractal_rows(p: PrimeLike, levels: int) -> List[FractalRow]:
    """Rows for levels 1..levels: wall count, both bounds, log(count)/(k log p)."""
    prime = as_prime(p)
    if levels < 1:
        raise FractalError(f"Need at least one level, got {levels}")
    rows = []
    for k in range(1, levels + 1):
        count = cantor_wall_boxes(prime, k).count
        lower, upper = closed_form_counts(prime, k)
        rows.append(
            FractalRow(
                level=k,
                k_count=count,
                N_k=lower,
                a_k=upper,
                estimate=math.log(count) / (k * math.log(prime.p)),
            )
        )
    return rows


def write_csv(rows: Sequence[FractalRow], path: Path) -> None:
    with open(path, "w", newline="") as f:
        writer = csv.writer(f, lineterminator="\n")
        writer.writerow(CSV_COLUMNS)
        for row in rows:
            writer.writerow([row.level, row.k_count, row.N_k, row.a_k, f"{row.estimate:.6f}"])
