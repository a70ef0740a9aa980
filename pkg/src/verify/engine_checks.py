"""Engine against oracle, window theorems, and the profile theorem."""

from typing import Tuple

import numpy as np

from src.exceptions import EngineConsistencyError, WindowShapeError
from src.finite_field import PrimeLike, as_prime
from src.morphism2d import expand2d, phi_p, pi_coding
from src.sequences import Seq, cantor_tilde, make_seq
from src.settings import DEFAULT_SEED
from src.toeplitz_oracle import oracle_wall
from src.verify.models import MAX_MISMATCHES, CheckRecorder, CheckReport
from src.wall import UNDEFINED, ProfileGrid, Wall, WindowKind
from src.wall_engine import generate_wall, is_geometric, profile, ratio_relation


def random_sequence(
    rng: np.random.Generator,
    p: int,
    length: int,
    zero_rate: float = 0.0,
    lo: int = 0,
) -> Seq:
    """Uniform residues, with extra zeros planted at `zero_rate` to provoke windows."""
    values = rng.integers(0, p, size=length)
    if zero_rate > 0:
        values[rng.random(length) < zero_rate] = 0
    return make_seq(p, values.tolist(), lo=lo, name="random")


def audit_windows(rec: CheckRecorder, w: Wall, label: str) -> None:
    """Finite windows: inner frames geometric and PS = (-1)^l QR."""
    for record in w.windows:
        if record.kind is not WindowKind.FINITE:
            continue
        rec.count("finite_windows")
        for name in "ABCD":
            if not record.complete.get(name):
                continue
            frame = w.frame(record, name)
            rec.expect(
                is_geometric(frame, w.p),
                f"{label}: inner frame {name} of {record} is not geometric",
                record.top_row,
                record.left_col,
            )
        relation = ratio_relation(w, record)
        if relation is not None:
            rec.expect(relation, f"{label}: PS != (-1)^l QR for {record}", record.top_row, record.left_col)


def audit_cross_rule(rec: CheckRecorder, w: Wall, label: str) -> None:
    """FC1 on every cell whose five inputs are known and whose cell two rows up is nonzero."""
    v = w.values.astype(np.int64)
    p = w.p
    up2, up1, here = v[:-2, 1:-1], v[1:-1, 1:-1], v[2:, 1:-1]
    left, right = v[1:-1, :-2], v[1:-1, 2:]
    known = (up2 > 0) & (up1 >= 0) & (here >= 0) & (left >= 0) & (right >= 0)
    lhs = (here * up2) % p
    rhs = (up1 * up1 - left * right) % p
    bad = known & (lhs != rhs)
    rec.comparisons += int(np.count_nonzero(known))
    for i, j in np.argwhere(bad)[:5]:
        rec.fail(f"{label}: cross rule", m=w.row_lo + 2 + int(i), n=w.col_lo + 1 + int(j))


def compare_walls(rec: CheckRecorder, expected: Wall, actual: Wall, label: str) -> None:
    """Cellwise equality on cells known in both walls; known masks must agree."""
    if expected.values.shape != actual.values.shape or (
        (expected.row_lo, expected.col_lo) != (actual.row_lo, actual.col_lo)
    ):
        rec.fail(f"{label}: shape", expected=str(expected.values.shape), actual=str(actual.values.shape))
        return
    a, b = expected.values, actual.values
    both = (a != UNDEFINED) & (b != UNDEFINED)
    differs = (both & (a != b)) | ((a == UNDEFINED) != (b == UNDEFINED))
    rec.comparisons += int(np.count_nonzero(both))
    for i, j in np.argwhere(differs)[:5]:
        e, x = int(a[i, j]), int(b[i, j])
        rec.fail(
            label,
            m=expected.row_lo + int(i),
            n=expected.col_lo + int(j),
            expected=None if e == UNDEFINED else e,
            actual=None if x == UNDEFINED else x,
        )


def check_engine_oracle(
    p: PrimeLike,
    trials: int = 20,
    seed: int = DEFAULT_SEED,
    min_length: int = 20,
    max_length: int = 60,
) -> CheckReport:
    """
    Frame Constraints engine against Toeplitz determinants on random sequences.

    Every other trial plants extra zeros so that windows with full frames
    occur. Each wall is also audited for square windows, geometric inner
    frames, the ratio relation and the cross rule.
    """
    q = as_prime(p).p
    rec = CheckRecorder("engine", {"p": q, "trials": trials, "seed": seed})
    rng = np.random.default_rng(seed)
    for trial in range(trials):
        length = int(rng.integers(min_length, max_length + 1))
        s = random_sequence(rng, q, length, zero_rate=0.5 if trial % 2 else 0.0)
        max_row = (length - 1) // 2
        label = f"trial {trial}"
        try:
            w = generate_wall(s, max_row)
        except (EngineConsistencyError, WindowShapeError) as e:
            rec.fail(f"{label}: {e}")
            continue
        compare_walls(rec, oracle_wall(s, max_row), w, label)
        audit_windows(rec, w, label)
        audit_cross_rule(rec, w, label)
        rec.count("fallbacks", w.fallbacks)
        rec.count("walls")
    return rec.report()


def profile_theorem_grids(p: PrimeLike, h: int) -> Tuple[ProfileGrid, ProfileGrid, Wall]:
    """(expected, actual, wall) for rows [0, p^h) x cols [p^h, 2p^h)."""
    prime = as_prime(p)
    side = prime.p**h
    w = generate_wall(cantor_tilde(prime, h), side - 1)
    actual = profile(w).region((0, side), (side, 2 * side))
    letters = pi_coding(expand2d(phi_p(prime), "A", h))
    expected = ProfileGrid(0, side, letters.cells)
    return expected, actual, w


def check_profile_theorem(p: PrimeLike, h: int) -> CheckReport:
    """Profile of the p-Cantor wall square against Pi(Phi_p^h(A)), cell by cell."""
    q = as_prime(p).p
    rec = CheckRecorder("profile", {"p": q, "h": h})
    try:
        expected, actual, w = profile_theorem_grids(q, h)
    except (EngineConsistencyError, WindowShapeError) as e:
        rec.fail(f"engine: {e}")
        return rec.report()
    rec.comparisons += expected.cells.size
    found = expected.mismatches(actual)
    for m, n, e, a in found[:MAX_MISMATCHES]:
        rec.fail("profile cell", m=m, n=n, expected=e, actual=a)
    rec.failures += max(0, len(found) - MAX_MISMATCHES)
    audit_windows(rec, w, f"C~_{h}")
    rec.note("cells", int(expected.cells.size))
    rec.note("nonzero", int(actual.count()))
    rec.note("fallbacks", w.fallbacks)
    return rec.report()

