"""
Wall Transform Identities - Randomized checks of how walls react to
geometric transforms, reversal and frames.

This module provides check_wall_transforms, which draws seeded random
sequences and asserts, cell by cell:
- scaling: W^(r0,a0)(S(r1,a1))[m,n] = r1^(n(m+1)) a1^(m+1) r0^(-nm) a0^(-m) W(S)[m,n]
- reversal: the mirror image of W(S) is W of the reversed sequence
- reflected transforms of (r, a)-walls
- frame walls: the region beyond each inner frame of a window is the
  (ratio, corner)-wall of the adjacent outer frame
- the two leftmost columns of a zero-extended (r, a)-wall
- W(S^L) transposed against the wall of the inverse series
"""

from typing import Callable, Optional

import numpy as np

from src.exceptions import EngineConsistencyError, WindowShapeError
from src.finite_field import PrimeLike, as_prime
from src.sequences import (
    Seq,
    geometric_transform,
    laurent_inverse,
    left_zero_extend,
    make_seq,
    reverse_finite,
)
from src.settings import DEFAULT_SEED
from src.verify.engine_checks import compare_walls, random_sequence
from src.verify.models import CheckRecorder, CheckReport
from src.wall import Wall, WindowKind
from src.wall_engine import generate_ra_wall, generate_wall
from src.wall_geometry import extract_region, reflect_horizontal, reflect_vertical, rotate_ccw, rotate_cw, translate


def _unit(rng: np.random.Generator, p: int) -> int:
    return int(rng.integers(1, p))


def _leading_unit(rng: np.random.Generator, p: int, length: int, zero_rate: float = 0.0) -> Seq:
    s = random_sequence(rng, p, length, zero_rate)
    values = list(s.values)
    values[0] = _unit(rng, p)
    return make_seq(p, values, name="random")


def scaling_identity(rec: CheckRecorder, s: Seq, r0: int, a0: int, r1: int, a1: int, label: str):
    """(r0, a0)-wall of S(r1, a1) against the rescaled ordinary wall of S."""
    p = s.p
    max_row = (len(s) - 1) // 2
    plain = generate_wall(s, max_row)
    scaled = generate_ra_wall(geometric_transform(s, r1, a1), r0, a0, max_row)
    for m in range(0, max_row + 1):
        for n in range(plain.col_lo, plain.col_hi):
            base = plain.get(m, n)
            if base is None:
                continue
            factor = pow(r1, n * (m + 1), p) * pow(a1, m + 1, p) * pow(r0, -n * m, p) * pow(a0, -m, p)
            rec.equal(factor * base % p, scaled.get(m, n), f"{label}: scaling", m, n)


def reversal_identity(rec: CheckRecorder, s: Seq, label: str):
    """Mirror of W(S) about the middle of its window equals W(reverse(S))."""
    max_row = (len(s) - 1) // 2
    mirrored = reflect_vertical(generate_wall(s, max_row), span=(s.lo, s.hi))
    compare_walls(rec, generate_wall(reverse_finite(s), max_row), mirrored, f"{label}: reversal")


def reflected_transform_identity(rec: CheckRecorder, s: Seq, r0: int, a0: int, r1: int, a1: int, label: str):
    """
    W^(r0,a0)(S(r1,a1)) mirrored equals
    W^(1/r0, a0 r0^l)(reverse(S)(1/r1, r1^l a1)), l = len(S) - 1.
    """
    p = s.prime
    q = p.p
    ell = len(s) - 1
    max_row = ell // 2
    left = generate_ra_wall(geometric_transform(s, r1, a1), r0, a0, max_row)
    mirrored_seq = geometric_transform(reverse_finite(s), p.inv(r1), pow(r1, ell, q) * a1)
    right = generate_ra_wall(mirrored_seq, p.inv(r0), a0 * pow(r0, ell, q), max_row)
    compare_walls(rec, left, reflect_vertical(right, span=(0, ell + 1)), f"{label}: reflected transform")


def _frame_seq(w: Wall, record, name: str) -> Optional[Seq]:
    values = w.frame(record, name)
    if any(v is None for v in values):
        return None
    return make_seq(w.p, values, name=name)


def _place(image: Wall, turn: Callable[[Wall], Wall], rows: int, cols: int) -> Wall:
    """Rows >= 0 of image, turned into the wall's orientation and shifted onto it."""
    body = extract_region(image, (0, image.row_hi), (image.col_lo, image.col_hi))
    return translate(turn(body), rows, cols)


def _compare_placed(rec: CheckRecorder, w: Wall, placed: Wall, label: str):
    """placed against w on rows m >= 0 where both are stored and known."""
    for m, n, expected in placed.cells():
        if expected is None or m < 0 or not w.in_storage(m, n):
            continue
        actual = w.get(m, n)
        if actual is None:
            continue
        rec.equal(expected, actual, label, m, n)


def _mirror_columns(w: Wall) -> Wall:
    return reflect_vertical(w, span=(0, 1))


def frame_wall_identities(rec: CheckRecorder, w: Wall, label: str) -> int:
    """
    The four frame walls of every finite window with all eight frames known.

    With window top t, left c and side l, and V, H, rho the column mirror,
    the row mirror and the clockwise quarter turn:
        below D:  V(W^(S,D_0)(H))      shifted by (t+l+1, c+l)
        right of C: rho^-1(W^(R,C_0)(G)) shifted by (t+l, c+l+1)
        above A:  H(W^(P,A_0)(E))      shifted by (t-2, c-1)
        left of B: rho(W^(Q,B_0)(F))   shifted by (t-1, c-2)

    Returns:
        Number of windows examined
    """
    examined = 0
    for record in w.windows:
        if record.kind is not WindowKind.FINITE or not all(record.complete.values()):
            continue
        t, c, l = record.top_row, record.left_col, record.width
        ratios = record.ratios
        corners = {name: w.frame(record, name)[0] for name in "ABCD"}
        depth = (l + 1) // 2
        cases = (
            ("H", ratios["S"], corners["D"], _mirror_columns, t + l + 1, c + l),
            ("G", ratios["R"], corners["C"], rotate_ccw, t + l, c + l + 1),
            ("E", ratios["P"], corners["A"], reflect_horizontal, t - 2, c - 1),
            ("F", ratios["Q"], corners["B"], rotate_cw, t - 1, c - 2),
        )
        for name, ratio, corner, turn, rows, cols in cases:
            outer = _frame_seq(w, record, name)
            if outer is None or not ratio or not corner:
                continue
            image = generate_ra_wall(outer, ratio, corner, depth)
            _compare_placed(rec, w, _place(image, turn, rows, cols), f"{label}: {name}-frame wall of {record}")
        examined += 1
    rec.count("frame_windows", examined)
    return examined


def left_column_identities(rec: CheckRecorder, s: Seq, r0: int, a0: int, r1: int, a1: int, label: str):
    """
    Columns 0 and 1 of W^(r0,a0)(S(r1,a1)^L), with u the inverse series of S:
        W[m, 0] = a1 s0 (a1 s0 / a0)^m
        W[m, 1] = -a1 r1 s0^2 (-s0 a1 r1 / (r0 a0))^m u_{m+1}
    """
    prime = s.prime
    q = prime.p
    length = len(s)
    s0 = s.get(0)
    u = laurent_inverse(s, length)
    w = generate_ra_wall(left_zero_extend(geometric_transform(s, r1, a1)), r0, a0, length - 2)
    first = a1 * s0 * prime.inv(a0) % q
    second = -s0 * a1 * r1 * prime.inv(r0 * a0) % q
    for m in range(0, length - 1):
        rec.equal(a1 * s0 * pow(first, m, q) % q, w.get(m, 0), f"{label}: column 0", m, 0)
        expected = -a1 * r1 * s0 * s0 * pow(second, m, q) * u.get(m + 1) % q
        rec.equal(expected, w.get(m, 1), f"{label}: column 1", m, 1)


def inverse_transpose_identity(rec: CheckRecorder, s: Seq, label: str):
    """For s0 = 1: W(S^L)[j, i] = W(U')[i-1, j+1], U' = inverse(S)(-1, 1)."""
    length = len(s)
    u_prime = geometric_transform(laurent_inverse(s, length), s.p - 1, 1)
    left = generate_wall(left_zero_extend(s), length - 1)
    right = generate_wall(u_prime, length - 1)
    for j in range(-1, length):
        for i in range(0, length - j):
            a, b = left.get(j, i), right.get(i - 1, j + 1)
            if a is None or b is None:
                continue
            rec.equal(a, b, f"{label}: transpose against inverse series", j, i)


def check_wall_transforms(
    p: PrimeLike,
    trials: int = 20,
    seed: int = DEFAULT_SEED,
    min_length: int = 12,
    max_length: int = 24,
) -> CheckReport:
    """
    Randomized transform identities; every trial draws a fresh sequence
    with s0 != 0 and fresh nonzero (r0, a0), (r1, a1).

    Args:
        p: Odd prime
        trials: Number of random instances
        seed: RNG seed; identical seeds give identical reports
        min_length, max_length: Range of sequence lengths

    Returns:
        CheckReport named "transforms"
    """
    q = as_prime(p).p
    rec = CheckRecorder("transforms", {"p": q, "trials": trials, "seed": seed})
    rng = np.random.default_rng(seed)
    for trial in range(trials):
        label = f"trial {trial}"
        length = int(rng.integers(min_length, max_length + 1))
        s = _leading_unit(rng, q, length)
        r0, a0, r1, a1 = (_unit(rng, q) for _ in range(4))
        monic = make_seq(q, (1,) + s.values[1:], name="monic")
        zero_heavy = random_sequence(rng, q, 2 * length, zero_rate=0.5)
        try:
            scaling_identity(rec, s, r0, a0, r1, a1, label)
            scaling_identity(rec, s, 1, 1, 1, 1, f"{label} identity")
            reversal_identity(rec, s, label)
            reflected_transform_identity(rec, s, r0, a0, r1, a1, label)
            left_column_identities(rec, s, r0, a0, r1, a1, label)
            inverse_transpose_identity(rec, monic, label)
            frame_wall_identities(rec, generate_wall(zero_heavy, (len(zero_heavy) - 1) // 2), label)
        except (EngineConsistencyError, WindowShapeError) as e:
            rec.fail(f"{label}: {e}")
        rec.count("instances")
    rec.expect(rec.details.get("frame_windows", 0) > 0, "no window with all frames known was drawn")
    return rec.report()
