"""
Window Lemmata - Frames around the windows of p-Cantor and p-Singer walls.

This module provides check_window_lemmata, which builds the walls of
C~_j (with and without a random geometric transform) and asserts at each
level j, with P = p^j:
- corner: right of a P-window under a geometric row, the wall is the
  (a1/a0, a0)-wall of a transform of S_j
- Cantor between two windows: outer frames of the flanking windows fit
  S_j, a (P-2)-window sits below the gap, its north frames are the stated
  transforms, and all-ones parameters give a symmetric block
- Singer between two windows: the same with the roles of C_j and S_j
  swapped, located by scanning the detected windows
- the H-frame formula of every window whose outer frames fit Cantor or
  Singer blocks, plus its single-ratio simplification
- the profile of the C~_j block is the quarter turn of the S~_j block

Layouts are read from detected windows and from the fixed positions of the
padded blocks; a missing layout is a failure, not a skip.
"""

from itertools import product
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from src.exceptions import EngineConsistencyError, WindowShapeError
from src.finite_field import Prime, PrimeLike, as_prime
from src.logging_config import configure_module_logging
from src.sequences import (
    cantor_block,
    cantor_tilde,
    geometric_transform,
    singer_block,
    singer_tilde,
)
from src.settings import DEFAULT_SEED
from src.verify.models import MAX_MISMATCHES, CheckRecorder, CheckReport
from src.wall import ProfileGrid, Wall, WindowKind, WindowRecord
from src.wall_engine import generate_ra_wall, generate_wall, is_geometric, profile, ratio_relation
from src.wall_geometry import extract_region, rotate_cw

logger = configure_module_logging("verify.windows")

Params = Tuple[int, int, int, int]


def fit_transform(values: Sequence[Optional[int]], sigma: Sequence[int], p: int) -> List[Tuple[int, int]]:
    """
    Every (r, a), both nonzero, with values[k] = a r^k sigma_k for all k.

    sigma_0 must be 1 (true for every Cantor and Singer block). Returns an
    empty list when a value is unknown or no r fits.
    """
    if len(values) != len(sigma) or any(v is None for v in values):
        return []
    a = values[0] % p
    if a == 0:
        return []
    fits = []
    for r in range(1, p):
        x = a
        for value, s in zip(values, sigma):
            if value != x * s % p:
                break
            x = x * r % p
        else:
            fits.append((r, a))
    return fits


def _column(w: Wall, col: int, rows: range) -> List[Optional[int]]:
    return [w.get(m, col) for m in rows]


def _row(w: Wall, row: int, cols: range) -> List[Optional[int]]:
    return [w.get(row, n) for n in cols]


def _transformed_cantor_wall(prime: Prime, j: int, params: Params) -> Wall:
    r0, a0, r1, a1 = params
    side = prime.p**j
    seq = geometric_transform(cantor_tilde(prime, j), r1, a1)
    return generate_ra_wall(seq, r0, a0, (3 * side - 1) // 2)


# ---------------------------------------------------------------------------
# Corner of a window
# ---------------------------------------------------------------------------


def corner_lemma(rec: CheckRecorder, w: Wall, prime: Prime, j: int, label: str) -> None:
    """
    Window of side P at rows [0, P) x cols [0, P), geometric row -1 above
    and a transform of C_j on row 0 from column P.

    With a0 = W[-1, P], r0 = W[-1, P+1]/a0 and row 0 = a1 r1^i c_i:
        W[-1+jj, P+1+i] = W^(a1/a0, a0)(S_j(-a1 r1/(r0 a0), a0 r0))[i, jj]
    for -1 <= i <= (P+2)//2 on the triangle jj in [max(i,0), P+1-max(i,0)].
    Row i = -1 is the geometric column P, row i = 0 is column P+1.
    """
    q = prime.p
    side = q**j
    inv = prime.inv
    sigma_c = list(cantor_block(prime, j).values) + [0, 0]
    a0 = w.get(-1, side)
    r0 = w.get(-1, side + 1) * inv(a0) % q
    fits = fit_transform(_row(w, 0, range(side, 2 * side + 2)), sigma_c, q)
    if not fits:
        rec.fail(f"{label}: row 0 from column {side} is not a transform of C_{j}", m=0, n=side)
        return
    depth = (side + 2) // 2
    for r1, a1 in fits:
        ratio = -a1 * r1 * inv(r0 * a0) % q
        east = geometric_transform(singer_block(prime, j), ratio, a0 * r0)
        image = generate_ra_wall(east, a1 * inv(a0), a0, depth)
        for i in range(-1, depth + 1):
            lo = max(i, 0)
            for jj in range(lo, side + 2 - lo):
                expected, actual = image.get(i, jj), w.get(jj - 1, side + 1 + i)
                if expected is None or actual is None:
                    continue
                rec.equal(expected, actual, f"{label}: corner wall j={j} r1={r1}", jj - 1, side + 1 + i)
    rec.count("corner_layouts")


# ---------------------------------------------------------------------------
# Cantor block between two windows
# ---------------------------------------------------------------------------


def cantor_between_lemma(rec: CheckRecorder, w: Wall, prime: Prime, j: int, label: str) -> None:
    """
    Windows of side P on both sides of the C_j block of row 0, the geometric
    row -1 above it (m = 0, n = P).

    Asserts: the outer frames at columns P+1 and 2P-2 fit S_j; rows and
    columns P+1..2P-2 are zero where known; W[P-1, P+i] = a1 r1^-i c_i;
    W[P, P+i] = a1^2 r0^i / (a0 r1^2i); and the block is symmetric when
    every parameter is 1.
    """
    q = prime.p
    side = q**j
    inv = prime.inv
    sigma_c = list(cantor_block(prime, j).values)
    sigma_s = list(singer_block(prime, j).values)
    a0 = w.get(-1, 2 * side - 1)
    r0 = w.get(-1, side) * inv(w.get(-1, side + 1)) % q
    fits = fit_transform(_row(w, 0, range(2 * side - 1, side - 1, -1)), sigma_c, q)
    if not fits:
        rec.fail(f"{label}: row 0 block is not a transform of C_{j} read right to left", m=0, n=2 * side - 1)
        return

    outer_rows = range(-1, side + 1)
    for col in (side + 1, 2 * side - 2):
        found = fit_transform(_column(w, col, outer_rows), sigma_s, q)
        rec.expect(bool(found), f"{label}: column {col} is not a transform of S_{j}", -1, col)

    for m in range(side + 1, 2 * side - 1):
        for n in range(side + 1, 2 * side - 1):
            value = w.get(m, n)
            if value is not None:
                rec.equal(0, value, f"{label}: window below the C_{j} block", m, n)

    for r1, a1 in fits:
        r1_inv = inv(r1)
        for i in range(side):
            expected = a1 * pow(r1_inv, i, q) * sigma_c[i] % q
            rec.equal(expected, w.get(side - 1, side + i), f"{label}: north outer frame r1={r1}", side - 1, side + i)
            expected = a1 * a1 * pow(r0, i, q) * inv(a0) * pow(r1_inv, 2 * i, q) % q
            rec.equal(expected, w.get(side, side + i), f"{label}: north inner frame r1={r1}", side, side + i)

    if (a0, r0) == (1, 1) and (1, 1) in fits:
        for m in range(-1, side + 1):
            for jj in range(side):
                left, right = w.get(m, side + jj), w.get(m, 2 * side - 1 - jj)
                if left is not None and right is not None:
                    rec.equal(left, right, f"{label}: vertical symmetry", m, side + jj)
                mirror = w.get(side - 1 - m, side + jj)
                if left is not None and mirror is not None:
                    rec.equal(left, mirror, f"{label}: horizontal symmetry", m, side + jj)
        rec.count("symmetric_layouts")
    rec.count("cantor_between_layouts")


# ---------------------------------------------------------------------------
# Singer block between two windows
# ---------------------------------------------------------------------------


def _finite(w: Wall) -> Dict[Tuple[int, int, int], WindowRecord]:
    return {
        (r.top_row, r.left_col, r.width): r for r in w.windows if r.kind is WindowKind.FINITE
    }


def singer_between_lemma(rec: CheckRecorder, w: Wall, prime: Prime, levels: Sequence[int], label: str) -> Dict[int, int]:
    """
    Every window W2 of side P = p^j with windows of side P-2 at its lower
    corners: m = bottom(W2) + 2, n = left(W2) - 1, W1 ending at column n-1
    and W3 starting at column n+P+2, both with top row m.

    With a0 = W[m-1, n+P+1], r0 = W[m-1, n]/W[m-1, n+1] and row m a
    right-to-left transform a1 r1^k s_k of S_j, asserts: the outer frames at
    columns n+1 and n+P fit C_j; a window of side P has top-left
    (m+P-1, n+1); W[m+P-3, n+i] = a0^2 r0^4 / (a1 r1^2) (r1/r0^2)^i s_i;
    W[m+P-2, n+i] = a0 r0^(2-i); symmetry when every parameter is 1.

    Returns:
        Matched layouts per level j
    """
    q = prime.p
    inv = prime.inv
    finite = _finite(w)
    matched = {j: 0 for j in levels}
    for j in levels:
        side = q**j
        sigma_c = list(cantor_block(prime, j).values)
        sigma_s = list(singer_block(prime, j).values)
        for record in [r for key, r in finite.items() if key[2] == side]:
            m, n = record.bottom_row + 2, record.left_col - 1
            flanks = [
                rec_ for key, rec_ in finite.items()
                if key[2] == side - 2 and key[0] == m and (rec_.right_col == n - 1 or rec_.left_col == n + side + 2)
            ]
            if len(flanks) < 2:
                continue
            cells = (w.get(m - 1, n + side + 1), w.get(m - 1, n), w.get(m - 1, n + 1))
            if any(v is None for v in cells):
                continue
            a0, west, east = cells
            r0 = west * inv(east) % q
            fits = fit_transform(_row(w, m, range(n + side + 1, n - 1, -1)), sigma_s, q)
            if not fits:
                continue
            matched[j] += 1
            where = f"{label}: Singer layout j={j} at [{m},{n}]"

            for col in (n + 1, n + side):
                found = fit_transform(_column(w, col, range(m - 1, m + side - 1)), sigma_c, q)
                rec.expect(bool(found), f"{where}: column {col} is not a transform of C_{j}", m - 1, col)
            rec.expect(
                (m + side - 1, n + 1, side) in finite,
                f"{where}: no window of side {side} below the gap",
                m + side - 1,
                n + 1,
            )
            for r1, a1 in fits:
                scale = a0 * a0 * pow(r0, 4, q) * inv(a1 * r1 * r1) % q
                step = r1 * inv(r0 * r0) % q
                r0_inv = inv(r0)
                for i in range(side + 2):
                    expected = scale * pow(step, i, q) * sigma_s[i] % q
                    rec.equal(expected, w.get(m + side - 3, n + i), f"{where}: north outer frame r1={r1}", m + side - 3, n + i)
                    expected = a0 * pow(r0_inv, i - 2, q) % q
                    rec.equal(expected, w.get(m + side - 2, n + i), f"{where}: north inner frame", m + side - 2, n + i)

            if (a0, r0) == (1, 1) and (1, 1) in fits:
                for i in range(-1, side - 1):
                    for jj in range(1, side + 1):
                        here = w.get(m + i, n + jj)
                        across = w.get(m + i, n + side + 1 - jj)
                        below = w.get(m + side - 3 - i, n + jj)
                        if here is not None and across is not None:
                            rec.equal(here, across, f"{where}: vertical symmetry", m + i, n + jj)
                        if here is not None and below is not None:
                            rec.equal(here, below, f"{where}: horizontal symmetry", m + i, n + jj)
    return matched


# ---------------------------------------------------------------------------
# South outer frame of a window between two others
# ---------------------------------------------------------------------------


def _layout(side: int, p: int, max_level: int) -> Optional[Tuple[str, int]]:
    for j in range(1, max_level + 1):
        if side == p**j:
            return "cantor", j
        if side == p**j - 2:
            return "singer", j
    return None


def south_frame_formula(rec: CheckRecorder, w: Wall, record: WindowRecord, sigma: Sequence[int], where: str) -> bool:
    """
    For E, F and G fitting a_X r_X^k sigma_k:
        H_k = sigma_k (D0/R) S^k [Q aE/A0 (rE/P)^k + P aF/B0 (-rF/Q)^k - S aG/C0 (-rG/R)^k]
    and, when x = rE/P = -rF/Q = -rG/R,
        H_k = sigma_k K (x S)^k with K = (D0/R)(Q aE/A0 + P aF/B0 - S aG/C0).

    Returns:
        False if the outer frames do not all fit sigma
    """
    prime = w.prime
    q = prime.p
    inv = prime.inv
    fits = {name: fit_transform(w.frame(record, name), sigma, q) for name in "EFG"}
    if not all(fits.values()):
        return False
    P, Q, R, S = (record.ratios[k] for k in "PQRS")
    A0 = w.frame(record, "A")[0]
    B0 = w.frame(record, "B")[0]
    C0 = w.frame(record, "C")[0]
    D0 = w.frame(record, "D")[0]
    H = w.frame(record, "H")
    rec.expect(ratio_relation(w, record) is True, f"{where}: PS != (-1)^l QR", record.top_row, record.left_col)
    rec.expect(is_geometric(w.frame(record, "D"), q), f"{where}: D is not geometric", record.bottom_row, record.right_col)

    base = D0 * inv(R) % q
    for (rE, aE), (rF, aF), (rG, aG) in product(fits["E"], fits["F"], fits["G"]):
        tE, cE = rE * inv(P) % q, Q * aE * inv(A0) % q
        tF, cF = -rF * inv(Q) % q, P * aF * inv(B0) % q
        tG, cG = -rG * inv(R) % q, S * aG * inv(C0) % q
        for k, (s_k, h_k) in enumerate(zip(sigma, H)):
            bracket = cE * pow(tE, k, q) + cF * pow(tF, k, q) - cG * pow(tG, k, q)
            expected = s_k * base * pow(S, k, q) * bracket % q
            m, n = record.bottom_row + 2, record.right_col - k
            rec.equal(expected, h_k, f"{where}: H_{k}", m, n)
        if tE == tF == tG:
            K = base * (cE + cF - cG) % q
            for k, (s_k, h_k) in enumerate(zip(sigma, H)):
                m, n = record.bottom_row + 2, record.right_col - k
                rec.equal(s_k * K * pow(tE * S, k, q) % q, h_k, f"{where}: single-ratio H_{k}", m, n)
            rec.count("single_ratio_frames")
    return True


def between_windows(rec: CheckRecorder, w: Wall, prime: Prime, max_level: int, label: str) -> Dict[str, Dict[int, int]]:
    """Run south_frame_formula on every fully framed window of a Cantor or Singer layout."""
    q = prime.p
    found: Dict[str, Dict[int, int]] = {"cantor": {}, "singer": {}}
    for record in w.windows:
        if record.kind is not WindowKind.FINITE or not all(record.complete.values()):
            continue
        layout = _layout(record.width, q, max_level)
        if layout is None:
            continue
        kind, j = layout
        if kind == "cantor":
            sigma = list(singer_block(prime, j).values)
        else:
            sigma = list(cantor_block(prime, j).values)
        where = f"{label}: {kind} layout j={j} {record}"
        if south_frame_formula(rec, w, record, sigma, where):
            found[kind][j] = found[kind].get(j, 0) + 1
    return found


# ---------------------------------------------------------------------------
# Rotated profiles
# ---------------------------------------------------------------------------


def rotated_profiles(rec: CheckRecorder, prime: Prime, j: int) -> None:
    """chi(W(C~_j)[i, P+jj]) = rho(chi(W(S~_j)[i-1, P+3+jj])) for 0 <= i, jj < P."""
    side = prime.p**j
    cantor_wall = generate_wall(cantor_tilde(prime, j), side - 1)
    singer_wall = generate_wall(singer_tilde(prime, j), side)
    expected = profile(cantor_wall).region((0, side), (side, 2 * side))
    block = extract_region(singer_wall, (-1, side - 1), (side + 3, 2 * side + 3), rebase=True)
    actual = profile(rotate_cw(block))
    rec.comparisons += expected.cells.size
    if expected.cells.shape != actual.cells.shape:
        rec.fail(f"rotated profile j={j}: shape", expected=str(expected.cells.shape), actual=str(actual.cells.shape))
        return
    found = ProfileGrid(0, side, expected.cells).mismatches(ProfileGrid(0, side, actual.cells))
    for m, n, e, a in found[:MAX_MISMATCHES]:
        rec.fail(f"rotated profile j={j}", m=m, n=n, expected=e, actual=a)
    rec.failures += max(0, len(found) - MAX_MISMATCHES)


# ---------------------------------------------------------------------------
# Entry point
# ---------------------------------------------------------------------------


def _random_params(rng: np.random.Generator, p: int) -> Params:
    return tuple(int(v) for v in rng.integers(1, p, size=4))


def check_window_lemmata(p: PrimeLike, h: int, seed: int = DEFAULT_SEED) -> CheckReport:
    """
    Window lemmata on the walls of C~_1..C~_h, C~_(h+1) and C~_(h+2).

    Every layout runs once with all parameters 1 and once with seeded random
    nonzero (r0, a0, r1, a1).

    Args:
        p: Odd prime
        h: Deepest level, at least 1
        seed: RNG seed for the random parameters

    Returns:
        CheckReport named "windows"
    """
    prime = as_prime(p)
    q = prime.p
    rec = CheckRecorder("windows", {"p": q, "h": h, "seed": seed})
    if h < 1:
        rec.fail(f"level must be >= 1, got {h}")
        return rec.report()
    rng = np.random.default_rng(seed)
    ones: Params = (1, 1, 1, 1)
    levels = list(range(1, h + 1))

    try:
        for j in levels:
            for name, params in (("plain", ones), ("random", _random_params(rng, q))):
                label = f"C~_{j} {name} {params}"
                w = _transformed_cantor_wall(prime, j, params)
                corner_lemma(rec, w, prime, j, label)
                cantor_between_lemma(rec, w, prime, j, label)
            rotated_profiles(rec, prime, j)

        for name, params in (("plain", ones), ("random", _random_params(rng, q))):
            label = f"C~_{h + 1} {name}"
            w = _transformed_cantor_wall(prime, h + 1, params)
            singer = singer_between_lemma(rec, w, prime, levels, label)
            between = between_windows(rec, w, prime, h + 1, label)
            for j in levels:
                rec.count(f"singer_between_j{j}", singer[j])
                rec.count(f"cantor_frames_j{j}", between["cantor"].get(j, 0))
                rec.count(f"singer_frames_j{j}", between["singer"].get(j, 0))
            if name == "plain":
                for j in levels:
                    rec.expect(singer[j] > 0, f"{label}: no Singer-between layout at level {j}", j)
                    rec.expect(between["cantor"].get(j, 0) > 0, f"{label}: no framed Cantor layout at level {j}", j)
                for j in levels[:-1]:
                    rec.expect(between["singer"].get(j, 0) > 0, f"{label}: no framed Singer layout at level {j}", j)

        # level-h Singer layouts have complete outer frames only in C~_(h+2)
        for name, params in (("plain", ones), ("random", _random_params(rng, q))):
            label = f"C~_{h + 2} {name}"
            w = _transformed_cantor_wall(prime, h + 2, params)
            framed = between_windows(rec, w, prime, h, label)["singer"].get(h, 0)
            rec.count(f"singer_frames_j{h}", framed)
            if name == "plain":
                rec.expect(framed > 0, f"{label}: no framed Singer layout at level {h}", h)
    except (EngineConsistencyError, WindowShapeError) as e:
        rec.fail(f"engine: {e}")
    logger.debug(f"Window lemmata p={q} h={h}: {rec.details}")
    return rec.report()
