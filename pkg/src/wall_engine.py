"""
Number Wall Engine - Frame Constraints generation and window bookkeeping.

This module provides the fast path for building number walls:
- generate_wall / generate_ra_wall: row-by-row generation by the Frame
  Constraints (FC1 cross rule, FC2 south inner frame, FC3 south outer frame)
- detect_windows: maximal zero regions with their frames and ratios
- profile: the Zero / X / Undefined pattern of a wall

Windows are squares, so a zero run under a known nonzero row is the top of
a window at least as deep as the run is long; those cells are zero-filled
even when the window is cut by the triangle edge. Cells whose recurrence
inputs are still not all known fall back to the Toeplitz oracle.
Fallbacks are counted on the returned wall.
"""

import time
from dataclasses import dataclass
from typing import Dict, List, Optional, Tuple

import numpy as np

from src.exceptions import EngineConsistencyError, WallError, WindowShapeError
from src.logging_config import StructuredLogContext, configure_module_logging
from src.sequences import Extension, Seq
from src.toeplitz_oracle import oracle_cell
from src.wall import (
    FRAME_NAMES,
    UNDEFINED,
    ProfileGrid,
    Wall,
    WindowKind,
    WindowRecord,
    default_columns,
)

logger = configure_module_logging("wall_engine")


def zero_runs(mask: np.ndarray) -> List[Tuple[int, int]]:
    """Half-open index runs where a boolean row is True."""
    padded = np.concatenate(([0], mask.astype(np.int8), [0]))
    edges = np.flatnonzero(np.diff(padded))
    return [(int(a), int(b)) for a, b in zip(edges[0::2], edges[1::2])]


@dataclass
class _Zone:
    """Zero region seen so far during generation; side is None while open."""

    top: int
    left: int
    side: Optional[int] = None

    @property
    def closed(self) -> bool:
        return self.side is not None

    @property
    def bottom(self) -> int:
        return self.top + self.side - 1 if self.side is not None else -1


class _WallBuilder:
    """Row-major Frame Constraints generator for one (r0, a0)-wall."""

    def __init__(
        self,
        s: Seq,
        max_row: int,
        cols: Optional[Tuple[int, int]],
        r0: int,
        a0: int,
    ):
        self.s = s
        self.prime = s.prime
        self.p = s.p
        self.r0 = r0
        self.a0 = a0
        c0, c1 = cols if cols is not None else default_columns(s)
        self.wall = Wall.empty(s, max_row, (c0, c1), ra=(r0, a0), origin="engine")
        self.c0 = c0
        self.columns = np.arange(c0, c1, dtype=np.int64)
        self.dlo, self.dhi = s.defined_bounds()
        self.zones: List[_Zone] = []
        self.active: List[int] = []
        width = c1 - c0
        self.owner_prev2 = np.full(width, -1, dtype=np.int64)
        self.owner_prev = np.full(width, -1, dtype=np.int64)
        self.fallbacks = 0
        # last row through which each column is known to be zero
        self.zero_until = np.full(width, -1, dtype=np.int64)
        # zone id -> bottom row (-1 while open); the last slot stays -1 for owner -1
        self.zone_bottoms = np.full(64, -1, dtype=np.int64)

    # -- cell access ---------------------------------------------------------

    def _get(self, m: int, n: int) -> Optional[int]:
        return self.wall.get(m, n)

    def _edge(self, m: int, n: int) -> int:
        value = self.wall.get(m, n)
        return UNDEFINED if value is None else value

    def _defined(self, m: int) -> np.ndarray:
        mask = np.ones(self.columns.shape, dtype=bool)
        if self.dlo is not None:
            mask &= self.columns - m >= self.dlo
        if self.dhi is not None:
            mask &= self.columns + m < self.dhi
        return mask

    def _div(self, a: int, b: int, m: int, n: int, what: str) -> int:
        if b == 0:
            raise EngineConsistencyError(f"Zero {what} in a window frame", m, n)
        return a * self.prime.inv(b) % self.p

    # -- generation ------------------------------------------------------------

    def build(self) -> Wall:
        started = time.perf_counter()
        self._initial_rows()
        for m in range(1, self.wall.max_row + 1):
            self._compute_row(m)
            self._assign_runs(m)
        self.wall.fallbacks = self.fallbacks
        self.wall.windows = detect_windows(self.wall)
        elapsed = time.perf_counter() - started
        logger.info(
            "Generated wall %s",
            StructuredLogContext(
                seq=self.s.describe(),
                ra=(self.r0, self.a0),
                rows=self.wall.max_row + 1,
                cols=self.columns.size,
                windows=len(self.wall.windows),
                fallbacks=self.fallbacks,
                seconds=f"{elapsed:.3f}",
            ),
        )
        return self.wall

    def _initial_rows(self):
        values = self.wall.values
        values[0, :] = 0
        values[1, :] = [self.a0 * pow(self.r0, int(n), self.p) % self.p for n in self.columns]
        if self.wall.max_row >= 0:
            row0 = [self.s.get(int(n)) for n in self.columns]
            values[2, :] = [UNDEFINED if v is None else v for v in row0]
            self._assign_runs(0)

    def _compute_row(self, m: int):
        p = self.p
        values = self.wall.values
        i = m - self.wall.row_lo
        cols = self.columns
        c1 = self.c0 + cols.size

        defined = self._defined(m)
        trivial = defined & (
            self.s.zero_span_mask(cols - m, cols + 1) | self.s.zero_span_mask(cols, cols + m + 1)
        )
        row = np.full(cols.size, UNDEFINED, dtype=values.dtype)
        row[trivial] = 0

        up1 = values[i - 1]
        up2 = values[i - 2]
        left = np.concatenate(([self._edge(m - 1, self.c0 - 1)], up1[:-1]))
        right = np.concatenate((up1[1:], [self._edge(m - 1, c1)]))

        pending = defined & ~trivial
        below_roof = pending & (self.zero_until >= m)
        row[below_roof] = 0
        pending &= ~below_roof

        fc1 = pending & (up2 > 0) & (up1 >= 0) & (left >= 0) & (right >= 0)
        if fc1.any():
            num = (up1[fc1] * up1[fc1] - left[fc1] * right[fc1]) % p
            row[fc1] = num * self.prime.inv_array(up2[fc1]) % p
        pending &= ~fc1

        under_zero = pending & (up2 == 0)
        if under_zero.any():
            owner_bottom = self.zone_bottoms[self.owner_prev2]
            interior = under_zero & (owner_bottom >= m)
            row[interior] = 0
            pending &= ~interior

        values[i] = row
        for j in np.flatnonzero(pending):
            n = self.c0 + int(j)
            value = None
            if up2[j] == 0:
                value = self._frame_rule(m, n, int(self.owner_prev2[j]))
            if value is None:
                value = self._fallback(m, n)
            values[i, j] = value

    def _frame_rule(self, m: int, n: int, zid: int) -> Optional[int]:
        if zid < 0 or not self.zones[zid].closed:
            return None
        zone = self.zones[zid]
        t, c, l = zone.top, zone.left, zone.side
        k = c + l - n
        if m == t + l:
            return self._south_inner(t, c, l, k)
        if m == t + l + 1:
            return self._south_outer(t, c, l, k)
        return None

    def _south_inner(self, t: int, c: int, l: int, k: int) -> Optional[int]:
        """FC2: D_k = (-1)^(lk) B_k C_k / A_k."""
        a = self._get(t - 1, c - 1 + k)
        b = self._get(t - 1 + k, c - 1)
        cc = self._get(t + l - k, c + l)
        if a is None or b is None or cc is None:
            return None
        value = self.prime.sign(l * k) * b * cc % self.p
        return self._div(value, a, t - 1, c - 1 + k, "A_k")

    def _south_outer(self, t: int, c: int, l: int, k: int) -> Optional[int]:
        """FC3: H_k = (Q E_k/A_k + (-1)^k P F_k/B_k - (-1)^k S G_k/C_k) D_k / R."""
        cells = {
            "a0": (t - 1, c - 1),
            "a1": (t - 1, c),
            "ak": (t - 1, c - 1 + k),
            "b1": (t, c - 1),
            "bk": (t - 1 + k, c - 1),
            "c0": (t + l, c + l),
            "c1": (t + l - 1, c + l),
            "ck": (t + l - k, c + l),
            "d1": (t + l, c + l - 1),
            "dk": (t + l, c + l - k),
            "ek": (t - 2, c - 1 + k),
            "fk": (t - 1 + k, c - 2),
            "gk": (t + l - k, c + l + 1),
        }
        v: Dict[str, int] = {}
        for key, (m, n) in cells.items():
            value = self._get(m, n)
            if value is None:
                return None
            v[key] = value
        p = self.p
        sign = self.prime.sign(k)
        # A_0 = B_0 and C_0 = D_0 are shared corners.
        P = self._div(v["a1"], v["a0"], *cells["a0"], "A_0")
        Q = self._div(v["b1"], v["a0"], *cells["a0"], "B_0")
        R = self._div(v["c1"], v["c0"], *cells["c0"], "C_0")
        S = self._div(v["d1"], v["c0"], *cells["c0"], "D_0")
        term = Q * self._div(v["ek"], v["ak"], *cells["ak"], "A_k")
        term += sign * P * self._div(v["fk"], v["bk"], *cells["bk"], "B_k")
        term -= sign * S * self._div(v["gk"], v["ck"], *cells["ck"], "C_k")
        return self._div(term % p * v["dk"] % p, R, *cells["c1"], "R")

    def _fallback(self, m: int, n: int) -> int:
        self.fallbacks += 1
        value = oracle_cell(self.s, m, n, self.r0, self.a0)
        if value is None:
            raise EngineConsistencyError("Oracle has no value for a defined cell", m, n)
        logger.debug(f"Oracle fallback at [{m},{n}]")
        return value

    # -- zero-region bookkeeping -----------------------------------------------

    def _assign_runs(self, m: int):
        i = m - self.wall.row_lo
        row = self.wall.values[i]
        owner = np.full(row.size, -1, dtype=np.int64)
        for a, b in zero_runs(row == 0):
            n_a, n_b = self.c0 + a, self.c0 + b
            above = self.owner_prev[a:b]
            ids = sorted(set(int(z) for z in above[above >= 0]))
            if not ids:
                zid = self._new_zone(m, n_a, n_b)
            else:
                closed = [z for z in ids if self.zones[z].closed]
                if closed:
                    zid = closed[0]
                    zone = self.zones[zid]
                    inside = zone.left <= n_a and n_b <= zone.left + zone.side
                    if len(ids) > 1 or m > zone.bottom or not inside:
                        raise EngineConsistencyError(
                            f"Zero run [{n_a},{n_b}) leaves the {zone.side}x{zone.side} "
                            f"window at [{zone.top},{zone.left}]",
                            m,
                            n_a,
                        )
                else:
                    zid = ids[0]
                    for other in ids[1:]:
                        self.owner_prev[self.owner_prev == other] = zid
                        owner[owner == other] = zid
                        self.zones[zid].top = min(self.zones[zid].top, self.zones[other].top)
                        self.zones[zid].left = min(self.zones[zid].left, self.zones[other].left)
            owner[a:b] = zid
        self._check_active(m, row)
        self.owner_prev2, self.owner_prev = self.owner_prev, owner

    def _new_zone(self, m: int, n_a: int, n_b: int) -> int:
        left = self._get(m, n_a - 1)
        right = self._get(m, n_b)
        zone = _Zone(top=m, left=n_a)
        a, b = n_a - self.c0, n_b - self.c0
        roof = self.wall.values[m - 1 - self.wall.row_lo, a:b]
        if bool(np.all(roof > 0)):
            self.zero_until[a:b] = np.maximum(self.zero_until[a:b], m + (b - a) - 1)
        if left and right:
            zone.side = n_b - n_a
            self.active.append(len(self.zones))
            logger.debug(f"Window {zone.side}x{zone.side} opens at [{m},{n_a}]")
        self.zones.append(zone)
        zid = len(self.zones) - 1
        if zid >= self.zone_bottoms.size - 1:
            grown = np.full(2 * self.zone_bottoms.size, -1, dtype=np.int64)
            grown[: self.zone_bottoms.size - 1] = self.zone_bottoms[:-1]
            self.zone_bottoms = grown
        self.zone_bottoms[zid] = zone.bottom
        return zid

    def _check_active(self, m: int, row: np.ndarray):
        still_active = []
        for zid in self.active:
            zone = self.zones[zid]
            if zone.top < m <= zone.bottom:
                lo = max(zone.left - self.c0, 0)
                hi = min(zone.left + zone.side - self.c0, row.size)
                bad = np.flatnonzero(row[lo:hi] > 0)
                if bad.size:
                    raise EngineConsistencyError(
                        "Nonzero cell inside a closed window", m, self.c0 + lo + int(bad[0])
                    )
            if m == zone.bottom + 1:
                self._check_inner_frame(zone)
            if m <= zone.bottom + 1:
                still_active.append(zid)
        self.active = still_active

    def _check_inner_frame(self, zone: _Zone):
        record = WindowRecord(zone.top, zone.left, zone.side, zone.side)
        for name in ("A", "B", "C", "D"):
            cells = record.frame_cells(name)
            frame = [self._get(m, n) for m, n in cells]
            if any(v is None for v in frame):
                continue
            if not is_geometric(frame, self.p):
                m, n = cells[0]
                raise EngineConsistencyError(f"Inner frame {name} is not geometric", m, n)


def is_geometric(values: List[int], p: int) -> bool:
    """True if every entry is nonzero and consecutive ratios agree mod p."""
    if any(v % p == 0 for v in values):
        return False
    if len(values) < 3:
        return True
    x0, x1 = values[0], values[1]
    # x_{k+1} / x_k == x_1 / x_0  <=>  x_{k+1} x_0 == x_k x_1
    return all(values[k + 1] * x0 % p == values[k] * x1 % p for k in range(len(values) - 1))


def generate_wall(
    s: Seq, max_row: int, cols: Optional[Tuple[int, int]] = None
) -> Wall:
    """
    Number wall of s by the Frame Constraints.

    Args:
        s: Source sequence
        max_row: Last row to generate
        cols: Half-open column range; defaults to the sequence's window

    Returns:
        Wall with its window registry populated

    Raises:
        EngineConsistencyError: If the generated cells contradict the window theorems
    """
    return _WallBuilder(s, max_row, cols, 1, 1).build()


def generate_ra_wall(
    s: Seq,
    r0: int,
    a0: int,
    max_row: int,
    cols: Optional[Tuple[int, int]] = None,
) -> Wall:
    """
    (r0, a0)-number wall of s: row -1 is a0 * r0^n, then the Frame Constraints.

    Raises:
        WallError: If r0 or a0 is zero mod p
    """
    r0, a0 = int(r0) % s.p, int(a0) % s.p
    if r0 == 0 or a0 == 0:
        raise WallError(f"(r0, a0) = ({r0}, {a0}) must both be nonzero mod {s.p}")
    return _WallBuilder(s, max_row, cols, r0, a0).build()


# ---------------------------------------------------------------------------
# Window detection
# ---------------------------------------------------------------------------


def _find(parent: List[int], x: int) -> int:
    while parent[x] != x:
        parent[x] = parent[parent[x]]
        x = parent[x]
    return x


def _components(w: Wall) -> Dict[int, List[Tuple[int, int, int]]]:
    """Zero runs (m, n_start, n_stop) of rows m >= 0 grouped by 4-connectivity."""
    parent: List[int] = []
    runs: List[Tuple[int, int, int]] = []
    prev_starts = np.empty(0, dtype=np.int64)
    prev_stops = np.empty(0, dtype=np.int64)
    prev_ids: List[int] = []
    for m in range(max(0, w.row_lo), w.row_hi):
        row_runs = zero_runs(w.row(m) == 0)
        ids = []
        for a, b in row_runs:
            rid = len(runs)
            runs.append((m, w.col_lo + a, w.col_lo + b))
            parent.append(rid)
            ids.append(rid)
            j0 = int(np.searchsorted(prev_stops, a, side="right"))
            j1 = int(np.searchsorted(prev_starts, b, side="left"))
            for j in range(j0, j1):
                ra, rb = _find(parent, prev_ids[j]), _find(parent, rid)
                if ra != rb:
                    parent[max(ra, rb)] = min(ra, rb)
        prev_starts = np.array([a for a, _ in row_runs], dtype=np.int64)
        prev_stops = np.array([b for _, b in row_runs], dtype=np.int64)
        prev_ids = ids
    groups: Dict[int, List[Tuple[int, int, int]]] = {}
    for rid, run in enumerate(runs):
        groups.setdefault(_find(parent, rid), []).append(run)
    return groups


def _touches_zero_side(w: Wall, left: int, right: int) -> bool:
    s = w.sequence
    if s is None:
        return False
    if left == w.col_lo and s.left is Extension.ZERO:
        return True
    return right == w.col_hi and s.right is Extension.ZERO


def _margin(w: Wall, top: int, bottom: int, left: int, right: int) -> Optional[np.ndarray]:
    """One-cell ring around [top, bottom] x [left, right); None if it leaves storage."""
    if top - 1 < w.row_lo or bottom + 1 >= w.row_hi or left - 1 < w.col_lo or right >= w.col_hi:
        return None
    block = w.values[
        top - 1 - w.row_lo : bottom + 2 - w.row_lo, left - 1 - w.col_lo : right + 1 - w.col_lo
    ]
    return np.concatenate((block[0], block[-1], block[1:-1, 0], block[1:-1, -1]))


def _finite_record(w: Wall, top: int, left: int, side: int) -> WindowRecord:
    record = WindowRecord(top, left, side, side)
    for name in FRAME_NAMES:
        record.complete[name] = all(w.get(m, n) is not None for m, n in record.frame_cells(name))
    inv = w.prime.inv
    p = w.p
    for ratio, name in zip("PQRS", "ABCD"):
        x0, x1 = (w.get(m, n) for m, n in record.frame_cells(name)[:2])
        record.ratios[ratio] = x1 * inv(x0) % p if x0 and x1 is not None else None
    return record


def detect_windows(w: Wall) -> List[WindowRecord]:
    """
    Maximal zero regions of rows m >= 0, ordered by (top row, left column).

    Regions running into a zero-extended side are INFINITE; regions whose
    one-cell margin is not fully known are OPEN; the rest must be filled
    squares with nonzero margins and become FINITE records with frames.

    Raises:
        WindowShapeError: If a region with a known margin is not a square
    """
    records: List[WindowRecord] = []
    for runs in _components(w).values():
        top = min(m for m, _, _ in runs)
        bottom = max(m for m, _, _ in runs)
        left = min(a for _, a, _ in runs)
        right = max(b for _, _, b in runs)
        height, width = bottom - top + 1, right - left
        cells = sum(b - a for _, a, b in runs)

        if _touches_zero_side(w, left, right):
            records.append(WindowRecord(top, left, height, width, WindowKind.INFINITE))
            continue
        ring = _margin(w, top, bottom, left, right)
        if ring is None or np.any(ring < 0):
            records.append(WindowRecord(top, left, height, width, WindowKind.OPEN))
            continue
        if height != width or cells != height * width:
            raise WindowShapeError(
                f"Zero region at [{top},{left}] spans {height}x{width} with {cells} cells"
            )
        if np.any(ring == 0):
            raise WindowShapeError(f"Window at [{top},{left}] touches another zero region")
        records.append(_finite_record(w, top, left, width))

    records.sort(key=lambda r: (r.top_row, r.left_col))
    logger.debug(f"Detected {len(records)} windows on {w.describe()}")
    return records


def ratio_relation(w: Wall, record: WindowRecord) -> Optional[bool]:
    """PS == (-1)^l QR for a finite window, or None if a ratio is unknown."""
    r = record.ratios
    if record.kind is not WindowKind.FINITE or any(r.get(k) is None for k in "PQRS"):
        return None
    p = w.p
    return r["P"] * r["S"] % p == w.prime.sign(record.width) * r["Q"] * r["R"] % p


def profile(w: Wall) -> ProfileGrid:
    """Pointwise 0 -> Zero, nonzero -> X, Undefined -> Undefined."""
    codes = np.where(
        ~w.known_mask(),
        ProfileGrid.UNDEFINED,
        np.where(w.values == 0, ProfileGrid.ZERO, ProfileGrid.X),
    ).astype(np.uint8)
    return ProfileGrid(w.row_lo, w.col_lo, codes)
