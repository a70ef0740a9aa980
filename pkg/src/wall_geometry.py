"""
Reflections, rotations and region extraction on stored walls.

Every operator is a pure index remapping of the stored block: Undefined maps
to Undefined, and the result carries no source sequence (cells outside the
remapped block read as Undefined).
"""

from dataclasses import replace
from typing import Optional, Tuple

import numpy as np

from src.exceptions import RegionError
from src.wall import Wall


def _image(w: Wall, values: np.ndarray, row_lo: int, col_lo: int, op: str) -> Wall:
    return replace(
        w,
        row_lo=row_lo,
        col_lo=col_lo,
        values=np.ascontiguousarray(values),
        sequence=None,
        windows=[],
        origin=f"{op}({w.origin or 'wall'})",
    )


def reflect_vertical(w: Wall, span: Optional[Tuple[int, int]] = None) -> Wall:
    """
    Mirror columns: output[m, l - n] = input[m, n].

    Args:
        w: Wall to reflect
        span: Half-open column interval [c0, c1) whose reversal defines
            l = c0 + c1 - 1; defaults to the stored columns
    """
    c0, c1 = span if span is not None else (w.col_lo, w.col_hi)
    axis = c0 + c1 - 1
    return _image(w, w.values[:, ::-1], w.row_lo, axis - (w.col_hi - 1), "V")


def reflect_horizontal(w: Wall) -> Wall:
    """Negate the row index: output[m, n] = input[-m, n]."""
    return _image(w, w.values[::-1, :], -(w.row_hi - 1), w.col_lo, "H")


def rotate_cw(w: Wall) -> Wall:
    """Quarter turn clockwise: output[m, n] = input[-n, m]."""
    return _image(w, np.rot90(w.values, k=-1), w.col_lo, -(w.row_hi - 1), "rho")


def rotate_ccw(w: Wall) -> Wall:
    """Inverse of rotate_cw: output[m, n] = input[n, -m]."""
    return _image(w, np.rot90(w.values, k=1), -(w.col_hi - 1), w.row_lo, "rho^-1")


def translate(w: Wall, rows: int, cols: int) -> Wall:
    """Shift indices: output[m + rows, n + cols] = input[m, n]."""
    return _image(w, w.values, w.row_lo + rows, w.col_lo + cols, f"T{rows},{cols}")


def extract_region(
    w: Wall,
    rows: Tuple[int, int],
    cols: Tuple[int, int],
    rebase: bool = False,
) -> Wall:
    """
    Copy of the half-open block rows x cols.

    With rebase=True the copy is re-indexed so its first cell is [0, 0];
    the original offset is kept in the origin string either way.

    Raises:
        RegionError: If the block is empty or leaves the stored range
    """
    r0, r1 = rows
    c0, c1 = cols
    if r1 <= r0 or c1 <= c0:
        raise RegionError(f"Empty region rows [{r0},{r1}) cols [{c0},{c1})")
    if r0 < w.row_lo or r1 > w.row_hi or c0 < w.col_lo or c1 > w.col_hi:
        raise RegionError(
            f"Region rows [{r0},{r1}) cols [{c0},{c1}) outside stored "
            f"rows [{w.row_lo},{w.row_hi}) cols [{w.col_lo},{w.col_hi})"
        )
    block = w.values[r0 - w.row_lo : r1 - w.row_lo, c0 - w.col_lo : c1 - w.col_lo].copy()
    row_lo, col_lo = (0, 0) if rebase else (r0, c0)
    return replace(
        w,
        row_lo=row_lo,
        col_lo=col_lo,
        values=block,
        sequence=None,
        windows=[],
        origin=f"{w.origin or 'wall'}[{r0}:{r1},{c0}:{c1}]",
    )


def same_cells(a: Wall, b: Wall) -> bool:
    """Same index ranges and identical cells (Undefined included)."""
    return (
        a.row_lo == b.row_lo
        and a.col_lo == b.col_lo
        and a.values.shape == b.values.shape
        and bool(np.array_equal(a.values, b.values))
    )
