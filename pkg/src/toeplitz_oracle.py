"""
Ground-truth number walls from explicit Toeplitz determinants.

Slow on purpose: every cell is an independent determinant over F_p. The
Frame Constraints engine is tested against this module, and uses
`oracle_cell` for the few boundary cells whose recurrence inputs are unknown.
"""

from typing import Optional, Tuple

import numpy as np

from src.exceptions import WallError
from src.finite_field import FpElement, Prime, PrimeLike, as_prime
from src.sequences import Seq
from src.wall import UNDEFINED, Wall, default_columns


def toeplitz_matrix(s: Seq, n: int, m: int) -> Optional[np.ndarray]:
    """
    T_S(n; m): the (m+1)x(m+1) matrix with entry (i, j) = s_{i-j+n}.

    Returns None when any referenced entry s_{n-m} .. s_{n+m} is undefined.
    """
    if m < 0:
        raise WallError(f"Toeplitz size index must be >= 0, got {m}")
    entries = s.window(n - m, n + m + 1)
    if any(e is None for e in entries):
        return None
    size = m + 1
    offsets = np.arange(size)[:, None] - np.arange(size)[None, :] + m
    return np.array(entries, dtype=s.prime.dtype)[offsets]


def _det_residue(matrix: np.ndarray, prime: Prime) -> int:
    p = prime.p
    a = np.array(matrix, dtype=prime.dtype) % p
    size = a.shape[0]
    det = 1
    for c in range(size):
        nonzero = np.nonzero(a[c:, c])[0]
        if nonzero.size == 0:
            return 0
        r = c + int(nonzero[0])
        if r != c:
            a[[c, r]] = a[[r, c]]
            det = -det
        pivot = int(a[c, c])
        det = det * pivot % p
        if c + 1 < size:
            factors = a[c + 1 :, c] * prime.inv(pivot) % p
            a[c + 1 :, c:] = (a[c + 1 :, c:] - factors[:, None] * a[c, c:][None, :]) % p
    return det % p


def det_mod_p(matrix: np.ndarray, p: PrimeLike) -> FpElement:
    """
    Determinant over F_p by Gaussian elimination with first-nonzero pivoting.

    Raises:
        WallError: If the matrix is not square
    """
    prime = as_prime(p)
    matrix = np.asarray(matrix)
    if matrix.ndim != 2 or matrix.shape[0] != matrix.shape[1]:
        raise WallError(f"Determinant needs a square matrix, got shape {matrix.shape}")
    if matrix.shape[0] == 0:
        return FpElement(1, prime)
    return FpElement(_det_residue(matrix, prime), prime)


def oracle_cell(s: Seq, m: int, n: int, r0: int = 1, a0: int = 1) -> Optional[int]:
    """
    W[m, n] of the (r0, a0)-wall of s, or None if undefined.

    For the ordinary wall (r0 = a0 = 1) this is det T_S(n; m). The
    (r0, a0)-wall of any sequence is the ordinary wall rescaled by
    1 / (r0^(nm) a0^m).
    """
    p = s.p
    if m < -1:
        return 0
    if m == -1:
        return a0 * pow(r0, n, p) % p
    matrix = toeplitz_matrix(s, n, m)
    if matrix is None:
        return None
    det = _det_residue(matrix, s.prime)
    if (r0, a0) != (1, 1) and det:
        scale = pow(r0, n * m, p) * pow(a0, m, p) % p
        det = det * s.prime.inv(scale) % p
    return det


def oracle_wall(
    s: Seq,
    max_row: int,
    cols: Optional[Tuple[int, int]] = None,
    r0: int = 1,
    a0: int = 1,
) -> Wall:
    """
    Number wall of s computed cell by cell from Toeplitz determinants.

    Args:
        s: Source sequence
        max_row: Last row to compute (rows -2 and -1 are always present)
        cols: Half-open column range; defaults to the sequence's window
        r0, a0: Parameters of an (r0, a0)-wall; (1, 1) gives Definition-style walls

    Returns:
        Wall with Undefined cells wherever a Toeplitz entry is undefined
    """
    c0, c1 = cols if cols is not None else default_columns(s)
    wall = Wall.empty(s, max_row, (c0, c1), ra=(r0 % s.p, a0 % s.p), origin="oracle")
    for m in range(-2, max_row + 1):
        for n in range(c0, c1):
            value = oracle_cell(s, m, n, r0, a0)
            wall.values[m - wall.row_lo, n - c0] = UNDEFINED if value is None else value
    return wall
