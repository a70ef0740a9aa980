"""
Wall data types and their file formats.

A `Wall` is a dense block of an infinite array indexed by (row m, column n).
Cells are residues mod p or Undefined (stored as -1). Cells outside the
stored block are answered from the generating sequence when there is one:
row -2 is zero, row -1 is a0 * r0^n, and a cell whose Toeplitz matrix has an
all-zero first or last row is zero.
"""

import struct
from dataclasses import dataclass, field
from enum import Enum
from pathlib import Path
from typing import Dict, Iterator, List, Optional, Tuple

import numpy as np

from src.exceptions import RegionError, WallFormatError
from src.finite_field import FpElement, Prime
from src.sequences import Extension, Seq

UNDEFINED = -1

# Columns of zero kept beside a zero-extended side when no range is given.
ZERO_SIDE_MARGIN = 2

FRAME_NAMES = ("A", "B", "C", "D", "E", "F", "G", "H")

MAGIC = b"NWAL"
FORMAT_VERSION = 1
_HEADER = struct.Struct("<4sBQQQqqIIB")


def default_columns(s: Seq) -> Tuple[int, int]:
    """The sequence's stored window, widened on zero-extended sides."""
    c0 = s.lo - (ZERO_SIDE_MARGIN if s.left is Extension.ZERO else 0)
    c1 = s.hi + (ZERO_SIDE_MARGIN if s.right is Extension.ZERO else 0)
    return c0, c1


def trivially_zero(s: Seq, m: int, n: int) -> bool:
    """True when T_S(n; m) has an all-zero first row or last row."""
    return s.is_zero_on(n - m, n + 1) or s.is_zero_on(n, n + m + 1)


class WindowKind(str, Enum):
    FINITE = "finite"
    INFINITE = "infinite"
    OPEN = "open"


@dataclass
class WindowRecord:
    """
    A maximal zero region of a wall.

    FINITE windows are l x l squares with a fully known margin. INFINITE
    windows run into a zero-extended side of the sequence. OPEN windows touch
    Undefined cells, so their extent is not determined.

    Frames are not stored; `Wall.frame` materializes them from the cells.
    Index k runs 0..l+1 along each frame edge:
        A_k = W[t-1, c-1+k]   B_k = W[t-1+k, c-1]
        C_k = W[t+l-k, c+l]   D_k = W[t+l, c+l-k]
        E_k = W[t-2, c-1+k]   F_k = W[t-1+k, c-2]
        G_k = W[t+l-k, c+l+1] H_k = W[t+l+1, c+l-k]
    """

    top_row: int
    left_col: int
    height: int
    width: int
    kind: WindowKind = WindowKind.FINITE
    ratios: Dict[str, Optional[int]] = field(default_factory=dict)
    complete: Dict[str, bool] = field(default_factory=dict)

    @property
    def side(self) -> Optional[int]:
        return self.width if self.kind is WindowKind.FINITE else None

    @property
    def bottom_row(self) -> int:
        return self.top_row + self.height - 1

    @property
    def right_col(self) -> int:
        return self.left_col + self.width - 1

    def frame_cells(self, name: str) -> List[Tuple[int, int]]:
        """(m, n) of frame entries k = 0..l+1 for a finite window."""
        if self.kind is not WindowKind.FINITE:
            raise RegionError(f"{self.kind.value} windows have no finite frames")
        t, c, l = self.top_row, self.left_col, self.width
        ks = range(l + 2)
        cells = {
            "A": [(t - 1, c - 1 + k) for k in ks],
            "B": [(t - 1 + k, c - 1) for k in ks],
            "C": [(t + l - k, c + l) for k in ks],
            "D": [(t + l, c + l - k) for k in ks],
            "E": [(t - 2, c - 1 + k) for k in ks],
            "F": [(t - 1 + k, c - 2) for k in ks],
            "G": [(t + l - k, c + l + 1) for k in ks],
            "H": [(t + l + 1, c + l - k) for k in ks],
        }
        try:
            return cells[name]
        except KeyError:
            raise RegionError(f"Unknown frame {name!r}") from None

    def contains(self, m: int, n: int) -> bool:
        return self.top_row <= m <= self.bottom_row and self.left_col <= n <= self.right_col

    def __str__(self):
        size = self.width if self.kind is WindowKind.FINITE else f"{self.height}x{self.width}"
        return f"{self.kind.value} window {size} at [{self.top_row},{self.left_col}]"


@dataclass
class Wall:
    """Dense block of a number wall (or of a geometric image of one)."""

    prime: Prime
    row_lo: int
    col_lo: int
    values: np.ndarray
    sequence: Optional[Seq] = None
    ra: Tuple[int, int] = (1, 1)
    windows: List[WindowRecord] = field(default_factory=list)
    origin: str = ""
    fallbacks: int = 0

    @classmethod
    def empty(
        cls,
        s: Seq,
        max_row: int,
        cols: Tuple[int, int],
        ra: Tuple[int, int] = (1, 1),
        origin: str = "",
    ) -> "Wall":
        c0, c1 = cols
        if c1 <= c0:
            raise RegionError(f"Empty column range [{c0}, {c1})")
        if max_row < -1:
            raise RegionError(f"max_row must be >= -1, got {max_row}")
        values = np.full((max_row + 3, c1 - c0), UNDEFINED, dtype=s.prime.dtype)
        return cls(s.prime, -2, c0, values, sequence=s, ra=ra, origin=origin)

    @property
    def p(self) -> int:
        return self.prime.p

    @property
    def row_hi(self) -> int:
        return self.row_lo + self.values.shape[0]

    @property
    def col_hi(self) -> int:
        return self.col_lo + self.values.shape[1]

    @property
    def max_row(self) -> int:
        return self.row_hi - 1

    @property
    def shape(self) -> Tuple[int, int]:
        return self.values.shape

    def in_storage(self, m: int, n: int) -> bool:
        return self.row_lo <= m < self.row_hi and self.col_lo <= n < self.col_hi

    def get(self, m: int, n: int) -> Optional[int]:
        """Residue at [m, n], or None if Undefined."""
        if self.in_storage(m, n):
            v = self.values[m - self.row_lo, n - self.col_lo]
            return None if v < 0 else int(v)
        return self._outside(m, n)

    def __getitem__(self, index: Tuple[int, int]) -> Optional[int]:
        return self.get(*index)

    def _outside(self, m: int, n: int) -> Optional[int]:
        s = self.sequence
        if s is None:
            return None
        if m < -1:
            return 0
        r0, a0 = self.ra
        if m == 0:
            return s.get(n)
        if m == -1:
            return a0 * pow(r0, n, self.p) % self.p
        if trivially_zero(s, m, n):
            return 0
        return None

    def element(self, m: int, n: int) -> FpElement:
        value = self.get(m, n)
        if value is None:
            raise RegionError(f"Cell [{m},{n}] is Undefined")
        return FpElement(value, self.prime)

    def row(self, m: int) -> np.ndarray:
        return self.values[m - self.row_lo]

    def known_mask(self) -> np.ndarray:
        return self.values >= 0

    def cells(self) -> Iterator[Tuple[int, int, Optional[int]]]:
        """Row-major iteration over stored cells."""
        for i in range(self.values.shape[0]):
            for j in range(self.values.shape[1]):
                v = self.values[i, j]
                yield self.row_lo + i, self.col_lo + j, (None if v < 0 else int(v))

    def frame(self, record: WindowRecord, name: str) -> List[Optional[int]]:
        return [self.get(m, n) for m, n in record.frame_cells(name)]

    def block(self, rows: Tuple[int, int], cols: Tuple[int, int]) -> np.ndarray:
        """Values on [rows) x [cols), reading outside cells through `get`."""
        r0, r1 = rows
        c0, c1 = cols
        out = np.full((r1 - r0, c1 - c0), UNDEFINED, dtype=self.prime.dtype)
        for m in range(r0, r1):
            for n in range(c0, c1):
                v = self.get(m, n)
                if v is not None:
                    out[m - r0, n - c0] = v
        return out

    def describe(self) -> str:
        label = self.sequence.describe() if self.sequence is not None else self.origin
        return (
            f"wall of {label} rows [{self.row_lo},{self.row_hi}) "
            f"cols [{self.col_lo},{self.col_hi}) ra={self.ra}"
        )

    # -- binary dump ---------------------------------------------------------

    def to_bytes(self) -> bytes:
        """Versioned header, then row-major residues; all-ones marks Undefined."""
        width = cell_width(self.p)
        dtype = np.dtype(f"<u{width}")
        body = np.where(self.values < 0, np.iinfo(dtype).max, self.values).astype(dtype)
        header = _HEADER.pack(
            MAGIC,
            FORMAT_VERSION,
            self.p,
            self.ra[0],
            self.ra[1],
            self.row_lo,
            self.col_lo,
            self.values.shape[0],
            self.values.shape[1],
            width,
        )
        return header + body.tobytes()

    @classmethod
    def from_bytes(cls, data: bytes) -> "Wall":
        if len(data) < _HEADER.size:
            raise WallFormatError("Truncated wall header")
        magic, version, p, r0, a0, row_lo, col_lo, rows, cols, width = _HEADER.unpack_from(data)
        if magic != MAGIC:
            raise WallFormatError(f"Bad magic {magic!r}")
        if version != FORMAT_VERSION:
            raise WallFormatError(f"Unsupported wall format version {version}")
        if width not in (1, 2, 4, 8):
            raise WallFormatError(f"Bad cell width {width}")
        prime = Prime(p)
        dtype = np.dtype(f"<u{width}")
        expected = rows * cols * width
        body = data[_HEADER.size :]
        if len(body) != expected:
            raise WallFormatError(f"Body holds {len(body)} bytes, expected {expected}")
        raw = np.frombuffer(body, dtype=dtype).reshape(rows, cols)
        values = raw.astype(prime.dtype)
        values[raw == np.iinfo(dtype).max] = UNDEFINED
        return cls(prime, row_lo, col_lo, values, ra=(r0, a0), origin="dump")

    def dump(self, path: Path) -> None:
        Path(path).write_bytes(self.to_bytes())

    @classmethod
    def load(cls, path: Path) -> "Wall":
        try:
            data = Path(path).read_bytes()
        except OSError as e:
            raise WallFormatError(f"Cannot read wall dump {path}: {e}") from e
        return cls.from_bytes(data)


def cell_width(p: int) -> int:
    """Smallest byte width whose all-ones pattern exceeds every residue."""
    for width in (1, 2, 4, 8):
        if p - 1 < (1 << (8 * width)) - 1:
            return width
    raise WallFormatError(f"p = {p} does not fit the dump format")


class ProfileSymbol(str, Enum):
    ZERO = "0"
    X = "X"
    UNDEFINED = "."


_SYMBOLS = (ProfileSymbol.ZERO, ProfileSymbol.X, ProfileSymbol.UNDEFINED)
_CODES = {sym.value: code for code, sym in enumerate(_SYMBOLS)}


@dataclass
class ProfileGrid:
    """Zero / X / Undefined pattern of a wall region (codes 0, 1, 2)."""

    ZERO = 0
    X = 1
    UNDEFINED = 2

    row_lo: int
    col_lo: int
    cells: np.ndarray

    @property
    def shape(self) -> Tuple[int, int]:
        return self.cells.shape

    def get(self, m: int, n: int) -> ProfileSymbol:
        i, j = m - self.row_lo, n - self.col_lo
        if not (0 <= i < self.cells.shape[0] and 0 <= j < self.cells.shape[1]):
            return ProfileSymbol.UNDEFINED
        return _SYMBOLS[int(self.cells[i, j])]

    def region(self, rows: Tuple[int, int], cols: Tuple[int, int]) -> "ProfileGrid":
        r0, r1 = rows
        c0, c1 = cols
        if r0 < self.row_lo or c0 < self.col_lo or r1 > self.row_lo + self.shape[0] or (
            c1 > self.col_lo + self.shape[1]
        ):
            raise RegionError(f"Region rows [{r0},{r1}) cols [{c0},{c1}) outside profile")
        i0, j0 = r0 - self.row_lo, c0 - self.col_lo
        cells = self.cells[i0 : i0 + r1 - r0, j0 : j0 + c1 - c0].copy()
        return ProfileGrid(r0, c0, cells)

    def count(self, symbol: ProfileSymbol = ProfileSymbol.X) -> int:
        return int(np.count_nonzero(self.cells == _CODES[symbol.value]))

    def same_cells(self, other: "ProfileGrid") -> bool:
        return self.cells.shape == other.cells.shape and bool(np.array_equal(self.cells, other.cells))

    def mismatches(self, other: "ProfileGrid") -> List[Tuple[int, int, str, str]]:
        """(m, n, expected, actual) in self's coordinates where the symbols differ."""
        if self.cells.shape != other.cells.shape:
            raise RegionError(f"Shape {self.cells.shape} vs {other.cells.shape}")
        out = []
        for i, j in np.argwhere(self.cells != other.cells):
            out.append(
                (
                    self.row_lo + int(i),
                    self.col_lo + int(j),
                    _SYMBOLS[int(self.cells[i, j])].value,
                    _SYMBOLS[int(other.cells[i, j])].value,
                )
            )
        return out

    def to_text(self, header: bool = True) -> str:
        lines = [f"# row_lo={self.row_lo} col_lo={self.col_lo}"] if header else []
        lookup = np.array([sym.value for sym in _SYMBOLS])
        for row in self.cells:
            lines.append("".join(lookup[row]))
        return "\n".join(lines) + "\n"

    @classmethod
    def from_text(cls, text: str, row_lo: int = 0, col_lo: int = 0) -> "ProfileGrid":
        rows: List[List[int]] = []
        for line in text.splitlines():
            line = line.strip()
            if not line:
                continue
            if line.startswith("#"):
                fields = dict(tok.split("=", 1) for tok in line[1:].split() if "=" in tok)
                row_lo = int(fields.get("row_lo", row_lo))
                col_lo = int(fields.get("col_lo", col_lo))
                continue
            try:
                rows.append([_CODES[ch] for ch in line])
            except KeyError as e:
                raise WallFormatError(f"Unknown profile symbol {e}") from None
        if rows and len({len(r) for r in rows}) != 1:
            raise WallFormatError("Profile rows have different lengths")
        cells = np.array(rows, dtype=np.uint8).reshape(len(rows), len(rows[0]) if rows else 0)
        return cls(row_lo, col_lo, cells)
