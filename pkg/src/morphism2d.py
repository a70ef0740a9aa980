"""
Two-dimensional uniform morphisms and codings.

Holds the 12-letter alphabet used to describe the profile of the p-Cantor
wall, the [p, p]-morphism Phi_p with its [1, 1]-coding Pi, and the two
simplified morphisms Phi_0,p and Phi_F,p that bound the wall's nonzero set
from below and above. Image tables are built from parity and border
predicates, so one code path serves every odd prime.
"""

from dataclasses import dataclass
from enum import Enum
from typing import Callable, Dict, List, Optional, Sequence, Tuple

import numpy as np

from src.exceptions import MorphismError
from src.finite_field import PrimeLike, as_prime
from src.logging_config import configure_module_logging
from src.wall import ProfileGrid

logger = configure_module_logging("morphism2d")


class Letter(str, Enum):
    """The 12-letter alphabet; values are the one-character text codes."""

    A = "A"
    B = "B"
    F = "F"
    ZERO = "0"
    E_N = "N"
    E_E = "E"
    E_S = "S"
    E_W = "W"
    C_NE = "1"
    C_SE = "2"
    C_SW = "3"
    C_NW = "4"


ALPHABET: Tuple[str, ...] = tuple(letter.value for letter in Letter)
UNITS = (Letter.A, Letter.B)
EDGES = (Letter.E_N, Letter.E_E, Letter.E_S, Letter.E_W)
CORNERS = (Letter.C_NE, Letter.C_SE, Letter.C_SW, Letter.C_NW)


@dataclass(frozen=True)
class Grid2D:
    """Rectangular grid of one-character symbols stored as alphabet codes."""

    alphabet: Tuple[str, ...]
    cells: np.ndarray

    @classmethod
    def from_rows(cls, rows: Sequence[str], alphabet: Sequence[str] = ALPHABET) -> "Grid2D":
        alphabet = tuple(alphabet)
        index = {symbol: code for code, symbol in enumerate(alphabet)}
        if not rows or len({len(r) for r in rows}) != 1:
            raise MorphismError("Grid rows must be non-empty and of equal length")
        try:
            cells = np.array([[index[ch] for ch in row] for row in rows], dtype=np.uint8)
        except KeyError as e:
            raise MorphismError(f"Symbol {e} is not in the alphabet {alphabet}") from None
        return cls(alphabet, cells)

    @classmethod
    def single(cls, symbol: str, alphabet: Sequence[str] = ALPHABET) -> "Grid2D":
        return cls.from_rows([symbol], alphabet)

    @property
    def shape(self) -> Tuple[int, int]:
        return self.cells.shape

    def get(self, m: int, n: int) -> str:
        return self.alphabet[int(self.cells[m, n])]

    def rows(self) -> List[str]:
        lookup = np.array(self.alphabet)
        return ["".join(lookup[row]) for row in self.cells]

    def count(self, symbol: str) -> int:
        return int(np.count_nonzero(self.cells == self.alphabet.index(symbol)))

    def nonzero_mask(self, zero: str = Letter.ZERO.value) -> np.ndarray:
        if zero not in self.alphabet:
            return np.ones(self.cells.shape, dtype=bool)
        return self.cells != self.alphabet.index(zero)

    def block(self, rows: Tuple[int, int], cols: Tuple[int, int]) -> "Grid2D":
        return Grid2D(self.alphabet, self.cells[rows[0] : rows[1], cols[0] : cols[1]].copy())

    def __eq__(self, other):
        if not isinstance(other, Grid2D):
            return NotImplemented
        return self.rows() == other.rows()

    def __hash__(self):
        return hash(tuple(self.rows()))

    def to_text(self) -> str:
        return "\n".join(self.rows()) + "\n"

    @classmethod
    def from_text(cls, text: str, alphabet: Sequence[str] = ALPHABET) -> "Grid2D":
        return cls.from_rows([line.strip() for line in text.splitlines() if line.strip()], alphabet)


class Morphism2D:
    """
    Uniform [k, l]-morphism (or coding) between one-character alphabets.

    Every source symbol maps to a k x l block over the target alphabet. When
    source and target alphabets coincide the map can be iterated.
    """

    def __init__(
        self,
        images: Dict[str, Sequence[str]],
        source: Sequence[str],
        target: Optional[Sequence[str]] = None,
        name: str = "",
    ):
        self.source = tuple(source)
        self.target = tuple(target) if target is not None else self.source
        self.name = name
        missing = [symbol for symbol in self.source if symbol not in images]
        if missing:
            raise MorphismError(f"No image for {missing}")
        blocks = [Grid2D.from_rows(list(images[symbol]), self.target).cells for symbol in self.source]
        shapes = {b.shape for b in blocks}
        if len(shapes) != 1:
            raise MorphismError(f"Images are not uniform: {sorted(shapes)}")
        self.k, self.l = shapes.pop()
        self.table = np.stack(blocks)

    @property
    def is_endomorphism(self) -> bool:
        return self.source == self.target

    def image(self, symbol: str) -> Grid2D:
        try:
            return Grid2D(self.target, self.table[self.source.index(symbol)].copy())
        except ValueError:
            raise MorphismError(f"Symbol {symbol!r} is not in the source alphabet") from None

    def apply(self, grid: Grid2D) -> Grid2D:
        """Replace every cell by its k x l image block."""
        if grid.alphabet != self.source:
            raise MorphismError(f"{self.name or 'morphism'} cannot read alphabet {grid.alphabet}")
        rows, cols = grid.shape
        blocks = self.table[grid.cells]  # (rows, cols, k, l)
        cells = blocks.transpose(0, 2, 1, 3).reshape(rows * self.k, cols * self.l)
        return Grid2D(self.target, cells)

    def __repr__(self):
        return f"Morphism2D({self.name or '?'}, [{self.k},{self.l}])"


def expand2d(m: Morphism2D, seed: str, iters: int) -> Grid2D:
    """
    m^iters(seed), a k^iters x l^iters grid.

    Raises:
        MorphismError: If m is not an endomorphism or seed is not prolongable
    """
    if not m.is_endomorphism:
        raise MorphismError(f"{m!r} maps between different alphabets and cannot be iterated")
    if iters < 0:
        raise MorphismError(f"Negative iteration count {iters}")
    seed = getattr(seed, "value", seed)
    if m.image(seed).get(0, 0) != seed:
        raise MorphismError(f"Seed {seed!r} is not prolongable under {m!r}")
    grid = Grid2D.single(seed, m.source)
    for _ in range(iters):
        grid = m.apply(grid)
    logger.debug(f"Expanded {m!r} from {seed!r} to {grid.shape}")
    return grid


def _table(p: int, rule: Callable[[int, int], Letter]) -> List[str]:
    return ["".join(rule(m, n).value for n in range(p)) for m in range(p)]


def _frame_rule(p: int) -> Callable[[int, int], Letter]:
    last = p - 1

    def rule(m: int, n: int) -> Letter:
        if m == 0:
            return Letter.C_NW if n == 0 else Letter.C_NE if n == last else Letter.E_N
        if m == last:
            return Letter.C_SW if n == 0 else Letter.C_SE if n == last else Letter.E_S
        if n == 0:
            return Letter.E_W
        if n == last:
            return Letter.E_E
        return Letter.ZERO

    return rule


def _border_images(p: int) -> Dict[str, List[str]]:
    """Images of F, 0, the edges and the corners (shared by Phi_p and Phi_F,p)."""
    last = p - 1
    Z = Letter.ZERO

    def edge(letter: Letter, on: Callable[[int, int], bool]):
        return lambda m, n: letter if on(m, n) else Z

    def corner(letter: Letter, row: int, col: int, row_edge: Letter, col_edge: Letter):
        def rule(m: int, n: int) -> Letter:
            if m == row and n == col:
                return letter
            if m == row:
                return row_edge
            if n == col:
                return col_edge
            return Z

        return rule

    rules = {
        Letter.F: _frame_rule(p),
        Letter.ZERO: lambda m, n: Z,
        Letter.E_N: edge(Letter.E_N, lambda m, n: m == 0),
        Letter.E_E: edge(Letter.E_E, lambda m, n: n == last),
        Letter.E_S: edge(Letter.E_S, lambda m, n: m == last),
        Letter.E_W: edge(Letter.E_W, lambda m, n: n == 0),
        Letter.C_NE: corner(Letter.C_NE, 0, last, Letter.E_N, Letter.E_E),
        Letter.C_SE: corner(Letter.C_SE, last, last, Letter.E_S, Letter.E_E),
        Letter.C_SW: corner(Letter.C_SW, last, 0, Letter.E_S, Letter.E_W),
        Letter.C_NW: corner(Letter.C_NW, 0, 0, Letter.E_N, Letter.E_W),
    }
    return {letter.value: _table(p, rule) for letter, rule in rules.items()}


def _parity_rule(same_even: Letter, even_odd: Letter, odd_even: Letter, same_odd: Letter):
    def rule(m: int, n: int) -> Letter:
        if m % 2 == 0:
            return same_even if n % 2 == 0 else even_odd
        return odd_even if n % 2 == 0 else same_odd

    return rule


def phi_p(p: PrimeLike) -> Morphism2D:
    """The [p, p]-morphism Phi_p on the 12-letter alphabet."""
    q = as_prime(p).p
    images = _border_images(q)
    images[Letter.A.value] = _table(q, _parity_rule(Letter.A, Letter.ZERO, Letter.F, Letter.B))
    images[Letter.B.value] = _table(q, _parity_rule(Letter.B, Letter.F, Letter.ZERO, Letter.A))
    return Morphism2D(images, ALPHABET, name=f"Phi_{q}")


def pi_coding(grid: Grid2D) -> ProfileGrid:
    """The [1, 1]-coding Pi: letter 0 becomes Zero, every other letter X."""
    cells = np.where(grid.nonzero_mask(), ProfileGrid.X, ProfileGrid.ZERO).astype(np.uint8)
    return ProfileGrid(0, 0, cells)


def pi_morphism() -> Morphism2D:
    """Pi as an explicit coding from the 12-letter alphabet to {0, X}."""
    images = {symbol: ["0" if symbol == Letter.ZERO.value else "X"] for symbol in ALPHABET}
    return Morphism2D(images, ALPHABET, ("0", "X"), name="Pi")


def phi_zero(p: PrimeLike) -> Morphism2D:
    """Phi_0,p over {0, A}: A on cells with m = n mod 2, else 0."""
    q = as_prime(p).p
    alphabet = (Letter.ZERO.value, Letter.A.value)
    images = {
        Letter.A.value: _table(q, _parity_rule(Letter.A, Letter.ZERO, Letter.ZERO, Letter.A)),
        Letter.ZERO.value: _table(q, lambda m, n: Letter.ZERO),
    }
    return Morphism2D(images, alphabet, name=f"Phi_0,{q}")


def phi_frame(p: PrimeLike) -> Morphism2D:
    """Phi_F,p over the alphabet without B: A on cells with m = n mod 2, else F."""
    q = as_prime(p).p
    alphabet = tuple(symbol for symbol in ALPHABET if symbol != Letter.B.value)
    images = _border_images(q)
    images[Letter.A.value] = _table(q, _parity_rule(Letter.A, Letter.F, Letter.F, Letter.A))
    return Morphism2D(images, alphabet, name=f"Phi_F,{q}")


def phi_variants(p: PrimeLike) -> Tuple[Morphism2D, Morphism2D]:
    """(Phi_0,p, Phi_F,p)."""
    return phi_zero(p), phi_frame(p)


def nonzero_count(grid: Grid2D) -> int:
    """Cells holding any letter other than 0."""
    return int(np.count_nonzero(grid.nonzero_mask()))


def thue_morse_2d() -> Morphism2D:
    """[2, 2]-morphism 0 -> [[0, 1], [1, 0]], 1 -> [[1, 0], [0, 1]]."""
    return Morphism2D({"0": ["01", "10"], "1": ["10", "01"]}, ("0", "1"), name="thue_morse")


def thue_morse_coding() -> Morphism2D:
    """[1, 2]-coding 0 -> [a a], 1 -> [b b]."""
    return Morphism2D({"0": ["aa"], "1": ["bb"]}, ("0", "1"), ("a", "b"), name="tm_coding")
