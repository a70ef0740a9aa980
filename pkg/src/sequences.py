"""
One-dimensional automatic sequences over F_p.

Covers uniform morphisms and codings with their fixed points, the p-Cantor
and p-Singer families, sequence surgery (concatenation, reversal, zero
padding, left zero extension), geometric transforms, and truncated
Laurent-series arithmetic in t^-1.
"""

from dataclasses import dataclass, field, replace
from enum import Enum
from fractions import Fraction
from functools import cached_property
from typing import Any, Dict, Hashable, List, Optional, Sequence, Tuple, Union

import numpy as np

from src.exceptions import NotProlongableError, SequenceError
from src.finite_field import FpElement, Prime, PrimeLike, as_prime, binom_residue
from src.logging_config import configure_module_logging

logger = configure_module_logging("sequences")

Letter = Hashable
Scalar = Union[int, FpElement]


class Extension(str, Enum):
    """What a sequence holds outside its stored index window."""

    ZERO = "zero"
    UNDEFINED = "undefined"


@dataclass(frozen=True)
class Seq:
    """
    A sequence over F_p stored on the index window [lo, hi).

    Outside the window each side is either identically zero (S^L, padded
    sequences) or undefined (finite words, prefix-known sequences).
    """

    prime: Prime
    lo: int
    values: Tuple[int, ...]
    left: Extension = Extension.UNDEFINED
    right: Extension = Extension.UNDEFINED
    name: str = field(default="", compare=False)

    def __post_init__(self):
        p = self.prime.p
        object.__setattr__(self, "values", tuple(int(v) % p for v in self.values))
        object.__setattr__(self, "left", Extension(self.left))
        object.__setattr__(self, "right", Extension(self.right))

    @property
    def hi(self) -> int:
        return self.lo + len(self.values)

    @property
    def p(self) -> int:
        return self.prime.p

    @property
    def is_finite(self) -> bool:
        return self.left is Extension.UNDEFINED and self.right is Extension.UNDEFINED

    def __len__(self) -> int:
        return len(self.values)

    def get(self, i: int) -> Optional[int]:
        """Residue at index i, or None where the sequence is undefined."""
        if self.lo <= i < self.hi:
            return self.values[i - self.lo]
        side = self.left if i < self.lo else self.right
        return 0 if side is Extension.ZERO else None

    def __getitem__(self, i: int) -> Optional[int]:
        return self.get(i)

    def element(self, i: int) -> FpElement:
        value = self.get(i)
        if value is None:
            raise SequenceError(f"Index {i} is undefined for {self.describe()}")
        return FpElement(value, self.prime)

    def is_defined(self, i: int) -> bool:
        return self.get(i) is not None

    def defined_bounds(self) -> Tuple[Optional[int], Optional[int]]:
        """Half-open bounds of the defined indices; None means unbounded."""
        lo = None if self.left is Extension.ZERO else self.lo
        hi = None if self.right is Extension.ZERO else self.hi
        return lo, hi

    def window(self, start: int, stop: int) -> List[Optional[int]]:
        return [self.get(i) for i in range(start, stop)]

    @cached_property
    def _nonzero_prefix(self) -> np.ndarray:
        nz = np.array([v != 0 for v in self.values], dtype=np.int64)
        return np.concatenate(([0], np.cumsum(nz)))

    def is_zero_on(self, start: int, stop: int) -> bool:
        """True iff every index in [start, stop) is defined and zero."""
        if start >= stop:
            return True
        if start < self.lo and self.left is Extension.UNDEFINED:
            return False
        if stop > self.hi and self.right is Extension.UNDEFINED:
            return False
        a = max(start, self.lo) - self.lo
        b = min(stop, self.hi) - self.lo
        if a >= b:
            return True
        return int(self._nonzero_prefix[b] - self._nonzero_prefix[a]) == 0

    def zero_span_mask(self, starts: np.ndarray, stops: np.ndarray) -> np.ndarray:
        """Vectorised `is_zero_on` over paired arrays of half-open spans."""
        starts = np.asarray(starts, dtype=np.int64)
        stops = np.asarray(stops, dtype=np.int64)
        ok = np.ones(starts.shape, dtype=bool)
        if self.left is Extension.UNDEFINED:
            ok &= starts >= self.lo
        if self.right is Extension.UNDEFINED:
            ok &= stops <= self.hi
        a = np.clip(starts, self.lo, self.hi) - self.lo
        b = np.clip(stops, self.lo, self.hi) - self.lo
        counts = np.where(b > a, self._nonzero_prefix[b] - self._nonzero_prefix[a], 0)
        return ok & (counts == 0)

    def first_nonzero(self) -> Optional[int]:
        for offset, v in enumerate(self.values):
            if v:
                return self.lo + offset
        return None

    def describe(self) -> str:
        label = self.name or "seq"
        return f"{label}[p={self.p}, lo={self.lo}, len={len(self)}]"

    def named(self, name: str) -> "Seq":
        return replace(self, name=name)

    def to_text(self) -> str:
        """Plain-text format: a `p=<p> lo=<lo>` header and one line of residues."""
        header = f"p={self.p} lo={self.lo}"
        if not self.is_finite:
            header += f" left={self.left.value} right={self.right.value}"
        return header + "\n" + " ".join(str(v) for v in self.values) + "\n"

    @classmethod
    def from_text(cls, text: str) -> "Seq":
        lines = [line.strip() for line in text.strip().splitlines()]
        if not lines or not lines[0]:
            raise SequenceError("Empty sequence text")
        try:
            fields = dict(token.split("=", 1) for token in lines[0].split())
            prime = Prime(int(fields["p"]))
            lo = int(fields["lo"])
            left = Extension(fields.get("left", Extension.UNDEFINED.value))
            right = Extension(fields.get("right", Extension.UNDEFINED.value))
            values = [int(tok) for tok in " ".join(lines[1:]).split()]
        except (KeyError, ValueError) as e:
            raise SequenceError(f"Malformed sequence header or body: {e}") from e
        if any(v < 0 or v >= prime.p for v in values):
            raise SequenceError(f"Residues must lie in [0, {prime.p})")
        return cls(prime, lo, tuple(values), left, right)


def make_seq(p: PrimeLike, values: Sequence[Scalar], lo: int = 0, name: str = "") -> Seq:
    """Finite sequence on [lo, lo + len(values))."""
    return Seq(as_prime(p), lo, tuple(int(v) for v in values), name=name)


# ---------------------------------------------------------------------------
# Uniform morphisms and codings
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class _UniformMap:
    images: Dict[Any, Tuple[Any, ...]]

    def __post_init__(self):
        if not self.images:
            raise SequenceError("A uniform map needs at least one image")
        images = {letter: tuple(word) for letter, word in self.images.items()}
        lengths = {len(word) for word in images.values()}
        if len(lengths) != 1 or 0 in lengths:
            raise SequenceError(f"Images are not of one positive length: {sorted(lengths)}")
        object.__setattr__(self, "images", images)

    @property
    def width(self) -> int:
        return len(next(iter(self.images.values())))

    def image(self, letter: Letter) -> Tuple[Any, ...]:
        try:
            return self.images[letter]
        except KeyError:
            raise SequenceError(f"Letter {letter!r} has no image") from None

    def apply(self, word: Sequence[Letter]) -> List[Any]:
        out: List[Any] = []
        for letter in word:
            out.extend(self.image(letter))
        return out


class Morphism1D(_UniformMap):
    """Uniform k-morphism: every letter maps to a word of length k."""

    @property
    def k(self) -> int:
        return self.width


class Coding1D(_UniformMap):
    """Uniform d-coding into another alphabet."""

    @property
    def d(self) -> int:
        return self.width


def fixed_point(m: Morphism1D, seed: Letter, length: int) -> Tuple[Any, ...]:
    """
    First `length` letters of lim m^n(seed).

    Raises:
        NotProlongableError: If m(seed) does not start with seed

    Example:
        tm = Morphism1D({0: (0, 1), 1: (1, 0)})
        fixed_point(tm, 0, 8)  # -> (0, 1, 1, 0, 1, 0, 0, 1)
    """
    if m.image(seed)[0] != seed:
        raise NotProlongableError(f"Seed {seed!r} is not prolongable: image {m.image(seed)}")
    if length <= 0:
        return ()
    if m.k == 1 and length > 1:
        raise SequenceError("The fixed point of a 1-morphism has a single letter")
    word: List[Any] = [seed]
    while len(word) < length:
        word = m.apply(word)
    return tuple(word[:length])


def cantor_morphism(p: PrimeLike) -> Morphism1D:
    """phi_p(n)_i = n * binom(p_2, i/2)."""
    prime = as_prime(p)
    row = [binom_residue(prime.p2, Fraction(i, 2), prime.p) for i in range(prime.p)]
    return Morphism1D({n: tuple(n * c % prime.p for c in row) for n in range(prime.p)})


def pseudo_singer_morphism(p: PrimeLike) -> Morphism1D:
    """phi'_p(n)_i = n * binom(p_2, i)."""
    prime = as_prime(p)
    row = [binom_residue(prime.p2, i, prime.p) for i in range(prime.p)]
    return Morphism1D({n: tuple(n * c % prime.p for c in row) for n in range(prime.p)})


def singer_coding(p: PrimeLike) -> Coding1D:
    """tau_p(n)_i = n * binom(p_2 + 1, i/2), 0 <= i < 2p."""
    prime = as_prime(p)
    row = [binom_residue(prime.p2 + 1, Fraction(i, 2), prime.p) for i in range(2 * prime.p)]
    return Coding1D({n: tuple(n * c % prime.p for c in row) for n in range(prime.p)})


def cantor(p: PrimeLike, length: int) -> Seq:
    """Prefix of the p-Cantor sequence C^(p)."""
    prime = as_prime(p)
    values = fixed_point(cantor_morphism(prime), 1, length)
    return Seq(prime, 0, values, name=f"cantor(p={prime.p})")


def pseudo_singer(p: PrimeLike, length: int) -> Seq:
    """Prefix of the pseudo-p-Singer sequence, the fixed point of phi'_p from 1."""
    prime = as_prime(p)
    values = fixed_point(pseudo_singer_morphism(prime), 1, length)
    return Seq(prime, 0, values, name=f"pseudo_singer(p={prime.p})")


def singer(p: PrimeLike, length: int) -> Seq:
    """Prefix of the p-Singer sequence tau_p(pseudo-Singer)."""
    prime = as_prime(p)
    coding = singer_coding(prime)
    letters = -(-length // coding.d)
    word = fixed_point(pseudo_singer_morphism(prime), 1, letters)
    values = coding.apply(word)[:length]
    return Seq(prime, 0, tuple(values), name=f"singer(p={prime.p})")


def cantor_block(p: PrimeLike, h: int) -> Seq:
    """C_h: the first p^h entries of the p-Cantor sequence."""
    prime = as_prime(p)
    return cantor(prime, prime.p**h).named(f"C_{h}(p={prime.p})")


def singer_block(p: PrimeLike, h: int) -> Seq:
    """S_h: the first p^h + 2 entries of the p-Singer sequence."""
    prime = as_prime(p)
    return singer(prime, prime.p**h + 2).named(f"S_{h}(p={prime.p})")


def cantor_tilde(p: PrimeLike, h: int) -> Seq:
    """{0}_{p^h} + C_h + {0}_{p^h}; the Cantor block sits on [p^h, 2p^h)."""
    prime = as_prime(p)
    block = cantor_block(prime, h)
    return zero_pad_both(block, prime.p**h).named(f"C~_{h}(p={prime.p})")


def singer_tilde(p: PrimeLike, h: int) -> Seq:
    """{0}_{p^h+2} + S_h + {0}_{p^h+2}."""
    prime = as_prime(p)
    block = singer_block(prime, h)
    return zero_pad_both(block, prime.p**h + 2).named(f"S~_{h}(p={prime.p})")


def cantor_left(p: PrimeLike, length: int) -> Seq:
    """C^(p,L): the p-Cantor prefix, zero at every negative index."""
    prime = as_prime(p)
    return left_zero_extend(cantor(prime, length)).named(f"cantor_L(p={prime.p})")


# ---------------------------------------------------------------------------
# Transforms and surgery
# ---------------------------------------------------------------------------


def geometric_transform(s: Seq, r: Scalar, a: Scalar) -> Seq:
    """S(r, a): entry i multiplied by a * r^i (absolute index i)."""
    p = s.p
    r, a = int(r) % p, int(a) % p
    try:
        factor = pow(r, s.lo, p)
    except ValueError:
        raise SequenceError(f"r = 0 cannot scale negative index {s.lo}") from None
    out = []
    for v in s.values:
        out.append(v * a * factor % p)
        factor = factor * r % p
    return replace(s, values=tuple(out), name=f"{s.name or 'seq'}({r},{a})")


def zeros(n: int, p: PrimeLike, lo: int = 0) -> Seq:
    """{0}_n."""
    if n < 0:
        raise SequenceError(f"Negative length {n}")
    return Seq(as_prime(p), lo, (0,) * n, name=f"0_{n}")


def _require_finite(s: Seq, operation: str):
    if not s.is_finite:
        raise SequenceError(f"{operation} needs a finite sequence, got {s.describe()}")


def concat(*parts: Seq) -> Seq:
    """Concatenation starting at the first part's lower index."""
    if not parts:
        raise SequenceError("Nothing to concatenate")
    prime = parts[0].prime
    values: List[int] = []
    for part in parts:
        _require_finite(part, "concat")
        if part.prime != prime:
            raise SequenceError("Cannot concatenate sequences over different fields")
        values.extend(part.values)
    name = " + ".join(part.name or "seq" for part in parts)
    return Seq(prime, parts[0].lo, tuple(values), name=name)


def reverse_finite(s: Seq) -> Seq:
    """S<->: the same index window read backwards."""
    _require_finite(s, "reverse")
    return replace(s, values=tuple(reversed(s.values)), name=f"rev({s.name or 'seq'})")


def zero_pad_both(s: Seq, amount: int) -> Seq:
    """{0}_amount + S + {0}_amount."""
    return concat(zeros(amount, s.prime), s, zeros(amount, s.prime))


def left_zero_extend(s: Seq) -> Seq:
    """S^L: zero at every index below the stored window."""
    return replace(s, left=Extension.ZERO, name=f"{s.name or 'seq'}^L")


# ---------------------------------------------------------------------------
# Laurent series in t^-1
# ---------------------------------------------------------------------------


def _coefficients(s: Seq, length: int) -> np.ndarray:
    coeffs = s.window(0, length)
    if any(c is None for c in coeffs):
        raise SequenceError(
            f"{s.describe()} is not defined on [0, {length}); extend it or shorten the series"
        )
    return np.array(coeffs, dtype=s.prime.dtype)


def power_series(p: PrimeLike, coefficients: Sequence[Scalar], length: int) -> Seq:
    """Truncated power series with the given leading coefficients and zeros after."""
    prime = as_prime(p)
    values = [int(c) % prime.p for c in coefficients][:length]
    values += [0] * (length - len(values))
    return Seq(prime, 0, tuple(values), left=Extension.ZERO, name="series")


def laurent_inverse(s: Seq, length: int) -> Seq:
    """
    Multiplicative inverse of sum s_i t^-i up to degree length - 1.

    u_0 = 1/s_0 and u_m = -(sum_{j=1}^{m} s_j u_{m-j}) / s_0. The result is a
    power series (zero at negative indices, undefined beyond the prefix).

    Raises:
        SequenceError: If s_0 = 0 or s is undefined inside [0, length)
    """
    prime = s.prime
    a = _coefficients(s, length)
    if length and a[0] == 0:
        raise SequenceError("Leading coefficient s_0 is zero; the series is not invertible")
    u = np.zeros(length, dtype=prime.dtype)
    if length:
        inv0 = prime.inv(int(a[0]))
        u[0] = inv0
        for m in range(1, length):
            acc = prime.dot(a[1 : m + 1], u[m - 1 :: -1][:m])
            u[m] = (-acc * inv0) % prime.p
    logger.debug(f"Inverted {s.describe()} to degree {length - 1}")
    return Seq(prime, 0, tuple(int(v) for v in u), left=Extension.ZERO,
               name=f"inv({s.name or 'seq'})")


def series_product(a: Seq, b: Seq, length: int) -> Seq:
    """Truncated Cauchy product of two power series."""
    if a.prime != b.prime:
        raise SequenceError("Cannot multiply series over different fields")
    prime = a.prime
    x = _coefficients(a, length)
    y = _coefficients(b, length)
    out = [prime.dot(x[: m + 1], y[m::-1]) for m in range(length)]
    return Seq(prime, 0, tuple(out), left=Extension.ZERO, name="product")
