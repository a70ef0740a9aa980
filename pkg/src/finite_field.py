"""
Exact arithmetic in F_p for odd primes p.

`Prime` validates the modulus and carries the vectorised helpers the wall
engine needs (inverse tables, overflow-safe dot products). `FpElement` is the
immutable scalar type; mixing moduli raises `FieldError`. `binomial` is the
generalized choose function that returns 0 whenever either argument is not a
natural number or b > a.
"""

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Union

import numpy as np

from src.exceptions import FieldError, ZeroInversionError

# Largest prime for which residues are stored as int64 (products fit in 63 bits).
INT64_PRIME_LIMIT = 1 << 31
# Largest prime for which a dense inverse table is built.
INVERSE_TABLE_LIMIT = 1 << 20

_MR_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)


def is_prime(n: int) -> bool:
    """Deterministic Miller-Rabin, exact for n < 3.3e24."""
    if n < 2:
        return False
    for q in _MR_BASES:
        if n % q == 0:
            return n == q
    d, r = n - 1, 0
    while d % 2 == 0:
        d //= 2
        r += 1
    for a in _MR_BASES:
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(r - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def _egcd_inverse(a: int, p: int) -> int:
    r0, r1 = p, a % p
    if r1 == 0:
        raise ZeroInversionError(f"0 has no inverse modulo {p}")
    t0, t1 = 0, 1
    while r1:
        q = r0 // r1
        r0, r1 = r1, r0 - q * r1
        t0, t1 = t1, t0 - q * t1
    return t0 % p


@lru_cache(maxsize=16)
def _inverse_table(p: int) -> np.ndarray:
    """inv[x] = x^(p-2) mod p by vectorised square-and-multiply; inv[0] = 0."""
    base = np.arange(p, dtype=np.int64)
    result = np.ones(p, dtype=np.int64)
    e = p - 2
    while e:
        if e & 1:
            result = result * base % p
        base = base * base % p
        e >>= 1
    result[0] = 0
    result.setflags(write=False)
    return result


@dataclass(frozen=True)
class Prime:
    """An odd prime modulus."""

    p: int

    def __post_init__(self):
        if isinstance(self.p, bool) or not isinstance(self.p, int):
            raise FieldError(f"Modulus must be an integer, got {self.p!r}")
        if self.p == 2:
            raise FieldError("p = 2 is not supported; the constructions need an odd prime")
        if not is_prime(self.p):
            raise FieldError(f"{self.p} is not prime")

    @property
    def p2(self) -> int:
        """(p - 1) / 2."""
        return (self.p - 1) // 2

    @property
    def dtype(self):
        return np.int64 if self.p < INT64_PRIME_LIMIT else object

    def __call__(self, value: Union[int, "FpElement"]) -> "FpElement":
        return self.element(value)

    def element(self, value: Union[int, "FpElement"]) -> "FpElement":
        if isinstance(value, FpElement):
            if value.modulus != self:
                raise FieldError(f"Element of F_{value.modulus.p} used in F_{self.p}")
            return value
        return FpElement(int(value), self)

    def inv(self, a: int) -> int:
        """Inverse of a residue via extended Euclid."""
        return _egcd_inverse(int(a), self.p)

    def sign(self, exponent: int) -> int:
        """(-1)^exponent as a residue."""
        return 1 if exponent % 2 == 0 else self.p - 1

    def inv_array(self, values: np.ndarray) -> np.ndarray:
        """Elementwise inverse of an array of non-zero residues."""
        values = np.asarray(values)
        if values.size and not np.all(values % self.p != 0):
            raise ZeroInversionError(f"Array contains 0; cannot invert modulo {self.p}")
        if self.p < INVERSE_TABLE_LIMIT:
            return _inverse_table(self.p)[values.astype(np.int64)]
        out = np.array([self.inv(int(v)) for v in values.ravel()], dtype=self.dtype)
        return out.reshape(values.shape)

    def dot(self, x: np.ndarray, y: np.ndarray) -> int:
        """Sum of x_i * y_i mod p without int64 overflow."""
        x = np.asarray(x)
        y = np.asarray(y)
        if x.size == 0:
            return 0
        if self.dtype is np.int64 and (self.p - 1) ** 2 * x.size < (1 << 63):
            return int(np.dot(x.astype(np.int64), y.astype(np.int64)) % self.p)
        return sum(int(a) * int(b) for a, b in zip(x.tolist(), y.tolist())) % self.p

    def __str__(self):
        return f"F_{self.p}"


PrimeLike = Union[int, Prime]


def as_prime(p: PrimeLike) -> Prime:
    """Accept either an int or a Prime."""
    return p if isinstance(p, Prime) else Prime(int(p))


class FpElement:
    """Immutable residue modulo an odd prime."""

    __slots__ = ("value", "modulus")

    def __init__(self, value: int, modulus: Prime):
        object.__setattr__(self, "modulus", modulus)
        object.__setattr__(self, "value", int(value) % modulus.p)

    def __setattr__(self, name, value):
        raise AttributeError("FpElement is immutable")

    def _coerce(self, other) -> "FpElement":
        if isinstance(other, FpElement):
            if other.modulus != self.modulus:
                raise FieldError(
                    f"Cannot mix F_{self.modulus.p} and F_{other.modulus.p}"
                )
            return other
        if isinstance(other, int) and not isinstance(other, bool):
            return FpElement(other, self.modulus)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return FpElement(self.value + other.value, self.modulus)

    __radd__ = __add__

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return FpElement(self.value - other.value, self.modulus)

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return FpElement(other.value - self.value, self.modulus)

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return FpElement(self.value * other.value, self.modulus)

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self * other.inv()

    def __rtruediv__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return other * self.inv()

    def __neg__(self):
        return FpElement(-self.value, self.modulus)

    def __pow__(self, exponent: int):
        if exponent < 0:
            return self.inv() ** (-exponent)
        return FpElement(pow(self.value, exponent, self.modulus.p), self.modulus)

    def inv(self) -> "FpElement":
        return FpElement(_egcd_inverse(self.value, self.modulus.p), self.modulus)

    def __int__(self):
        return self.value

    def __index__(self):
        return self.value

    def __bool__(self):
        return self.value != 0

    def __eq__(self, other):
        if isinstance(other, FpElement):
            return self.modulus == other.modulus and self.value == other.value
        if isinstance(other, int) and not isinstance(other, bool):
            return self.value == other % self.modulus.p
        return NotImplemented

    def __hash__(self):
        return hash(self.value)

    def __repr__(self):
        return f"FpElement({self.value}, p={self.modulus.p})"

    def __str__(self):
        return str(self.value)


Rational = Union[int, Fraction]


def binomial(a: Rational, b: Rational, p: PrimeLike) -> FpElement:
    """
    Generalized binomial coefficient reduced mod p.

    Returns a!/(b!(a-b)!) mod p when a and b are natural numbers with a >= b,
    and 0 otherwise (in particular for half-integer arguments).

    Example:
        binomial(Fraction(3, 2), 1, 7)  # -> 0
        binomial(6, 3, 7)               # -> 6
    """
    prime = as_prime(p)
    return FpElement(binom_residue(a, b, prime.p), prime)


def binom_residue(a: Rational, b: Rational, p: int) -> int:
    """Plain-int form of `binomial` used on hot paths."""
    fa, fb = Fraction(a), Fraction(b)
    if fa.denominator != 1 or fb.denominator != 1:
        return 0
    ia, ib = fa.numerator, fb.numerator
    if ia < 0 or ib < 0 or ib > ia:
        return 0
    return math.comb(ia, ib) % p
