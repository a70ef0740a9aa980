"""
Closed Forms - The base case on W(C~_1) and the coefficient recurrences.

This module provides:
- check_base_case: the four parity classes a, b, c, d of W(C~_1) against
  their closed forms and one-step recurrences
- check_recurrence_forms: the eight (r, a) recurrences iterated over
  t = 1..p-1 against their closed forms

Closed forms are evaluated over the rationals and reduced mod p at the end;
every denominator involved is a product of integers in [1, p-1].
"""

from fractions import Fraction
from math import comb, prod
from typing import Dict, List, Optional

from src.exceptions import EngineConsistencyError, WindowShapeError, ZeroInversionError
from src.finite_field import Prime, PrimeLike, as_prime
from src.sequences import cantor_tilde
from src.verify.models import CheckRecorder, CheckReport
from src.wall_engine import generate_wall


def residue(x: Fraction, prime: Prime) -> int:
    """x mod p for a rational whose denominator is prime to p."""
    x = Fraction(x)
    return x.numerator * prime.inv(x.denominator) % prime.p


def _sign(j: int) -> int:
    return -1 if j % 2 else 1


# ---------------------------------------------------------------------------
# Base case
# ---------------------------------------------------------------------------


def base_a(p2: int, i: int, j: int) -> Fraction:
    root = prod(Fraction(comb(p2 + k, i + k)) for k in range(j))
    root *= prod(Fraction(k, p2 + k - i) ** (j - k) for k in range(1, j))
    return root * root


def base_b(p2: int, i: int, j: int) -> Fraction:
    value = Fraction(_sign(j))
    for k in range(j):
        numerator = comb(p2 + k, i + k + 1) ** 2 * (i + k + 1)
        value *= Fraction(numerator) / Fraction(p2 - i + k) ** (2 * (j - k) - 1)
    for k in range(1, j):
        value *= Fraction(k) ** (2 * (j - k))
    return value


def base_c(p2: int, i: int, j: int) -> Fraction:
    value = Fraction(comb(p2 + j, i + j))
    for k in range(j):
        value *= comb(p2 + k, i + k) ** 2 * Fraction(k + 1, p2 + k - i + 1) ** (2 * (j - k) - 1)
    return value


def check_base_case(p: PrimeLike) -> CheckReport:
    """
    Parity classes of W(C~_1) on rows -1..p-1, columns p..2p-1.

    a_{i,j} = W[2j-1, p+2i], b_{i,j} = W[2j-1, p+2i+1],
    c_{i,j} = W[2j, p+2i],   d_{i,j} = W[2j, p+2i+1].
    """
    prime = as_prime(p)
    q, p2 = prime.p, prime.p2
    rec = CheckRecorder("base_case", {"p": q})
    try:
        w = generate_wall(cantor_tilde(prime, 1), q - 1)
    except (EngineConsistencyError, WindowShapeError) as e:
        rec.fail(f"engine: {e}")
        return rec.report()

    def cell(row: int, col: int) -> Optional[int]:
        return w.get(row, col)

    def a(i, j):
        return cell(2 * j - 1, q + 2 * i)

    def b(i, j):
        if i < 0 or i >= p2:
            return 0
        return cell(2 * j - 1, q + 2 * i + 1)

    def c(i, j):
        return cell(2 * j, q + 2 * i)

    def d(i, j):
        return cell(2 * j, q + 2 * i + 1)

    for j in range(p2 + 1):
        for i in range(p2 + 1):
            row, col = 2 * j - 1, q + 2 * i
            label = f"{{{i},{j}}}"
            rec.equal(residue(base_a(p2, i, j), prime), a(i, j), f"a_{label} closed form", row, col)
            rec.equal(residue(base_c(p2, i, j), prime), c(i, j), f"c_{label} closed form", row + 1, col)
            rec.expect(bool(a(i, j)), f"a_{label} vanishes", row, col, "nonzero", a(i, j))
            rec.expect(bool(c(i, j)), f"c_{label} vanishes", row + 1, col, "nonzero", c(i, j))
            if i < p2:
                rec.equal(residue(base_b(p2, i, j), prime), b(i, j), f"b_{label} closed form", row, col + 1)
                rec.equal(0, d(i, j), f"d_{label} = 0", row + 1, col + 1)
                rec.expect(bool(b(i, j)), f"b_{label} vanishes", row, col + 1, "nonzero", b(i, j))

    # One-step recurrences, read off the engine's own cells.
    inv = prime.inv
    for j in range(1, p2 + 1):
        for i in range(p2 + 1):
            row, col = 2 * j - 1, q + 2 * i
            label = f"{{{i},{j}}}"
            try:
                expected = c(i, j - 1) ** 2 * inv(a(i, j - 1)) % q
                rec.equal(expected, a(i, j), f"a_{label} recurrence", row, col)
                if i < p2:
                    expected = -c(i, j - 1) * c(i + 1, j - 1) * inv(b(i, j - 1)) % q
                    rec.equal(expected, b(i, j), f"b_{label} recurrence", row, col + 1)
                expected = (a(i, j) ** 2 - b(i, j) * b(i - 1, j)) * inv(c(i, j - 1)) % q
                rec.equal(expected, c(i, j), f"c_{label} recurrence", row + 1, col)
            except (TypeError, ZeroInversionError) as e:
                rec.fail(f"recurrence at i={i}, j={j}: {e}", m=i, n=j)
    rec.note("p2", p2)
    return rec.report()


# ---------------------------------------------------------------------------
# Coefficient recurrences
# ---------------------------------------------------------------------------


def closed_r_c(p2: int, i: int, t: int) -> Fraction:
    j = t // 2
    if t % 2 == 0:
        return _sign(j) * prod((Fraction(i + k, p2 - i + k) for k in range(1, j + 1)), start=Fraction(1))
    return _sign(j) * prod((Fraction(p2 - i + k, i + k) for k in range(1, j + 1)), start=Fraction(1))


def closed_a_c(p2: int, i: int, t: int) -> Fraction:
    j = t // 2
    value = Fraction(comb(p2 + j, i + j))
    for k in range(j):
        value *= comb(p2 + k, i + k) ** 2 * Fraction(k + 1, p2 + 1 - i + k) ** (2 * j - 1 - 2 * k)
    return value


def closed_r_s(p2: int, i: int, t: int) -> Fraction:
    j = t // 2
    if t % 2 == 0:
        return _sign(j) * prod((Fraction(p2 - i + k, i + 1 + k) for k in range(j)), start=Fraction(1))
    return _sign(j + 1) * prod((Fraction(i + k + 1, p2 - i + k) for k in range(j + 1)), start=Fraction(1))


def closed_a_s(p2: int, i: int, t: int) -> Fraction:
    j = t // 2
    if t % 2 == 0:
        if j == 0:
            return Fraction(0)
        value = Fraction(1, comb(p2 + j, i + j))
        value *= prod((Fraction(comb(p2 + k, i + k)) for k in range(j)), start=Fraction(1)) ** 2
        for k in range(j - 1):
            value *= Fraction(k + 1, p2 + k - i + 1) ** (2 * j - 3 - 2 * k)
        return value
    value = Fraction(comb(p2 + j, i + j + 1) * (p2 + j + 1), j + 1)
    for k in range(j + 1):
        value *= comb(p2 + k, i + k + 1) ** 2 * Fraction(k + 1, p2 - i + k) ** (2 * j + 1 - 2 * k)
    return value


CLOSED_FORMS = {"r_C": closed_r_c, "a_C": closed_a_c, "r_S": closed_r_s, "a_S": closed_a_s}


class _Vanished(Exception):
    def __init__(self, family: str, i: int, t: int):
        super().__init__(f"division by zero computing {family}_{{{i},{t}}}")
        self.i, self.t = i, t


class _Coefficients:
    """The four families at one value of t, as residue lists indexed by i."""

    def __init__(self, prime: Prime, r_c: List[int], a_c: List[int], r_s: List[int], a_s: List[int]):
        self.prime = prime
        self.r_c, self.a_c, self.r_s, self.a_s = r_c, a_c, r_s, a_s

    def families(self) -> Dict[str, List[int]]:
        return {"r_C": self.r_c, "a_C": self.a_c, "r_S": self.r_s, "a_S": self.a_s}

    def _inv(self, x: int, family: str, i: int, t: int) -> int:
        if x % self.prime.p == 0:
            raise _Vanished(family, i, t)
        return self.prime.inv(x)

    def _rs_inv4_prefix(self, i: int, t: int) -> int:
        q = self.prime.p
        out = 1
        for k in range(i + 1):
            out = out * pow(self._inv(self.r_s[k], "r_S", k, t), 4, q) % q
        return out

    def odd_step(self, t: int) -> "_Coefficients":
        """t = 2j+1 from t - 1 = 2j."""
        q, p2 = self.prime.p, self.prime.p2
        r_c = [self._inv(x, "r_C", i, t) for i, x in enumerate(self.r_c)]
        a_c = list(self.a_c)
        r_s, a_s = [], []
        for i in range(p2):
            r_s.append(-self.a_c[i] * self.r_s[i] * self._inv(self.a_c[i + 1], "r_S", i, t) % q)
            ratio = self.a_c[i] * self.r_s[i] * self._inv(self.a_c[i + 1] * self.r_c[i + 1], "a_S", i, t)
            a_s.append(pow(self.a_c[i + 1], 3, q) * self._rs_inv4_prefix(i, t) * (1 + ratio) % q)
        return _Coefficients(self.prime, r_c, a_c, r_s, a_s)

    def even_step(self, t: int) -> "_Coefficients":
        """
        t = 2j+2 from t - 1 = 2j+1; the i = p2 entries of r_C and a_C are
        seeded from their closed forms.

        a_{S,-1,t-1} is read as a_{C,0,t-2}^3, which equals a_{C,0,t-1}^3.
        """
        prime = self.prime
        q, p2 = prime.p, prime.p2

        def a_s_before(i: int) -> int:
            return pow(self.a_c[0], 3, q) if i < 0 else self.a_s[i]

        r_c, a_c = [], []
        for i in range(p2):
            rs, as_ = self.r_s[i], self.a_s[i]
            denominator = as_ * self.r_c[i] * rs * rs
            r_c.append(-a_s_before(i - 1) * self._inv(denominator, "r_C", i, t) % q)
            inner = a_s_before(i - 1) * self._inv(pow(rs, 3, q) * as_ * self.r_c[i], "a_C", i, t)
            a_c.append(as_ * rs * rs * (1 + inner) % q)
        r_c.append(residue(closed_r_c(p2, p2, t), prime))
        a_c.append(residue(closed_a_c(p2, p2, t), prime))
        r_s = [self._inv(x, "r_S", i, t) for i, x in enumerate(self.r_s)]
        a_s = []
        for i in range(p2):
            a_s.append(self.r_s[i] ** 2 * self._rs_inv4_prefix(i, t) * self._inv(self.a_s[i], "a_S", i, t) % q)
        return _Coefficients(prime, r_c, a_c, r_s, a_s)


def check_recurrence_forms(p: PrimeLike) -> CheckReport:
    """
    Iterate the coefficient recurrences from t = 0 to t = p-1.

    Initial values: r_C = r_S = 1, a_C = binom(p2, i), a_S = 0. At each t
    every family is compared with its closed form, every value is required
    to be nonzero, and at t = 1, 2 the products of r_S^{+-2} are compared
    with binom(p2, i)^2.
    """
    prime = as_prime(p)
    q, p2 = prime.p, prime.p2
    rec = CheckRecorder("recurrences", {"p": q})
    state = _Coefficients(
        prime,
        [1] * (p2 + 1),
        [comb(p2, i) % q for i in range(p2 + 1)],
        [1] * p2,
        [0] * p2,
    )
    for t in range(1, q):
        try:
            if t % 2:
                state = state.odd_step(t)
            else:
                state = state.even_step(t)
        except _Vanished as e:
            rec.fail(str(e), m=e.i, n=t)
            break

        for family, values in state.families().items():
            closed = CLOSED_FORMS[family]
            for i, actual in enumerate(values):
                rec.equal(residue(closed(p2, i, t), prime), actual, f"{family} closed form at t={t}", i, t)
                rec.expect(actual % q != 0, f"{family}_{{{i},{t}}} vanishes", i, t, "nonzero", actual)

        if t in (1, 2):
            exponent = 2 if t % 2 == 0 else -2
            for i in range(p2 + 1):
                product = 1
                for k in range(i):
                    product = product * pow(state.r_s[k], exponent, q) % q
                rec.equal(comb(p2, i) ** 2 % q, product, f"prod r_S^{exponent} at t={t}", i, t)
        rec.count("steps")
    return rec.report()
