"""Identities of the p-Cantor and p-Singer sequences and their Laurent series."""

from fractions import Fraction

from src.finite_field import PrimeLike, as_prime, binom_residue
from src.sequences import (
    cantor,
    laurent_inverse,
    power_series,
    series_product,
    singer,
)
from src.verify.models import CheckRecorder, CheckReport


def check_sequence_identities(p: PrimeLike, length: int = 243) -> CheckReport:
    """
    Symmetry, self-similarity, zero blocks and series identities on prefixes.

    Args:
        p: Odd prime
        length: Prefix length; every power p^k <= length is exercised

    Returns:
        CheckReport; identities are compared entry by entry
    """
    prime = as_prime(p)
    q = prime.p
    rec = CheckRecorder("sequences", {"p": q, "length": length})
    c = cantor(prime, length)
    s = singer(prime, length)

    rec.equal(1, c.get(0), "cantor c_0", 0)
    rec.equal(1, s.get(0), "singer s_0", 0)

    k = 1
    while q**k + 2 <= length:
        P = q**k
        for i in range(P):
            rec.equal(c.get(P - 1 - i), c.get(i), f"cantor symmetry k={k}", i)
        for i in range(P + 2):
            rec.equal(s.get(P + 1 - i), s.get(i), f"singer symmetry k={k}", i)
        rec.count("levels")
        k += 1

    # cantor(p^k) is p scaled copies of cantor(p^(k-1))
    k = 1
    while q**k <= length:
        block = q ** (k - 1)
        for j in range(q):
            weight = binom_residue(prime.p2, Fraction(j, 2), q)
            for i in range(block):
                rec.equal(weight * c.get(i) % q, c.get(j * block + i), f"self-similarity k={k}", j * block + i)
        k += 1

    h = 0
    while 2 * q**h <= length:
        for i in range(q**h, 2 * q**h):
            rec.equal(0, c.get(i), f"zero block h={h}", i)
        h += 1

    for i in range(1, length, 2):
        rec.equal(0, s.get(i), "odd singer entry", i)

    one = power_series(prime, [1], length)
    rec.equal_seq(one.values, series_product(c, s, length).values, "cantor * singer = 1")
    rec.equal_seq(s.values, laurent_inverse(c, length).values, "singer = cantor^-1")
    rec.equal_seq(c.values, laurent_inverse(laurent_inverse(c, length), length).values, "inverse is an involution")

    one_plus = power_series(prime, [1, 0, 1], length)
    theta_sq = series_product(c, c, length)
    rec.equal_seq(one.values, series_product(theta_sq, one_plus, length).values, "theta^2 (1 + t^-2) = 1")
    rec.equal_seq(one_plus.values, series_product(s, s, length).values, "xi^2 = 1 + t^-2")
    return rec.report()
