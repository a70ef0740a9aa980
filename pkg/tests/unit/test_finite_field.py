"""
Unit tests for prime-field arithmetic.

Tests is_prime, Prime, FpElement and the generalized binomial coefficient.
"""

from fractions import Fraction

import numpy as np
import pytest

from src.exceptions import FieldError, ZeroInversionError
from src.finite_field import FpElement, Prime, as_prime, binom_residue, binomial, is_prime


@pytest.mark.unit
class TestIsPrime:
    """Test the Miller-Rabin primality test."""

    def test_small_values(self):
        """Test primes and composites below 50."""
        primes = [n for n in range(50) if is_prime(n)]
        assert primes == [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47]

    def test_large_prime_and_carmichael(self):
        """Test a large prime and a Carmichael number."""
        assert is_prime(2**61 - 1)
        assert not is_prime(561)
        assert not is_prime(3215031751)


@pytest.mark.unit
class TestPrime:
    """Test the Prime modulus."""

    def test_half_order(self):
        """Test that p2 is (p - 1) / 2."""
        assert Prime(3).p2 == 1
        assert Prime(7).p2 == 3

    @pytest.mark.parametrize("bad", [2, 9, 1, 0, -3])
    def test_rejects_unsupported_moduli(self, bad):
        """Test that 2 and non-primes raise FieldError."""
        with pytest.raises(FieldError):
            Prime(bad)

    def test_rejects_non_integers(self):
        """Test that floats and bools are refused."""
        with pytest.raises(FieldError):
            Prime(3.0)
        with pytest.raises(FieldError):
            Prime(True)

    def test_dtype_switches_for_huge_primes(self):
        """Test int64 storage for small primes and object storage above 2^31."""
        assert Prime(5).dtype is np.int64
        assert Prime(2**61 - 1).dtype is object

    def test_inverse(self, f5):
        """Test extended-Euclid inverses."""
        assert [f5.inv(a) for a in range(1, 5)] == [1, 3, 2, 4]
        assert f5.inv(-1) == 4

    def test_inverse_of_zero(self, f5):
        """Test that inverting 0 raises ZeroInversionError."""
        with pytest.raises(ZeroInversionError):
            f5.inv(0)
        with pytest.raises(FieldError):
            f5.inv(10)

    def test_inverse_array(self):
        """Test elementwise inverses against pow(a, p - 2, p)."""
        prime = Prime(11)
        values = np.arange(1, 11)
        expected = [pow(int(a), 9, 11) for a in values]
        assert prime.inv_array(values).tolist() == expected

    def test_inverse_array_rejects_zero(self, f5):
        """Test that an array holding 0 cannot be inverted."""
        with pytest.raises(ZeroInversionError):
            f5.inv_array(np.array([1, 0, 2]))

    def test_sign(self, f5):
        """Test (-1)^e as a residue."""
        assert f5.sign(4) == 1
        assert f5.sign(3) == 4
        assert f5.sign(-1) == 4

    def test_dot(self, f5):
        """Test the modular dot product, including the empty case."""
        assert f5.dot(np.array([1, 2, 3]), np.array([4, 4, 4])) == 24 % 5
        assert f5.dot(np.array([], dtype=np.int64), np.array([], dtype=np.int64)) == 0

    def test_dot_large_prime(self):
        """Test that products near the modulus do not overflow."""
        p = 2**61 - 1
        prime = Prime(p)
        x = np.array([p - 1, p - 1], dtype=object)
        assert prime.dot(x, x) == 2

    def test_as_prime(self, f3):
        """Test that as_prime accepts ints and passes Prime through."""
        assert as_prime(3) == f3
        assert as_prime(f3) is f3


@pytest.mark.unit
class TestFpElement:
    """Test residue arithmetic."""

    def test_normalizes_value(self, f5):
        """Test that values are reduced into [0, p)."""
        assert FpElement(7, f5).value == 2
        assert FpElement(-1, f5).value == 4

    def test_field_operations(self, f5):
        """Test + - * / and negation."""
        a, b = f5(3), f5(4)
        assert a + b == 2
        assert a - b == 4
        assert a * b == 2
        assert a / b == 2
        assert -a == 2
        assert 1 - a == 3
        assert 2 / b == 3

    def test_power_and_inverse(self, f5):
        """Test non-negative and negative exponents."""
        a = f5(2)
        assert a**4 == 1
        assert a**-1 == 3
        assert a.inv() == 3
        assert (a**-3) * (a**3) == 1

    def test_division_by_zero(self, f5):
        """Test that dividing by zero raises ZeroInversionError."""
        with pytest.raises(ZeroInversionError):
            f5(1) / 0

    def test_mixing_fields(self, f3, f5):
        """Test that arithmetic across moduli raises FieldError."""
        with pytest.raises(FieldError):
            f3(1) + f5(1)
        with pytest.raises(FieldError):
            f5.element(f3(1))

    def test_equality_and_hash(self, f3, f5):
        """Test equality against ints and other residues."""
        assert f5(2) == 7
        assert f5(2) != f3(2)
        assert {f5(2): "x"}[f5(2)] == "x"
        assert not f5(0)

    def test_immutable(self, f5):
        """Test that attributes cannot be reassigned."""
        a = f5(1)
        with pytest.raises(AttributeError):
            a.value = 3

    def test_int_conversion(self, f5):
        """Test int() and use as an index."""
        a = f5(3)
        assert int(a) == 3
        assert [10, 11, 12, 13][a] == 13


@pytest.mark.unit
class TestBinomial:
    """Test generalized binomial coefficients."""

    def test_natural_arguments(self):
        """Test ordinary binomials reduced mod p."""
        assert binomial(6, 3, 7) == 6
        assert binom_residue(4, 2, 5) == 1

    def test_half_integer_is_zero(self):
        """Test that non-integral arguments give 0."""
        assert binomial(Fraction(3, 2), 1, 7) == 0
        assert binom_residue(3, Fraction(1, 2), 7) == 0

    def test_out_of_range_is_zero(self):
        """Test b > a and negative arguments."""
        assert binom_residue(2, 3, 7) == 0
        assert binom_residue(-1, 0, 7) == 0
        assert binom_residue(3, -1, 7) == 0

    def test_fraction_with_integral_value(self):
        """Test that Fraction(4, 2) counts as the integer 2."""
        assert binom_residue(3, Fraction(4, 2), 5) == 3
