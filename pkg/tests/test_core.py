"""Digit-expansion arithmetic: worked examples, brute-force oracles,
and the metric invariants."""

import math
import random
from fractions import Fraction

import pytest

from padiclab import (
    PadicApprox,
    PadicScalar,
    digit_string,
    padic_from_integer,
    padic_from_rational,
    valuation_and_norm,
)


def brute_digits(m, base, precision):
    """Oracle: plain repeated division."""
    m %= base**precision
    out = []
    for _ in range(precision):
        out.append(m % base)
        m //= base
    return tuple(out)


class TestFromInteger:
    def test_81_in_base_2(self):
        assert padic_from_integer(81, 2, 7).digits == (1, 0, 0, 0, 1, 0, 1)

    def test_zero(self):
        assert padic_from_integer(0, 2, 4).digits == (0, 0, 0, 0)

    def test_minus_one_is_all_ones(self):
        assert padic_from_integer(-1, 2, 6).digits == (1, 1, 1, 1, 1, 1)

    def test_matches_repeated_division_up_to_2_16(self):
        for m in range(1 << 16):
            assert padic_from_integer(m, 2, 16).digits == brute_digits(m, 2, 16)

    def test_bad_arguments(self):
        with pytest.raises(ValueError):
            padic_from_integer(1, 1, 4)
        with pytest.raises(ValueError):
            padic_from_integer(1, 2, 0)


class TestFromRational:
    def test_one_third(self):
        s = padic_from_rational(1, 3, 2, 10)
        assert s.valuation == 0
        assert s.unit.digits == (1, 1, 0, 1, 0, 1, 0, 1, 0, 1)

    def test_one_ninth(self):
        s = padic_from_rational(1, 9, 2, 12)
        assert s.valuation == 0
        assert s.unit.digits == (1, 0, 0, 1, 1, 1, 0, 0, 0, 1, 1, 1)

    def test_identity(self):
        s = padic_from_rational(1, 1, 2, 5)
        assert s.valuation == 0
        assert s.unit.digits == (1, 0, 0, 0, 0)

    def test_zero_numerator(self):
        assert padic_from_rational(0, 7, 2, 6).is_zero

    def test_valuation_splits_base_powers(self):
        s = padic_from_rational(12, 1, 2, 6)
        assert s.valuation == 2 and s.unit.residue() == 3
        s = padic_from_rational(1, 12, 2, 6)
        assert s.valuation == -2

    def test_zero_denominator(self):
        with pytest.raises(ValueError):
            padic_from_rational(1, 0, 2, 4)

    def test_composite_base_needs_coprime_denominator(self):
        with pytest.raises(ValueError):
            padic_from_rational(1, 2, 4, 4)
        # but a coprime denominator is fine
        s = padic_from_rational(1, 3, 4, 4)
        assert (s.unit.residue() * 3) % 4**4 == 1


class TestRingOps:
    def test_thirds_sum_to_one(self):
        third = padic_from_rational(1, 3, 2, 8).to_approx(8)
        two_thirds = padic_from_rational(2, 3, 2, 8).to_approx(8)
        assert (third + two_thirds).digits == padic_from_integer(1, 2, 8).digits

    def test_inverse_times_value(self):
        third = padic_from_rational(1, 3, 2, 8).unit
        three = padic_from_integer(3, 2, 8)
        assert (third * three).residue() == 1

    def test_self_difference_is_zero(self):
        x = padic_from_integer(173, 2, 9)
        assert (x - x).digits == (0,) * 9

    def test_result_precision_is_min(self):
        a = padic_from_integer(5, 2, 8)
        b = padic_from_integer(3, 2, 5)
        assert (a + b).precision == 5
        assert (a * b).precision == 5

    def test_base_mismatch(self):
        with pytest.raises(ValueError):
            padic_from_integer(1, 2, 4) + padic_from_integer(1, 3, 4)


class TestInvert:
    def test_3_mod_16(self):
        # oracle: exhaustive search for the inverse
        expected = [y for y in range(16) if 3 * y % 16 == 1]
        assert expected == [11]
        inv = padic_from_integer(3, 2, 4).invert()
        assert inv.residue() == 11 and inv.digits == (1, 1, 0, 1)

    def test_identity(self):
        assert padic_from_integer(1, 2, 8).invert().residue() == 1

    def test_9_mod_64(self):
        inv = padic_from_integer(9, 2, 6).invert()
        assert inv.residue() == 57 and 9 * 57 % 64 == 1
        assert inv.digits == (1, 0, 0, 1, 1, 1)

    def test_even_unit_rejected(self):
        with pytest.raises(ValueError):
            padic_from_integer(6, 2, 4).invert()
        with pytest.raises(ValueError):
            padic_from_integer(2, 4, 3).invert()


class TestValuationAndNorm:
    def test_64(self):
        assert valuation_and_norm(64, 2) == (6, Fraction(1, 64))

    def test_negative_rational(self):
        assert valuation_and_norm(Fraction(-691, 2730), 2) == (-1, Fraction(2))

    def test_zero(self):
        v, n = valuation_and_norm(0, 2)
        assert v == math.inf and n == 0

    def test_composite_base_4(self):
        assert valuation_and_norm(4, 4) == (1, Fraction(1, 4))
        assert valuation_and_norm(2, 4) == (0, Fraction(1))

    def test_scalar_input(self):
        s = padic_from_rational(12, 1, 2, 6)
        assert valuation_and_norm(s) == (2, Fraction(1, 4))
        assert valuation_and_norm(PadicScalar.zero(2, 4))[1] == 0

    def test_rational_needs_base(self):
        with pytest.raises(ValueError):
            valuation_and_norm(5)

    def test_multiplicativity_for_prime_base(self):
        rng = random.Random(4001)
        for _ in range(300):
            x = Fraction(rng.randint(-999, 999) or 1, rng.randint(1, 999))
            y = Fraction(rng.randint(-999, 999) or 1, rng.randint(1, 999))
            assert (
                valuation_and_norm(x * y, 2)[1]
                == valuation_and_norm(x, 2)[1] * valuation_and_norm(y, 2)[1]
            )

    def test_multiplicativity_fails_for_base_4(self):
        two = valuation_and_norm(2, 4)[1]
        assert two * two == 1 != valuation_and_norm(4, 4)[1]


class TestShift:
    def test_divide_out_four(self):
        x = padic_from_integer(12, 2, 6)
        y = x.shift(-2)
        assert y.precision == 4 and y.residue() == 3

    def test_multiply_by_four(self):
        x = padic_from_integer(3, 2, 4)
        y = x.shift(2)
        assert y.precision == 4 and y.residue() == 12

    def test_odd_number_cannot_shift_down(self):
        with pytest.raises(ValueError):
            padic_from_integer(3, 2, 4).shift(-1)

    def test_shift_beyond_precision(self):
        with pytest.raises(ValueError):
            padic_from_integer(8, 2, 3).shift(-3)


class TestDigitString:
    def test_81(self):
        assert padic_from_integer(81, 2, 7).digit_string() == "1000101"

    def test_zero(self):
        assert padic_from_integer(0, 2, 3).digit_string() == "000"

    def test_one_third(self):
        s = padic_from_rational(1, 3, 2, 6)
        assert s.unit.digit_string() == "110101"
        assert s.digit_string() == "v=0 110101"
        assert digit_string(s) == "v=0 110101"

    def test_zero_scalar_marker(self):
        assert PadicScalar.zero(2, 4).digit_string() == "v=inf 0000"

    def test_large_base_rejected(self):
        with pytest.raises(ValueError):
            padic_from_integer(5, 11, 3).digit_string()


class TestEquality:
    def test_precision_aware(self):
        a = PadicApprox(2, (1, 0, 1, 1))
        b = PadicApprox(2, (1, 0))
        assert a == b
        assert a != PadicApprox(2, (1, 1))

    def test_base_must_match(self):
        assert PadicApprox(2, (1, 0)) != PadicApprox(3, (1, 0))

    def test_scalar_equality(self):
        assert padic_from_rational(2, 3, 2, 8) == padic_from_rational(2, 3, 2, 12)
        assert padic_from_rational(2, 3, 2, 8) != padic_from_rational(4, 3, 2, 8)
        assert PadicScalar.zero(2, 4) == PadicScalar.zero(2, 9)


class TestScalarViews:
    def test_to_approx(self):
        s = padic_from_rational(12, 1, 2, 6)
        assert s.to_approx(8).residue() == 12
        assert s.known_to() == 8

    def test_negative_valuation_has_no_residue(self):
        with pytest.raises(ValueError):
            padic_from_rational(1, 2, 2, 6).to_approx()

    def test_records(self):
        rec = padic_from_rational(1, 3, 2, 4).to_record()
        assert rec == {
            "base": 2,
            "precision": 4,
            "valuation": 0,
            "digits": [1, 1, 0, 1],
        }
        rec = padic_from_integer(0, 2, 3).to_record()
        assert rec["valuation"] is None


class TestUltrametric:
    def test_valuation_of_sum_on_random_pairs(self):
        rng = random.Random(90125)
        for base in (2, 3, 5):
            prec = 20
            for _ in range(3500):
                x = padic_from_integer(rng.getrandbits(40), base, prec)
                y = padic_from_integer(rng.getrandbits(40), base, prec)
                assert (x + y).valuation() >= min(x.valuation(), y.valuation())

    def test_isosceles_paper_instance(self):
        # x - y = 20, y - z = 6: the two norms differ, so the third side
        # must equal their max exactly.
        assert valuation_and_norm(20, 2)[1] == Fraction(1, 4)
        assert valuation_and_norm(6, 2)[1] == Fraction(1, 2)
        assert valuation_and_norm(26, 2)[1] == Fraction(1, 2)

    def test_isosceles_random_triples(self):
        rng = random.Random(20090814)
        for _ in range(2000):
            x, y, z = (
                Fraction(rng.randint(-9999, 9999), rng.randint(1, 99))
                for _ in range(3)
            )
            nxy = valuation_and_norm(x - y, 2)[1]
            nyz = valuation_and_norm(y - z, 2)[1]
            nxz = valuation_and_norm(x - z, 2)[1]
            assert nxz <= max(nxy, nyz)
            if nxy != nyz:
                assert nxz == max(nxy, nyz)


def test_round_trip_through_rationals():
    rng = random.Random(5150)
    for _ in range(200):
        n = rng.randint(-10**6, 10**6) or 1
        d = rng.randint(1, 10**6)
        s = padic_from_rational(n, d, 2, 24)
        rhs = Fraction(n) / Fraction(2) ** s.valuation
        assert rhs.denominator == 1
        assert (s.unit.residue() * d - rhs.numerator) % (1 << 24) == 0
