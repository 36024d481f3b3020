from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from superleibniz.scalar import (
    GaussianRational as GR,
    I,
    ONE,
    ZERO,
    int_pow,
    is_root_of_unity,
    kth_root,
    power_product,
)


def small_rationals():
    return st.builds(
        Fraction,
        st.integers(min_value=-9, max_value=9),
        st.integers(min_value=1, max_value=9),
    )


def gaussians():
    return st.builds(GR, small_rationals(), small_rationals())


def nonzero_gaussians():
    return gaussians().filter(bool)


class TestFieldOps:
    def test_norm_identity(self):
        assert GR(1, 2) * GR(1, -2) == GR(5)

    def test_half_plus_half(self):
        assert GR(Fraction(1, 2)) + GR(Fraction(1, 2)) == ONE

    def test_division_by_conjugate(self):
        quotient = GR(3, 4) / GR(1, 2)
        assert quotient == GR(Fraction(11, 5), Fraction(-2, 5))
        assert quotient * GR(1, 2) == GR(3, 4)

    def test_division_by_zero(self):
        with pytest.raises(ZeroDivisionError):
            GR(1) / ZERO
        with pytest.raises(ZeroDivisionError):
            ZERO.inverse()

    def test_int_coercion(self):
        assert GR(2) * 3 == GR(6)
        assert 1 - I == GR(1, -1)

    @given(gaussians(), gaussians(), gaussians())
    @settings(max_examples=200)
    def test_field_axioms(self, x, y, z):
        assert (x + y) + z == x + (y + z)
        assert (x * y) * z == x * (y * z)
        assert x * (y + z) == x * y + x * z
        assert x + y == y + x
        assert x * y == y * x

    @given(nonzero_gaussians())
    def test_inverse(self, x):
        assert x * x.inverse() == ONE

    @given(gaussians(), gaussians())
    def test_conjugate_multiplicative(self, x, y):
        assert (x * y).conjugate() == x.conjugate() * y.conjugate()


class TestIntPow:
    def test_i_fourth(self):
        assert int_pow(I, 4) == ONE

    def test_one_plus_i_squared(self):
        assert int_pow(GR(1, 1), 2) == GR(0, 2)

    def test_negative_exponent(self):
        assert int_pow(GR(2), -3) == GR(Fraction(1, 8))

    def test_zero_exponent(self):
        assert int_pow(GR(7, -3), 0) == ONE

    def test_zero_to_negative(self):
        with pytest.raises(ZeroDivisionError):
            int_pow(ZERO, -1)

    @given(nonzero_gaussians(), st.integers(-8, 8), st.integers(-8, 8))
    @settings(max_examples=150)
    def test_additivity(self, x, a, b):
        assert int_pow(x, a + b) == int_pow(x, a) * int_pow(x, b)


class TestPowerProduct:
    def test_cancellation(self):
        assert power_product([GR(2), GR(4)], [2, -1]) == ONE

    def test_i_squared(self):
        assert power_product([I], [2]) == -ONE

    def test_conjugate_pair(self):
        assert power_product([GR(1, 1), GR(1, -1)], [2, 2]) == GR(4)

    def test_length_mismatch(self):
        with pytest.raises(ValueError):
            power_product([ONE], [1, 2])


class TestSerialization:
    def test_json_shape(self):
        assert (GR(3, 4) / GR(1, 2)).to_json() == {"re": "11/5", "im": "-2/5"}

    def test_json_roundtrip(self):
        for x in (ZERO, ONE, -I, GR(Fraction(-3, 7), Fraction(1, 2))):
            assert GR.from_json(x.to_json()) == x

    def test_parse_compact(self):
        assert GR.parse("11/5-2/5i") == GR(Fraction(11, 5), Fraction(-2, 5))
        assert GR.parse("-i") == -I
        assert GR.parse("1/2") == GR(Fraction(1, 2))
        assert GR.parse("0") == ZERO
        assert GR.parse("3i") == GR(0, 3)
        assert GR.parse("1+i") == GR(1, 1)

    def test_parse_rejects_garbage(self):
        for bad in ("", "x", "1.5", "1//2", "i+1"):
            with pytest.raises(ValueError):
                GR.parse(bad)

    def test_str_denominator_elision(self):
        assert str(GR(5)) == "5"
        assert str(GR(Fraction(-1, 2), 1)) == "-1/2+i"


class TestKthRoot:
    def test_square_root_of_minus_four(self):
        r = kth_root(GR(-4), 2)
        assert r is not None and r ** 2 == GR(-4)

    def test_no_root(self):
        assert kth_root(GR(2), 2) is None
        assert kth_root(GR(0, 1) * 3, 4) is None

    def test_rational_cube_root(self):
        assert kth_root(GR(Fraction(1, 8)), 3) == GR(Fraction(1, 2))

    def test_zero(self):
        assert kth_root(ZERO, 5) == ZERO

    @given(nonzero_gaussians(), st.integers(1, 6))
    @settings(max_examples=100)
    def test_root_of_power(self, x, k):
        r = kth_root(x ** k, k)
        assert r is not None and r ** k == x ** k

    def test_root_of_unity(self):
        assert is_root_of_unity(ONE) and is_root_of_unity(-I)
        assert not is_root_of_unity(GR(2)) and not is_root_of_unity(ZERO)
