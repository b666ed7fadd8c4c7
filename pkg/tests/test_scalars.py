from fractions import Fraction

import pytest
from gmpy2 import mpq
from hypothesis import given, strategies as st

from pudq.scalars import I, QuadExt, Scalar, as_coeff, conjugate, format_coeff, rational, sqrt_exact, to_complex

rats = st.builds(mpq, st.integers(-20, 20), st.integers(1, 9))
scalars = st.builds(Scalar, rats, rats)


def test_rational_coercion():
    assert rational("5/3") == mpq(5, 3)
    assert rational(Fraction(1, 2)) == mpq(1, 2)
    with pytest.raises(TypeError):
        rational(True)


def test_scalar_collapses_to_rational():
    assert Scalar(3, 0) == mpq(3)
    assert isinstance(Scalar(3, 0), type(mpq(0)))
    assert I * I == -1


def test_floating_complex_rejected():
    with pytest.raises(TypeError):
        as_coeff(1j)


@given(scalars, scalars)
def test_scalar_field_axioms(a, b):
    assert a * b == b * a
    assert (a + b) - b == a
    if a != 0:
        assert a * a.inverse() == 1 if isinstance(a, Scalar) else a * (1 / a) == 1
    assert abs(to_complex(a * b) - to_complex(a) * to_complex(b)) < 1e-9


def test_sqrt_exact():
    assert sqrt_exact(mpq(9, 4)) == mpq(3, 2)
    r2 = sqrt_exact(2)
    assert isinstance(r2, QuadExt)
    assert r2 * r2 == 2
    half = sqrt_exact(mpq(1, 2))
    assert half * half == mpq(1, 2)
    assert abs(to_complex(half) - 0.5 ** 0.5) < 1e-15
    with pytest.raises(ValueError):
        sqrt_exact(-1)


@given(rats, rats, rats, rats)
def test_quadext_multiplication_matches_floats(a, b, c, d):
    x, y = QuadExt(a, b, 3), QuadExt(c, d, 3)
    assert abs(to_complex(x * y) - to_complex(x) * to_complex(y)) < 1e-9
    if x != 0:
        assert x * x.inverse() == 1 if isinstance(x, QuadExt) else True


def test_quadext_radicands_must_agree():
    with pytest.raises(ValueError):
        QuadExt(0, 1, 2) + QuadExt(0, 1, 3)
    with pytest.raises(ValueError):
        QuadExt(0, 1, 4)


def test_conjugate_and_format():
    z = Scalar(mpq(1, 2), -3)
    assert conjugate(z) == Scalar(mpq(1, 2), 3)
    assert format_coeff(mpq(-7, 3)) == "-7/3"
    assert "sqrt(2)" in format_coeff(sqrt_exact(2))
