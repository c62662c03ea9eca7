from fractions import Fraction

import mpmath
import pytest
from hypothesis import given, settings, strategies as st

from hyperlab import taylor
from hyperlab.scalars import RATIONAL, binary_float

F128 = binary_float(128)
REFERENCE = {"sin": mpmath.sin, "cos": mpmath.cos, "exp": mpmath.exp, "log": mpmath.log,
             "arctan": mpmath.atan, "reciprocal": lambda x: 1 / x}


def test_rational_models_at_zero():
    s = taylor.sin(0, 5)
    assert s.coefficients == (0, 1, 0, Fraction(-1, 6), 0, Fraction(1, 120))
    assert taylor.exp(0, 3).coefficients == (1, 1, Fraction(1, 2), Fraction(1, 6))
    assert taylor.log(1, 3).coefficients == (0, 1, Fraction(-1, 2), Fraction(1, 3))
    assert taylor.reciprocal(2, 2).coefficients == (Fraction(1, 2), Fraction(-1, 4), Fraction(1, 8))
    assert taylor.arctan(0, 5).coefficients == (0, 1, 0, Fraction(-1, 3), 0, Fraction(1, 5))


def test_rational_field_refuses_transcendental_centers():
    with pytest.raises(ValueError):
        taylor.sin(Fraction(1, 2), 4, RATIONAL)


def test_model_promotes_to_float():
    m = taylor.model("cos", Fraction(1, 3))
    assert m.field.prec == 128


@pytest.mark.parametrize("name, center", [
    ("sin", Fraction(1, 2)), ("cos", Fraction(-2, 3)), ("exp", Fraction(1, 4)),
    ("log", Fraction(3, 2)), ("arctan", Fraction(1, 2)), ("reciprocal", Fraction(5, 3)),
])
def test_coefficients_match_derivatives(name, center):
    # Taylor coefficients against numerical derivatives f^(k)(c)/k!
    m = taylor.model(name, center, 6, F128)
    with mpmath.workdps(50):
        c = mpmath.mpf(center.numerator) / center.denominator
        for k, coeff in enumerate(m.coefficients):
            want = mpmath.diff(REFERENCE[name], c, k) / mpmath.factorial(k)
            assert abs(coeff - want) < mpmath.mpf(10) ** -25 * max(1, abs(want))


@settings(max_examples=40)
@given(st.sampled_from(sorted(REFERENCE)), st.fractions(min_value=Fraction(1, 2), max_value=2, max_denominator=20),
       st.fractions(min_value=Fraction(-1, 40), max_value=Fraction(1, 40), max_denominator=400))
def test_evaluate_close_to_function(name, center, h):
    m = taylor.model(name, center, 12, F128)
    x = center + h
    with mpmath.workprec(128):
        want = REFERENCE[name](mpmath.mpf(x.numerator) / x.denominator)
        assert abs(m.evaluate(x) - want) < mpmath.mpf(10) ** -14
