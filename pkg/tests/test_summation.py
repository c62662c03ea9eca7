import math

import numpy as np
from hypothesis import given, strategies as st

from hyperlab.summation import RunningSum, compensated_sum, series_sum, sum_with_error, two_sum

finite = st.floats(allow_nan=False, allow_infinity=False, min_value=-1e200, max_value=1e200)


@given(finite, finite)
def test_two_sum_is_error_free(a, b):
    s, e = two_sum(a, b)
    assert s == a + b
    # exact check through integer-scaled fractions
    from fractions import Fraction
    assert Fraction(s) + Fraction(e) == Fraction(a) + Fraction(b)


@given(st.lists(st.floats(allow_nan=False, allow_infinity=False, min_value=-1e10, max_value=1e10), max_size=300))
def test_compensated_matches_fsum(xs):
    want = math.fsum(xs)
    got = compensated_sum(xs)
    scale = max([1.0] + [abs(x) for x in xs])
    assert abs(got - want) <= 1e-15 * scale


def test_cancellation():
    xs = [1e16, 1.0, -1e16] * 1000
    assert compensated_sum(xs) == 1000.0
    assert sum_with_error([]) == (0.0, 0.0)


def test_series_sum_harmonic():
    got = series_sum(lambda k: 1.0 / k, 1, 10**6 + 1, chunk=1 << 16)
    want = math.fsum(1.0 / k for k in range(1, 10**6 + 1))
    assert abs(got - want) < 1e-13


def test_running_sum_elementwise():
    acc = RunningSum((2,))
    for _ in range(10**4):
        acc.add(np.array([0.1, 1e-8]))
    assert np.allclose(acc.value, [1000.0, 1e-4], rtol=1e-15, atol=0)
