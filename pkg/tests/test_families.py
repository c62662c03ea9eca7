import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from hyperlab.errors import DomainViolation, ParseError
from hyperlab.families import BUILTINS, builtin, from_expressions

SERIES = [name for name in BUILTINS if builtin(name).term is not None]


def test_builtin_suite_size_and_expectations():
    assert len(BUILTINS) >= 8
    expected = {name: builtin(name).uniform for name in BUILTINS}
    assert sum(expected.values()) == 4 and sum(not v for v in expected.values()) == 4


def test_unknown_builtin_lists_names():
    with pytest.raises(KeyError, match="sawtooth"):
        builtin("nope")


def test_domain_override_clears_expectation():
    f = builtin("arctan", (0.5, 1.0))
    assert f.domain == (0.5, 1.0)
    assert f.singular_points == () and f.uniform is None


def test_domain_checks():
    f = builtin("geometric")
    assert f.contains(1.0) and not f.contains(1.1)
    with pytest.raises(DomainViolation):
        f.check_domain(-0.5)
    with pytest.raises(ValueError):
        from_expressions((1, 0), partial_sum="x")


@settings(max_examples=25, deadline=None)
@given(st.sampled_from(SERIES), st.integers(1, 2000), st.integers(1, 3000), st.floats(0, 1))
def test_block_matches_partial_sum_difference(name, n, extra, t):
    f = builtin(name)
    a, b = f.domain
    x = a + t * (b - a)
    n2 = n + extra
    block = f.block(n, n2, x)
    diff = f.s(n2 - 1, x) - f.s(n - 1, x)
    scale = max(1.0, abs(f.s(n2 - 1, x)), abs(f.s(n - 1, x)))
    assert abs(block - diff) <= 1e-12 * scale


def test_partial_sum_grid_matches_scalar():
    for name in ("sawtooth", "geometric_series", "arctan"):
        f = builtin(name)
        xs = np.linspace(*f.domain, 7)
        grid = f.partial_sums_grid(np.array([1, 5, 40]), xs)
        for i, m in enumerate((1, 5, 40)):
            assert np.allclose(grid[i], [f.s(m, x) for x in xs], rtol=1e-13, atol=1e-15)


def test_tail_grid_matches_block():
    f = builtin("sin_over_square")
    xs = np.array([-1.0, 0.3, 2.0])
    tail = f.tail_grid(100, 20000, xs, chunk=1000)
    assert np.allclose(tail, [f.block(100, 20000, x) for x in xs], rtol=1e-12, atol=1e-16)


def test_sawtooth_closed_form():
    f = builtin("sawtooth")
    assert f.limit(0.0) == 0.0
    assert f.limit(math.pi / 2) == pytest.approx(math.pi / 4)
    assert f.s(10**5, math.pi / 2) == pytest.approx(math.pi / 4, abs=1e-4)


def test_from_expressions_term_and_limit():
    f = from_expressions((0, 1), term="x^n*0.5^n", limit="1/(1-x/2)")
    assert f.s(60, 0.5) == pytest.approx(1 / (1 - 0.25), rel=1e-12)
    assert f.limit(0.5) == pytest.approx(4 / 3)
    with pytest.raises(ValueError):
        from_expressions((0, 1), term="x", partial_sum="x")
    with pytest.raises(ParseError):
        from_expressions((0, 1), partial_sum="x/")
    with pytest.raises(ParseError):
        from_expressions((0, 1), partial_sum="x", limit="n*x")
