"""Taylor models of elementary functions at a point.

A :class:`TaylorModel` stores ``f^(k)(center)/k!`` for ``k = 0..degree`` in a
given coefficient field.  Exact rational coefficients are produced whenever
they exist (e.g. ``sin``/``cos``/``exp``/``arctan`` at 0, ``log`` at 1,
``1/x`` at any nonzero rational); otherwise a floating field is required.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import factorial
from typing import Any, Callable

import mpmath

from .scalars import RATIONAL, ScalarField, binary_float


@dataclass(frozen=True)
class TaylorModel:
    center: Any
    coefficients: tuple
    field: ScalarField = RATIONAL
    radius_hint: Any = None
    name: str = "f"

    def __post_init__(self):
        if len(self.coefficients) < 1:
            raise ValueError("a Taylor model needs at least one coefficient")

    @property
    def degree(self) -> int:
        return len(self.coefficients) - 1

    def evaluate(self, x: Any):
        """Horner evaluation of the truncated polynomial at a scalar ``x``."""
        with self.field.context():
            h = self.field.coerce(x) - self.field.coerce(self.center)
            acc = self.field.coerce(0)
            for c in reversed(self.coefficients):
                acc = acc * h + c
            return acc


def _is_zero(center) -> bool:
    return center == 0


def _needs_float(fld: ScalarField, what: str) -> None:
    if fld.exact:
        raise ValueError(f"{what} has transcendental Taylor coefficients; use a floating field")


def _transcendental(fld: ScalarField, fn: Callable, center):
    # Evaluate with guard bits, then round into the field.
    with mpmath.workprec(fld.prec + 32):
        c = mpmath.mpf(center.numerator) / center.denominator if isinstance(center, Fraction) else mpmath.mpf(center)
        value = fn(c)
    return fld.coerce(value)


def sin(center: Any = 0, degree: int = 12, field: ScalarField = RATIONAL) -> TaylorModel:
    if _is_zero(center):
        coeffs = tuple(
            Fraction(0) if k % 2 == 0 else Fraction((-1) ** (k // 2), factorial(k))
            for k in range(degree + 1)
        )
        return TaylorModel(field.coerce(0), tuple(field.coerce(c) for c in coeffs), field, name="sin")
    _needs_float(field, "sin away from 0")
    s = _transcendental(field, mpmath.sin, center)
    c = _transcendental(field, mpmath.cos, center)
    with field.context():
        cycle = (s, c, -s, -c)
        coeffs = tuple(cycle[k % 4] / factorial(k) for k in range(degree + 1))
    return TaylorModel(field.coerce(center), coeffs, field, name="sin")


def cos(center: Any = 0, degree: int = 12, field: ScalarField = RATIONAL) -> TaylorModel:
    if _is_zero(center):
        coeffs = tuple(
            Fraction(0) if k % 2 else Fraction((-1) ** (k // 2), factorial(k))
            for k in range(degree + 1)
        )
        return TaylorModel(field.coerce(0), tuple(field.coerce(c) for c in coeffs), field, name="cos")
    _needs_float(field, "cos away from 0")
    s = _transcendental(field, mpmath.sin, center)
    c = _transcendental(field, mpmath.cos, center)
    with field.context():
        cycle = (c, -s, -c, s)
        coeffs = tuple(cycle[k % 4] / factorial(k) for k in range(degree + 1))
    return TaylorModel(field.coerce(center), coeffs, field, name="cos")


def exp(center: Any = 0, degree: int = 12, field: ScalarField = RATIONAL) -> TaylorModel:
    if _is_zero(center):
        base = field.coerce(1)
    else:
        _needs_float(field, "exp away from 0")
        base = _transcendental(field, mpmath.exp, center)
    with field.context():
        coeffs = tuple(base / factorial(k) for k in range(degree + 1))
    return TaylorModel(field.coerce(center), coeffs, field, name="exp")


def log(center: Any = 1, degree: int = 12, field: ScalarField = RATIONAL) -> TaylorModel:
    if center <= 0:
        raise ValueError("log needs a positive center")
    if center == 1:
        c0 = field.coerce(0)
    else:
        _needs_float(field, "log away from 1")
        c0 = _transcendental(field, mpmath.log, center)
    with field.context():
        x0 = field.coerce(center)
        coeffs = [c0] + [field.coerce((-1) ** (k + 1)) / (k * x0 ** k) for k in range(1, degree + 1)]
    return TaylorModel(x0, tuple(coeffs), field, radius_hint=x0, name="log")


def reciprocal(center: Any, degree: int = 12, field: ScalarField = RATIONAL) -> TaylorModel:
    """``1/x`` about a nonzero center; exact for rational centers."""
    if center == 0:
        raise ValueError("1/x has no Taylor model at 0")
    with field.context():
        x0 = field.coerce(center)
        coeffs = tuple(field.coerce((-1) ** k) / x0 ** (k + 1) for k in range(degree + 1))
    return TaylorModel(x0, coeffs, field, radius_hint=abs(x0), name="reciprocal")


def arctan(center: Any = 0, degree: int = 12, field: ScalarField = RATIONAL) -> TaylorModel:
    """Coefficients from integrating the series of ``1/(1 + x**2)`` about ``center``."""
    if _is_zero(center):
        c0 = field.coerce(0)
    else:
        _needs_float(field, "arctan away from 0")
        c0 = _transcendental(field, mpmath.atan, center)
    with field.context():
        x0 = field.coerce(center)
        # (1 + x0^2) + 2 x0 h + h^2 inverted term by term.
        a0 = 1 + x0 * x0
        g = [1 / a0 if not field.exact else Fraction(1) / a0]
        for k in range(1, degree):
            prev2 = g[k - 2] if k >= 2 else 0
            g.append(-(2 * x0 * g[k - 1] + prev2) / a0)
        coeffs = [c0] + [g[k - 1] / k for k in range(1, degree + 1)]
    return TaylorModel(x0, tuple(field.coerce(c) for c in coeffs), field, name="arctan")


MODELS = {
    "sin": sin,
    "cos": cos,
    "exp": exp,
    "log": log,
    "arctan": arctan,
    "reciprocal": reciprocal,
}


def model(name: str, center: Any, degree: int = 12, field: ScalarField | None = None) -> TaylorModel:
    """Look up a model by name, promoting to a 128-bit field when exactness is impossible."""
    factory = MODELS[name]
    fld = field or RATIONAL
    try:
        return factory(center, degree, fld)
    except ValueError:
        if field is not None:
            raise
        return factory(center, degree, binary_float(128))
