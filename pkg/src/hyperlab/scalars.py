"""Coefficient fields for asymptotic numbers.

Two instantiations are provided: exact rationals (:data:`RATIONAL`, backed by
:class:`fractions.Fraction`) and binary floating point with a fixed number of
mantissa bits (:func:`binary_float`, backed by :mod:`mpmath`).
"""

from __future__ import annotations

import contextlib
from dataclasses import dataclass
from fractions import Fraction
from numbers import Rational
from typing import Any, ContextManager

import mpmath

MIN_FLOAT_BITS = 64
_NO_CONTEXT = contextlib.nullcontext()


@dataclass(frozen=True)
class ScalarField:
    """An ordered coefficient field.

    ``prec`` is ``None`` for the exact field and the mantissa width in bits
    otherwise.
    """

    name: str
    prec: int | None = None

    @property
    def exact(self) -> bool:
        return self.prec is None

    @property
    def unit_roundoff(self) -> Fraction:
        """Relative rounding unit, 2**(1-prec); zero for the exact field."""
        if self.prec is None:
            return Fraction(0)
        return Fraction(1, 2 ** (self.prec - 1))

    def context(self) -> ContextManager:
        """Working-precision context for coefficient arithmetic (a no-op when exact)."""
        if self.prec is None:
            return _NO_CONTEXT
        return mpmath.workprec(self.prec)

    def coerce(self, value: Any) -> Any:
        """Convert ``value`` into this field's coefficient type."""
        if self.prec is None:
            if isinstance(value, Fraction):
                return value
            if isinstance(value, (int, Rational)):
                return Fraction(value)
            if isinstance(value, float):
                return Fraction(value)
            if isinstance(value, str):
                return Fraction(value)
            raise TypeError(f"cannot represent {value!r} exactly as a rational")
        with mpmath.workprec(self.prec):
            if isinstance(value, Fraction):
                return mpmath.mpf(value.numerator) / value.denominator
            return mpmath.mpf(value)

    def join(self, other: ScalarField) -> ScalarField:
        """The field both operands can be promoted into."""
        if self.prec is None:
            return other
        if other.prec is None:
            return self
        return self if self.prec >= other.prec else other


RATIONAL = ScalarField("rational")


def binary_float(bits: int = 128) -> ScalarField:
    if bits < MIN_FLOAT_BITS:
        raise ValueError(f"floating field needs at least {MIN_FLOAT_BITS} bits, got {bits}")
    return ScalarField(f"binary{bits}", bits)


def field_of(value: Any) -> ScalarField:
    """Smallest field that holds ``value`` without rounding."""
    if isinstance(value, mpmath.mpf):
        return binary_float(max(mpmath.mp.prec, MIN_FLOAT_BITS))
    if isinstance(value, float):
        return binary_float(MIN_FLOAT_BITS)
    return RATIONAL


def to_float(value: Any) -> float:
    return float(value)
