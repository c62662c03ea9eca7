"""Compensated summation for long floating-point series.

``compensated_sum`` is a vectorised cascade: each pairwise-reduction level
uses the error-free TwoSum transformation and the rounding errors are
accumulated separately, which gives roughly twice-working-precision accuracy
at numpy speed.  ``math.fsum`` remains the reference for short inputs.
"""

from __future__ import annotations

import math
from typing import Callable, Iterable

import numpy as np

CHUNK = 1 << 20


def two_sum(a, b):
    """Error-free transformation: ``a + b == s + e`` exactly."""
    s = a + b
    bp = s - a
    e = (a - (s - bp)) + (b - bp)
    return s, e


def sum_with_error(values) -> tuple[float, float]:
    """Return ``(s, e)`` with ``s + e`` the compensated sum of ``values``."""
    x = np.asarray(values, dtype=float).ravel()
    if x.size == 0:
        return 0.0, 0.0
    errors = []
    while x.size > 1:
        if x.size % 2:
            x = np.append(x, 0.0)
        s, e = two_sum(x[0::2], x[1::2])
        errors.append(float(np.sum(e)))
        x = s
    return float(x[0]), math.fsum(errors)


def compensated_sum(values) -> float:
    s, e = sum_with_error(values)
    return s + e


def series_sum(term: Callable[[np.ndarray], np.ndarray], start: int, stop: int,
               chunk: int = CHUNK) -> float:
    """Compensated ``sum(term(k) for k in range(start, stop))`` evaluated in chunks."""
    parts: list[float] = []
    for lo in range(start, stop, chunk):
        k = np.arange(lo, min(lo + chunk, stop), dtype=float)
        s, e = sum_with_error(term(k))
        parts.extend((s, e))
    return math.fsum(parts)


class RunningSum:
    """Elementwise Neumaier accumulator over arrays of equal shape."""

    def __init__(self, shape):
        self.s = np.zeros(shape)
        self.c = np.zeros(shape)

    def add(self, v) -> None:
        v = np.asarray(v, dtype=float)
        t = self.s + v
        big = np.abs(self.s) >= np.abs(v)
        self.c += np.where(big, (self.s - t) + v, (v - t) + self.s)
        self.s = t

    @property
    def value(self) -> np.ndarray:
        return self.s + self.c


def fsum(values: Iterable[float]) -> float:
    return math.fsum(values)
