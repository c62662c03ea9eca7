"""Families of functions ``s_n(x)`` on an interval, and the built-in suite.

A family is given either by series terms ``u(k, x)`` (so that
``s_n = u_0 + ... + u_n``) or directly by partial sums ``s_n(x)``.  All
callables take numpy arrays and broadcast over both arguments.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from typing import Callable, Optional

import numpy as np

from .errors import DomainViolation
from .grammar import compile_family_expression
from .summation import RunningSum, series_sum

DOMAIN_SLACK = 1e-12


@dataclass(frozen=True)
class FunctionFamily:
    name: str
    domain: tuple
    term: Optional[Callable] = None
    partial_sum: Optional[Callable] = None
    limit: Optional[Callable] = None
    singular_points: tuple = ()
    uniform: Optional[bool] = None  # expected verdict for built-ins, None if unknown
    description: str = ""

    def __post_init__(self):
        a, b = self.domain
        if not a <= b:
            raise ValueError(f"empty domain [{a}, {b}]")
        if self.term is None and self.partial_sum is None:
            raise ValueError("a family needs a term or a partial sum")
        object.__setattr__(self, "domain", (float(a), float(b)))

    # domain -----------------------------------------------------------

    def contains(self, x) -> bool:
        a, b = self.domain
        width = max(1.0, b - a)
        return bool(np.all((np.asarray(x) >= a - DOMAIN_SLACK * width)
                           & (np.asarray(x) <= b + DOMAIN_SLACK * width)))

    def check_domain(self, x) -> None:
        if not self.contains(x):
            raise DomainViolation(f"x={x} lies outside {self.name} domain {list(self.domain)}")

    # evaluation -------------------------------------------------------

    def s(self, n: int, x: float) -> float:
        """Partial sum ``s_n(x)`` at a scalar point."""
        if self.partial_sum is not None:
            with np.errstate(all="ignore"):
                return float(self.partial_sum(n, x))
        return series_sum(lambda k: _broadcast(self.term(k, x), k), 0, n + 1)

    def block(self, n: int, n_prime: int, x: float) -> float:
        """``u_n(x) + ... + u_{n'-1}(x)``."""
        if self.term is not None:
            return series_sum(lambda k: _broadcast(self.term(k, x), k), n, n_prime)
        return self.s(n_prime - 1, x) - self.s(n - 1, x)

    def partial_sums_grid(self, ms: np.ndarray, xs: np.ndarray) -> np.ndarray:
        """Matrix ``S[i, j] = s_{ms[i]}(xs[j])`` for increasing ``ms``."""
        ms = np.asarray(ms)
        xs = np.asarray(xs, dtype=float)
        if self.partial_sum is not None:
            with np.errstate(all="ignore"):
                return np.broadcast_to(self.partial_sum(ms[:, None], xs[None, :]),
                                       (ms.size, xs.size)).astype(float)
        out = np.empty((ms.size, xs.size))
        acc = RunningSum(xs.shape)
        k = 0
        for row, m in enumerate(ms):
            while k <= m:
                with np.errstate(all="ignore"):
                    acc.add(np.broadcast_to(self.term(k, xs), xs.shape))
                k += 1
            out[row] = acc.value
        return out

    def tail_grid(self, start: int, stop: int, xs: np.ndarray, chunk: int = 4096) -> np.ndarray:
        """``sum(u_k(x) for k in range(start, stop))`` at every grid point."""
        xs = np.asarray(xs, dtype=float)
        if self.term is None:
            return self.partial_sums_grid(np.array([stop - 1]), xs)[0] - \
                self.partial_sums_grid(np.array([start - 1]), xs)[0]
        acc = RunningSum(xs.shape)
        for lo in range(start, stop, chunk):
            k = np.arange(lo, min(lo + chunk, stop), dtype=float)[:, None]
            with np.errstate(all="ignore"):
                block = np.broadcast_to(self.term(k, xs[None, :]), (k.shape[0], xs.size))
            acc.add(block.sum(axis=0))
        return acc.value


def _broadcast(values, k):
    return np.broadcast_to(np.asarray(values, dtype=float), np.shape(k))


# built-in suite ------------------------------------------------------------


def _sawtooth_limit(x):
    x = np.asarray(x, dtype=float)
    r = np.mod(x, 2 * np.pi)
    out = np.where(r == 0, 0.0, (np.pi - r) / 2)
    return out if out.ndim else float(out)


def _harmonic_term(k, x, power):
    # sin(kx)/k**power with u_0 = 0
    k = np.asarray(k, dtype=float)
    if k.size and k.min() > 0:
        return np.sin(k * x) / k**power if power != 1 else np.sin(k * x) / k
    with np.errstate(divide="ignore", invalid="ignore"):
        return np.where(k == 0, 0.0, np.sin(k * x) / np.where(k == 0, 1.0, k) ** power)


def _sawtooth_term(k, x):
    return _harmonic_term(k, x, 1)


def sawtooth(domain=(0.0, math.pi)) -> FunctionFamily:
    return FunctionFamily(
        "sawtooth", domain, term=_sawtooth_term, limit=_sawtooth_limit, uniform=False,
        description="sum sin(kx)/k, equal to (pi - x)/2 on (0, 2pi)",
    )


def _sin_over_square_term(k, x):
    return _harmonic_term(k, x, 2)


def sin_over_square(domain=(-math.pi, math.pi)) -> FunctionFamily:
    return FunctionFamily("sin_over_square", domain, term=_sin_over_square_term, uniform=True,
                          description="sum sin(kx)/k^2, bounded by the convergent sum 1/k^2")


def x_over_n(domain=(0.0, 1.0)) -> FunctionFamily:
    def s(n, x):
        return np.asarray(x, dtype=float) / np.maximum(n, 1)
    return FunctionFamily("x_over_n", domain, partial_sum=s, limit=lambda x: 0.0 * np.asarray(x),
                          uniform=True, description="f_n(x) = x/n")


def _step_at_zero(x):
    x = np.asarray(x, dtype=float)
    out = np.where(x == 0, 1.0, 0.0)
    return out if out.ndim else float(out)


def geometric(domain=(0.0, 1.0), name: str = "geometric") -> FunctionFamily:
    def s(n, x):
        return np.power(1.0 - np.asarray(x, dtype=float), n)
    return FunctionFamily(name, domain, partial_sum=s, limit=_step_at_zero, uniform=domain[0] > 0,
                          description="f_n(x) = (1 - x)^n")


def _arctan_limit(x):
    x = np.asarray(x, dtype=float)
    out = np.sign(x) * (np.pi / 2)
    return out if out.ndim else float(out)


def arctan_family(domain=(-1.0, 1.0)) -> FunctionFamily:
    def s(n, x):
        return np.arctan(n * np.asarray(x, dtype=float))
    return FunctionFamily("arctan", domain, partial_sum=s, limit=_arctan_limit,
                          singular_points=(0.0,), uniform=False, description="f_n(x) = arctan(nx)")


_FACT_CUTOFF = 171  # 1/k! underflows to 0 beyond this


def exp_series(domain=(0.0, 1.0)) -> FunctionFamily:
    inv_fact = np.array([1.0 / math.factorial(k) for k in range(_FACT_CUTOFF)])

    def term(k, x):
        k = np.asarray(k)
        kk = np.minimum(k, _FACT_CUTOFF - 1).astype(int)
        coeff = np.where(k < _FACT_CUTOFF, inv_fact[kk], 0.0)
        return coeff * np.power(np.asarray(x, dtype=float), kk)

    return FunctionFamily("exp_series", domain, term=term, limit=np.exp, uniform=True,
                          description="sum x^k/k!, converging to e^x")


def _one_off_zero(x):
    x = np.asarray(x, dtype=float)
    out = np.where(x == 0, 0.0, 1.0)
    return out if out.ndim else float(out)


def geometric_series(domain=(0.0, 1.0)) -> FunctionFamily:
    """``sum x(1-x)^k``: partial sums ``1 - (1-x)^(n+1)``, sum 1 on (0, 1] and 0 at 0."""
    def term(k, x):
        x = np.asarray(x, dtype=float)
        return x * np.power(1.0 - x, k)

    def s(n, x):
        x = np.asarray(x, dtype=float)
        return 1.0 - np.power(1.0 - x, np.asarray(n) + 1)

    return FunctionFamily("geometric_series", domain, term=term, partial_sum=s, limit=_one_off_zero,
                          uniform=False, description="sum x(1-x)^k")


BUILTINS: dict[str, Callable[[], FunctionFamily]] = {
    "x_over_n": x_over_n,
    "sin_over_square": sin_over_square,
    "exp_series": exp_series,
    "geometric_restricted": lambda: geometric((0.1, 1.0), "geometric_restricted"),
    "geometric": geometric,
    "arctan": arctan_family,
    "sawtooth": sawtooth,
    "geometric_series": geometric_series,
}


def builtin(name: str, domain=None) -> FunctionFamily:
    try:
        factory = BUILTINS[name]
    except KeyError:
        raise KeyError(f"unknown family {name!r}; known: {', '.join(BUILTINS)}") from None
    fam = factory()
    if domain is not None:
        fam = _with_domain(fam, domain)
    return fam


def _with_domain(fam: FunctionFamily, domain) -> FunctionFamily:
    a, b = (float(v) for v in domain)
    singular = tuple(s for s in fam.singular_points if a < s < b)
    return replace(fam, domain=(a, b), singular_points=singular, uniform=None)


def from_expressions(domain, term: str | None = None, partial_sum: str | None = None,
                     limit: str | None = None, name: str | None = None,
                     singular_points=()) -> FunctionFamily:
    """Build a family from text in the family grammar (symbols ``n`` and ``x``)."""
    if (term is None) == (partial_sum is None):
        raise ValueError("give exactly one of term or partial_sum")
    term_fn = ps_fn = lim_fn = None
    if term is not None:
        compiled = compile_family_expression(term)
        term_fn = lambda k, x, f=compiled: f(k, x)
    if partial_sum is not None:
        compiled = compile_family_expression(partial_sum)
        ps_fn = lambda n, x, f=compiled: f(n, x)
    if limit is not None:
        compiled = compile_family_expression(limit, allowed=("x",))
        lim_fn = lambda x, f=compiled: f(0, x)
    label = name or (f"term {term}" if term is not None else f"partial sum {partial_sum}")
    return FunctionFamily(label, tuple(domain), term=term_fn, partial_sum=ps_fn, limit=lim_fn,
                          singular_points=tuple(singular_points))
