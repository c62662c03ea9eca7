"""Truncated asymptotic series in one infinitesimal generator.

An :class:`AsymptoticNumber` is a finite sum ``sum(c_i * e**q_i)`` with exact
rational exponents ``q_i`` and a truncation order ``O``: every exponent above
``O`` is unknown.  Reading ``e`` as ``1/n`` for an infinite index ``n`` turns
the element into a computable stand-in for the hyperreal represented by the
sequence ``n -> sum(c_i * n**-q_i)``.

Exact elements carry ``order = EXACT`` (positive infinity).  Arithmetic keeps
the truncation honest:

* ``add``: order is the smaller of the two orders;
* ``mul``: order is ``min(Oa + lexp(b), Ob + lexp(a))``;
* ``inv``: order is ``Oa - 2*lexp(a)``.

Ordering is total on everything that can be decided: :func:`compare` returns
``Ordering.LESS``/``Ordering.GREATER`` or an :class:`EqualWithinOrder` marker
when the difference vanishes up to the available order.
"""

from __future__ import annotations

import enum
import functools
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Any, Mapping, Union

from .errors import CenterMismatch, DivisionByZero, InsufficientTaylorOrder, UnlimitedArgument
from .scalars import RATIONAL, ScalarField, field_of

EXACT = math.inf

# Relative depth used when an exact element with several terms is inverted.
DEFAULT_RELATIVE_ORDER = Fraction(12)

Order = Union[Fraction, float]


class Magnitude(enum.Enum):
    ZERO = "zero"
    INFINITESIMAL = "infinitesimal"
    APPRECIABLE = "appreciable"
    UNLIMITED = "unlimited"


class Ordering(enum.Enum):
    LESS = -1
    GREATER = 1


@dataclass(frozen=True)
class EqualWithinOrder:
    """The compared elements agree on every exponent up to ``order``."""

    order: Order


def _as_fraction(q: Any) -> Fraction:
    if isinstance(q, Fraction):
        return q
    if isinstance(q, float):
        if math.isinf(q):
            raise ValueError("exponents must be finite")
        return Fraction(q).limit_denominator(10**9)
    return Fraction(q)


def _as_order(o: Any) -> Order:
    if o is None:
        return EXACT
    if isinstance(o, float) and math.isinf(o):
        if o < 0:
            raise ValueError("truncation order cannot be -inf")
        return EXACT
    return _as_fraction(o)


@dataclass(frozen=True, eq=False)
class AsymptoticNumber:
    terms: tuple = ()
    order: Order = EXACT
    field: ScalarField = RATIONAL

    def __post_init__(self):
        raw = self.terms if type(self.terms) is tuple else (
            self.terms.items() if isinstance(self.terms, Mapping) else self.terms)
        order = _as_order(self.order)
        fld = self.field
        bounded = order != EXACT
        exact = fld.exact
        acc: dict[Fraction, Any] = {}
        with fld.context():
            for q, c in raw:
                if type(q) is not Fraction:
                    q = _as_fraction(q)
                if bounded and q > order:
                    continue
                if not (exact and type(c) is Fraction):
                    c = fld.coerce(c)
                acc[q] = acc[q] + c if q in acc else c
        cleaned = tuple(sorted((q, c) for q, c in acc.items() if c != 0))
        object.__setattr__(self, "terms", cleaned)
        object.__setattr__(self, "order", order)

    @classmethod
    def _raw(cls, terms: tuple, order: Order, field: ScalarField) -> AsymptoticNumber:
        # Internal constructor: terms already sorted, nonzero, within order and in ``field``.
        obj = object.__new__(cls)
        object.__setattr__(obj, "terms", terms)
        object.__setattr__(obj, "order", order)
        object.__setattr__(obj, "field", field)
        return obj

    # construction -----------------------------------------------------

    @classmethod
    def constant(cls, value: Any, field: ScalarField | None = None) -> AsymptoticNumber:
        fld = field or field_of(value)
        return cls(((0, value),), EXACT, fld)

    @classmethod
    def monomial(cls, exponent: Any = 1, coefficient: Any = 1,
                 field: ScalarField = RATIONAL) -> AsymptoticNumber:
        return cls(((exponent, coefficient),), EXACT, field)

    @classmethod
    def big_o(cls, order: Any, field: ScalarField = RATIONAL) -> AsymptoticNumber:
        """The zero element known only up to ``order``: ``O(e**order)``."""
        return cls((), order, field)

    # inspection -------------------------------------------------------

    @property
    def is_exact(self) -> bool:
        return self.order == EXACT

    @property
    def leading_exponent(self) -> Fraction | None:
        return self.terms[0][0] if self.terms else None

    @property
    def leading_coefficient(self):
        return self.terms[0][1] if self.terms else None

    def coefficient(self, exponent: Any):
        q = _as_fraction(exponent)
        if q > self.order:
            raise ValueError(f"coefficient of e^{q} is beyond truncation order {self.order}")
        for e, c in self.terms:
            if e == q:
                return c
        return self.field.coerce(0)

    def _size_exponent(self) -> Order:
        # Exponent bounding |self|; a truncated zero is only known to be O(e^order).
        return self.terms[0][0] if self.terms else self.order

    def truncate(self, order: Any) -> AsymptoticNumber:
        o = min(self.order, _as_order(order))
        return AsymptoticNumber._raw(tuple(t for t in self.terms if t[0] <= o), o, self.field)

    def to_field(self, fld: ScalarField) -> AsymptoticNumber:
        return AsymptoticNumber(self.terms, self.order, fld)

    def evaluate(self, n: float) -> float:
        """Value of the realization sequence at a finite index ``n``."""
        return math.fsum(float(c) * float(n) ** (-float(q)) for q, c in self.terms)

    def __bool__(self) -> bool:
        return bool(self.terms)

    # arithmetic -------------------------------------------------------

    def __add__(self, other):
        other = _coerce(other, self.field)
        if other is NotImplemented:
            return NotImplemented
        return add(self, other)

    __radd__ = __add__

    def __neg__(self):
        with self.field.context():
            out = AsymptoticNumber._raw(tuple((q, -c) for q, c in self.terms), self.order, self.field)
        form = self.__dict__.get("_eform")
        if form is not None:
            object.__setattr__(out, "_eform", form)
        return out

    def __pos__(self):
        return self

    def __sub__(self, other):
        other = _coerce(other, self.field)
        if other is NotImplemented:
            return NotImplemented
        return add(self, -other)

    def __rsub__(self, other):
        other = _coerce(other, self.field)
        if other is NotImplemented:
            return NotImplemented
        return add(other, -self)

    def __mul__(self, other):
        other = _coerce(other, self.field)
        if other is NotImplemented:
            return NotImplemented
        return mul(self, other)

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = _coerce(other, self.field)
        if other is NotImplemented:
            return NotImplemented
        return mul(self, inv(other))

    def __rtruediv__(self, other):
        other = _coerce(other, self.field)
        if other is NotImplemented:
            return NotImplemented
        return mul(other, inv(self))

    def __pow__(self, k: int):
        if not isinstance(k, int):
            return NotImplemented
        if k < 0:
            return inv(self) ** (-k)
        result = AsymptoticNumber.constant(1, self.field)
        base = self
        while k:
            if k & 1:
                result = mul(result, base)
            k >>= 1
            if k:
                base = mul(base, base)
        return result

    # comparison -------------------------------------------------------

    def __eq__(self, other):
        other = _coerce(other, self.field)
        if other is NotImplemented:
            return NotImplemented
        return self.terms == other.terms and self.order == other.order

    def __hash__(self):
        return hash((self.terms, self.order))

    def __lt__(self, other):
        other = _coerce(other, self.field)
        if other is NotImplemented:
            return NotImplemented
        return compare(self, other) is Ordering.LESS

    def __gt__(self, other):
        other = _coerce(other, self.field)
        if other is NotImplemented:
            return NotImplemented
        return compare(self, other) is Ordering.GREATER

    def __str__(self) -> str:
        return render(self)

    def __repr__(self) -> str:
        return f"AsymptoticNumber({render(self)!r}, field={self.field.name})"


def _coerce(value: Any, fld: ScalarField):
    if isinstance(value, AsymptoticNumber):
        return value
    if isinstance(value, (int, Fraction, float)) or hasattr(value, "_mpf_"):
        return AsymptoticNumber.constant(value, fld.join(field_of(value)))
    return NotImplemented


def epsilon(power: Any = 1, field: ScalarField = RATIONAL) -> AsymptoticNumber:
    """The generator ``e`` (read ``1/n``) raised to a rational power."""
    return AsymptoticNumber.monomial(power, 1, field)


def _reduced(n: int, d: int) -> Fraction:
    """``Fraction(n, d)`` for integers with ``d > 0``, skipping the generic constructor."""
    g = math.gcd(n, d)
    f = object.__new__(Fraction)
    f._numerator, f._denominator = n // g, d // g
    return f


@functools.lru_cache(maxsize=4096)
def _exponent(k: int, den: int) -> Fraction:
    return Fraction(k, den)


# Inner loops work on integers: exponents become k/eden over a common denominator
# (cached per instance as ``_eform``), exact coefficients become c/cden (``_cform``).


def _exponent_form(x: AsymptoticNumber) -> tuple:
    form = x.__dict__.get("_eform")
    if form is None:
        eden = math.lcm(*(q.denominator for q, _ in x.terms)) if x.terms else 1
        form = (eden, tuple(q.numerator * (eden // q.denominator) for q, _ in x.terms))
        object.__setattr__(x, "_eform", form)
    return form


def _coefficient_form(x: AsymptoticNumber) -> tuple:
    form = x.__dict__.get("_cform")
    if form is None:
        cden = math.lcm(*(c.denominator for _, c in x.terms)) if x.terms else 1
        form = (cden, tuple(c.numerator * (cden // c.denominator) for _, c in x.terms))
        object.__setattr__(x, "_cform", form)
    return form


def _integer_bound(order: Order, eden: int):
    return math.inf if order == EXACT else math.floor(order * eden)


def _finish(keyed: list, eden: int, order: Order, fld: ScalarField) -> AsymptoticNumber:
    """Build a result from nonzero ``(k, (exponent, coefficient))`` pairs sorted by ``k``."""
    out = AsymptoticNumber._raw(tuple(t for _, t in keyed), order, fld)
    object.__setattr__(out, "_eform", (eden, tuple(k for k, _ in keyed)))
    return out


def add(a: AsymptoticNumber, b: AsymptoticNumber) -> AsymptoticNumber:
    fld = a.field.join(b.field)
    order = min(a.order, b.order)
    if not (a.field is fld and b.field is fld):
        with fld.context():
            return AsymptoticNumber(a.terms + b.terms, order, fld)
    ea, ka = _exponent_form(a)
    eb, kb = _exponent_form(b)
    eden = math.lcm(ea, eb)
    bound = _integer_bound(order, eden)
    sa, sb = eden // ea, eden // eb
    acc = {}
    for k, t in zip(ka, a.terms):
        k *= sa
        if k <= bound:
            acc[k] = t
    with fld.context():
        for k, t in zip(kb, b.terms):
            k *= sb
            if k > bound:
                continue
            prev = acc.get(k)
            if prev is None:
                acc[k] = t
                continue
            c = prev[1] + t[1]
            if c == 0:
                del acc[k]
            else:
                acc[k] = (prev[0], c)
    return _finish(sorted(acc.items()), eden, order, fld)


def mul(a: AsymptoticNumber, b: AsymptoticNumber) -> AsymptoticNumber:
    fld = a.field.join(b.field)
    if a.order == EXACT and b.order == EXACT:
        order = EXACT
    else:
        order = min(a.order + b._size_exponent(), b.order + a._size_exponent())
    if not (a.field is fld and b.field is fld):
        a, b = a.to_field(fld), b.to_field(fld)
    ea, ka = _exponent_form(a)
    eb, kb = _exponent_form(b)
    eden = math.lcm(ea, eb)
    bound = _integer_bound(order, eden)
    sa, sb = eden // ea, eden // eb
    if fld.exact:
        (ca, va), (cb, vb) = _coefficient_form(a), _coefficient_form(b)
    else:
        ca = cb = None
        va, vb = [c for _, c in a.terms], [c for _, c in b.terms]
    acc: dict[int, Any] = {}
    with fld.context():
        for k1, c1 in zip(ka, va):
            k1 *= sa
            for k2, c2 in zip(kb, vb):
                k = k1 + k2 * sb
                if k > bound:
                    continue
                c = c1 * c2
                acc[k] = acc[k] + c if k in acc else c
    items = sorted(acc.items())
    if ca is None:
        keyed = [(k, (_exponent(k, eden), c)) for k, c in items if c != 0]
    else:
        den = ca * cb
        keyed = [(k, (_exponent(k, eden), _reduced(c, den))) for k, c in items if c]
    return _finish(keyed, eden, order, fld)


def _scale(a: AsymptoticNumber, coefficient, exponent: Fraction) -> AsymptoticNumber:
    """Multiply by the exact monomial ``coefficient * e**exponent``."""
    with a.field.context():
        return AsymptoticNumber._raw(tuple((q + exponent, c * coefficient) for q, c in a.terms),
                                     a.order + exponent, a.field)


_RECURRENCE_LIMIT = 4096  # lattice points up to the relative order


def inv(a: AsymptoticNumber) -> AsymptoticNumber:
    """Multiplicative inverse: leading monomial inverse times ``1/(1 + t)``.

    ``t`` has positive exponents on a lattice ``k/eden``; the coefficients of
    ``1/(1 + t)`` follow from ``b_k = -sum_j t_j b_(k-j)`` and agree with the
    geometric series ``sum (-t)**m`` truncated at the same order.
    """
    if not a.terms:
        raise DivisionByZero("inverse of an element with no known nonzero term")
    fld = a.field
    q0, c0 = a.terms[0]
    with fld.context():
        c0_inv = fld.coerce(1) / c0
        if len(a.terms) == 1:
            return AsymptoticNumber._raw(((-q0, c0_inv),), a.order - 2 * q0, fld)
        rel = a.order - q0 if not a.is_exact else Fraction(DEFAULT_RELATIVE_ORDER)
        tail = [(q - q0, c * c0_inv) for q, c in a.terms[1:] if q - q0 <= rel]
        eden = math.lcm(*(q.denominator for q, _ in tail)) if tail else 1
        K = math.floor(rel * eden)
        if K > _RECURRENCE_LIMIT:
            return _scale(_inverse_geometric(tail, rel, fld), c0_inv, -q0)
        steps = [(q.numerator * (eden // q.denominator), c) for q, c in tail]
        if fld.exact:
            return _inverse_exact(steps, eden, K, c0_inv, q0, rel - q0, fld)
        one = fld.coerce(1)
        b = [one] + [None] * K
        for k in range(1, K + 1):
            acc = 0
            for j, t in steps:
                if j > k:
                    break
                if b[k - j]:
                    acc = acc - t * b[k - j]
            b[k] = fld.coerce(acc) if acc == 0 else acc
        terms = tuple((_exponent(k, eden), c) for k, c in enumerate(b) if c != 0)
        total = AsymptoticNumber._raw(terms, rel, fld)
        return _scale(total, c0_inv, -q0)


def _inverse_exact(steps, eden: int, K: int, c0_inv: Fraction, q0: Fraction, order: Fraction,
                   fld: ScalarField) -> AsymptoticNumber:
    """``c0_inv * e**-q0 / (1 + t)`` with the recurrence kept in the integers.

    With ``t_j = T_j/D`` and ``b_k = B_k/D**k``: ``B_k = -sum_j T_j * B_(k-j) * D**(j-1)``.
    """
    D = math.lcm(*(c.denominator for _, c in steps))
    T = [(j, c.numerator * (D // c.denominator)) for j, c in steps]
    powers = [1]
    for _ in range(K):
        powers.append(powers[-1] * D)
    B = [1] + [0] * K
    for k in range(1, K + 1):
        acc = 0
        for j, t in T:
            if j > k:
                break
            if B[k - j]:
                acc -= t * B[k - j] * powers[j - 1]
        B[k] = acc
    E = math.lcm(eden, q0.denominator)
    se, shift = E // eden, q0.numerator * (E // q0.denominator)
    p, q = c0_inv.numerator, c0_inv.denominator
    keyed = [(k * se - shift, (_exponent(k * se - shift, E), _reduced(p * v, q * powers[k])))
             for k, v in enumerate(B) if v]
    return _finish(keyed, E, order, fld)


def _inverse_geometric(tail, rel: Fraction, fld: ScalarField) -> AsymptoticNumber:
    neg_tail = AsymptoticNumber(tuple((q, -c) for q, c in tail), rel, fld)
    total = power = AsymptoticNumber(((0, 1),), rel, fld)
    while True:
        power = mul(power, neg_tail).truncate(rel)
        if not power.terms:
            return total
        total = add(total, power)


def compare(a: AsymptoticNumber, b: AsymptoticNumber) -> Ordering | EqualWithinOrder:
    a = _coerce(a, RATIONAL) if not isinstance(a, AsymptoticNumber) else a
    b = _coerce(b, a.field) if not isinstance(b, AsymptoticNumber) else b
    fld = a.field.join(b.field)
    if not (a.field is fld and b.field is fld):
        a, b = a.to_field(fld), b.to_field(fld)
    order = min(a.order, b.order)
    # walk both term lists to the leading term of a - b
    ta, tb = a.terms, b.terms
    i = j = 0
    with fld.context():
        while i < len(ta) or j < len(tb):
            if j == len(tb) or (i < len(ta) and ta[i][0] < tb[j][0]):
                q, c = ta[i]
                i += 1
            elif i == len(ta) or tb[j][0] < ta[i][0]:
                q, c = tb[j][0], -tb[j][1]
                j += 1
            else:
                q, c = ta[i][0], ta[i][1] - tb[j][1]
                i += 1
                j += 1
                if c == 0:
                    continue
            if q > order:
                break
            return Ordering.GREATER if c > 0 else Ordering.LESS
    return EqualWithinOrder(order)


def classify(a: AsymptoticNumber) -> Magnitude:
    if not a.terms:
        return Magnitude.ZERO
    q = a.terms[0][0]
    if q > 0:
        return Magnitude.INFINITESIMAL
    if q == 0:
        return Magnitude.APPRECIABLE
    return Magnitude.UNLIMITED


def shadow(a: AsymptoticNumber):
    """Standard part: the coefficient of ``e**0`` of a limited element."""
    if a.terms and a.terms[0][0] < 0:
        raise UnlimitedArgument(f"{render(a)} is unlimited and has no shadow")
    if not a.terms and a.order < 0:
        raise UnlimitedArgument(f"{render(a)} is not known to be limited")
    return a.coefficient(0) if a.order >= 0 else a.field.coerce(0)


def _centers_match(value, center, fld: ScalarField) -> bool:
    if fld.exact:
        return value == center
    with fld.context():
        scale = max(1, abs(value), abs(center))
        return abs(value - center) <= scale * fld.coerce(fld.unit_roundoff) * 256


def compose_analytic(f, a: AsymptoticNumber, order: Any) -> AsymptoticNumber:
    """Evaluate the Taylor model ``f`` at ``a`` up to ``e**order``.

    ``a`` must be limited with shadow equal to ``f.center``; the infinitesimal
    part ``h = a - center`` is pushed through ``sum(c_k * h**k)``.
    """
    order = _as_order(order)
    s = shadow(a)
    fld = a.field.join(f.field)
    if not _centers_match(fld.coerce(s), fld.coerce(f.center), fld):
        raise CenterMismatch(f"shadow {s} differs from Taylor center {f.center}")
    a = a.to_field(fld)
    # the infinitesimal part: drop the constant term rather than subtract it
    h = AsymptoticNumber(tuple(t for t in a.terms if t[0] != 0), a.order, fld)
    coeffs = [fld.coerce(c) for c in f.coefficients]
    result = AsymptoticNumber(((0, coeffs[0]),), order, fld)
    if h.terms:
        needed = int(math.floor(order / h.terms[0][0])) if order != EXACT else None
        if needed is None or needed >= len(coeffs):
            raise InsufficientTaylorOrder(
                f"order {order} needs {('unbounded' if needed is None else needed + 1)} "
                f"Taylor coefficients, model has {len(coeffs)}")
    elif h.order <= 0:
        return result.truncate(h.order)
    power = AsymptoticNumber(((0, 1),), order, fld)
    k = 0
    while True:
        k += 1
        power = mul(power, h).truncate(order)
        if not power.terms:
            result = result.truncate(power.order)
            break
        if k >= len(coeffs):
            raise InsufficientTaylorOrder(f"Taylor model exhausted at degree {k}")
        result = add(result, mul(AsymptoticNumber(((0, coeffs[k]),), EXACT, fld), power))
    return result.truncate(order)


# text form ------------------------------------------------------------


def _render_scalar(c, fld: ScalarField) -> str:
    if fld.exact:
        return str(c)
    import mpmath

    digits = max(15, int(fld.prec * 0.30103))
    return mpmath.nstr(c, digits, strip_zeros=True)


def render_exponent(q: Fraction) -> str:
    if q.denominator == 1:
        return str(q.numerator)
    return f"({q})"


def render(a: AsymptoticNumber) -> str:
    """Text form, e.g. ``3 + 5*e^1 - 1*e^2 (+O(e^4))``."""
    parts: list[str] = []
    fld = a.field
    for q, c in a.terms:
        negative = c < 0
        with fld.context():
            body = _render_scalar(-c if negative else c, fld)
        if q != 0:
            body = f"{body}*e^{render_exponent(q)}"
        if not parts:
            parts.append(f"-{body}" if negative else body)
        else:
            parts.append(f"{'-' if negative else '+'} {body}")
    text = " ".join(parts) if parts else "0"
    if not a.is_exact:
        text += f" (+O(e^{render_exponent(a.order)}))"
    return text


def parse(text: str, field: ScalarField = RATIONAL) -> AsymptoticNumber:
    from .grammar import parse_field_expression

    return parse_field_expression(text, field)
