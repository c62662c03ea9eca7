"""Hyperreals as explicit sequences, judged on finite index windows.

Elements of the ring of real sequences are :class:`HyperSeq` objects with
termwise arithmetic.  Truth "for almost all indices" is replaced by
eventual truth on a finite :class:`EvalWindow`; the answer is one of
:class:`HoldsOnWindow`, :class:`FailsRepeatedly` or :class:`Inconclusive`.

A verdict is *eventual* only when it covers at least the second half of the
window, so a single lucky index at the end never decides anything.
"""

from __future__ import annotations

import enum
import math
import operator
from dataclasses import dataclass, field
from typing import Callable, Union

import numpy as np

APPRECIABLE_FLOOR = 1e-3


def default_tol(k):
    return 1.0 / np.sqrt(k)


@dataclass(frozen=True)
class HyperSeq:
    """A sequence ``k -> term(k)`` for ``k >= 1``.

    ``term`` must be deterministic.  It may accept numpy arrays of indices;
    :meth:`values` falls back to elementwise calls when it does not.
    """

    term: Callable
    label: str = "u"

    def __call__(self, k):
        return self.term(k)

    def values(self, ks) -> np.ndarray:
        ks = np.asarray(ks)
        try:
            with np.errstate(all="ignore"):
                out = np.asarray(self.term(ks), dtype=float)
            if out.shape == ks.shape:
                return out
            if out.ndim == 0:
                return np.full(ks.shape, float(out))
        except (TypeError, ValueError):
            pass
        return np.array([float(self.term(int(k))) for k in ks.ravel()]).reshape(ks.shape)

    def _combine(self, other, op, symbol):
        other = other if isinstance(other, HyperSeq) else constant(other)
        f, g = self.term, other.term
        return HyperSeq(lambda k: op(f(k), g(k)), f"({self.label} {symbol} {other.label})")

    def __add__(self, other):
        return self._combine(other, operator.add, "+")

    def __sub__(self, other):
        return self._combine(other, operator.sub, "-")

    def __mul__(self, other):
        return self._combine(other, operator.mul, "*")

    __radd__ = __add__
    __rmul__ = __mul__

    def __neg__(self):
        f = self.term
        return HyperSeq(lambda k: -f(k), f"-{self.label}")


def constant(c) -> HyperSeq:
    return HyperSeq(lambda k: c + 0 * k, repr(c))


def from_asymptotic(a) -> HyperSeq:
    """Realization ``k -> sum(c_i * k**-q_i)`` of an asymptotic number."""
    pairs = [(float(c), float(q)) for q, c in a.terms]

    def term(k):
        k = np.asarray(k, dtype=float)
        total = np.zeros(k.shape)
        for c, q in pairs:
            total = total + c * k ** (-q)
        return total if total.ndim else float(total)

    return HyperSeq(term, f"realize({a})")


_SEQ_OPS = {"+": operator.add, "-": operator.sub, "*": operator.mul, "×": operator.mul, "−": operator.sub}


def seq_arith(op: str, u: HyperSeq, v: HyperSeq) -> HyperSeq:
    """Termwise ``u op v`` for ``op`` in ``+ - *``."""
    try:
        fn = _SEQ_OPS[op]
    except KeyError:
        raise ValueError(f"unsupported sequence operation {op!r}") from None
    symbol = {"×": "*", "−": "-"}.get(op, op)
    return u._combine(v, fn, symbol)


@dataclass(frozen=True)
class EvalWindow:
    start: int = 1000
    length: int = 1000
    tol: Callable = default_tol

    def __post_init__(self):
        if self.length < 1:
            raise ValueError("window length must be at least 1")
        if self.start < 1:
            raise ValueError("window must start at an index >= 1")

    @property
    def indices(self) -> np.ndarray:
        return np.arange(self.start, self.start + self.length)

    def tolerances(self) -> np.ndarray:
        t = np.asarray(self.tol(self.indices.astype(float)), dtype=float)
        if t.ndim == 0:
            t = np.full(self.length, float(t))
        if np.any(t <= 0):
            raise ValueError("tolerance schedule must be positive")
        return t

    def enlarged(self, factor: int = 2) -> EvalWindow:
        return EvalWindow(self.start, self.length * factor, self.tol)


@dataclass(frozen=True)
class HoldsOnWindow:
    first_index: int


@dataclass(frozen=True)
class FailsRepeatedly:
    witness_indices: tuple


@dataclass(frozen=True)
class Inconclusive:
    stats: dict = field(default_factory=dict)


EventualVerdict = Union[HoldsOnWindow, FailsRepeatedly, Inconclusive]


def _suffix_start(mask: np.ndarray) -> int:
    """Position from which ``mask`` is all true (``len(mask)`` if the last entry is false)."""
    bad = np.flatnonzero(~mask)
    return 0 if bad.size == 0 else int(bad[-1]) + 1


def _spread(indices: np.ndarray, count: int = 3) -> tuple:
    if indices.size <= count:
        return tuple(int(i) for i in indices)
    picks = np.linspace(0, indices.size - 1, count).round().astype(int)
    return tuple(int(indices[p]) for p in picks)


def is_negligible(u: HyperSeq, w: EvalWindow = EvalWindow(),
                  floor: float = APPRECIABLE_FLOOR) -> EventualVerdict:
    """Window test of ``|u(k)| < tol(k)`` for all sufficiently large ``k``.

    * ``HoldsOnWindow`` when the inequality holds on a suffix covering at
      least half the window;
    * ``FailsRepeatedly`` when, on such a suffix, every index violates it with
      ``|u(k)| >= floor``;
    * ``Inconclusive`` otherwise, with summary statistics.
    """
    ks = w.indices
    vals = np.abs(u.values(ks))
    tol = w.tolerances()
    half = w.length // 2
    ok = vals < tol
    start = _suffix_start(ok)
    if start <= half and start < w.length:
        return HoldsOnWindow(int(ks[start]))
    failing = (~ok) & (vals >= floor)
    fstart = _suffix_start(failing)
    if fstart <= half and w.length - fstart >= 3:
        return FailsRepeatedly(_spread(ks[fstart:]))
    return Inconclusive({
        "violations": int((~ok).sum()),
        "appreciable_violations": int(failing.sum()),
        "window": (int(ks[0]), int(ks[-1])),
        "max_abs": float(vals.max()),
        "min_abs": float(vals.min()),
        "last_abs": float(vals[-1]),
    })


# overspill ---------------------------------------------------------------


def _lookahead(k: int) -> int:
    return int(math.log(k)) if k > 1 else 0


class OverspillIndex:
    """Index sequence ``N`` produced by :func:`diagonal_overspill`.

    ``N(k)`` is the largest ``m <= k`` such that

    * ``max(|family(i)(j)| for j in [k, k + log k]) <= 1/i`` for every
      ``i <= m``, and
    * the diagonal entry satisfies ``|family(m)(k)| < tol(k)``;

    or 1 when no such ``m`` exists.  Values are computed in bulk up to a
    horizon that doubles on demand.
    """

    def __init__(self, family: Callable[[int], HyperSeq], tol: Callable = default_tol,
                 horizon: int = 1024):
        self.family = family
        self.tol = tol
        self._members: dict[int, HyperSeq] = {}
        self._table = np.zeros(1, dtype=np.int64)
        self._extend(horizon)

    def member(self, m: int) -> HyperSeq:
        seq = self._members.get(m)
        if seq is None:
            seq = self._members[m] = self.family(m)
        return seq

    def _extend(self, horizon: int) -> None:
        K = horizon
        ks = np.arange(1, K + 1)
        look = np.array([_lookahead(int(k)) for k in ks])
        span = int(look.max()) if look.size else 0
        js = np.arange(1, K + span + 1)
        # first failing i for each k (K + 1 means no failure up to k)
        first_fail = np.full(K, K + 1, dtype=np.int64)
        alive = np.ones(K, dtype=bool)
        for i in range(1, K + 1):
            live = alive[i - 1:]
            if not live.any():
                break
            width = K - i + 1
            vals = np.abs(self.member(i).values(js[i - 1:]))
            window_max = vals[:width].copy()
            for off in range(1, span + 1):
                window_max = np.where(look[i - 1:] >= off,
                                      np.maximum(window_max, vals[off:off + width]), window_max)
            hit = np.flatnonzero(live & (window_max > 1.0 / i)) + (i - 1)
            first_fail[hit] = i
            alive[hit] = False
        table = np.ones(K + 1, dtype=np.int64)
        for pos, k in enumerate(ks):
            upper = min(int(k), int(first_fail[pos]) - 1)
            tk = float(self.tol(float(k)))
            for m in range(upper, 0, -1):
                if abs(float(self.member(m).values(np.array([k]))[0])) < tk:
                    table[k] = m
                    break
        self._table = table

    def __call__(self, k: int) -> int:
        k = int(k)
        if k < 1:
            raise ValueError("indices start at 1")
        if k >= self._table.size:
            self._extend(max(k, 2 * (self._table.size - 1)))
        return int(self._table[k])

    def table(self, k_max: int) -> np.ndarray:
        self(k_max)
        return self._table[1:k_max + 1].copy()


def diagonal_overspill(family: Callable[[int], HyperSeq], tol: Callable = default_tol,
                       horizon: int = 1024) -> HyperSeq:
    """Unbounded index sequence ``N`` along which ``family(N(k))(k)`` stays negligible."""
    index = OverspillIndex(family, tol, horizon)

    def term(k):
        if np.ndim(k):
            return np.array([index(int(j)) for j in np.ravel(k)]).reshape(np.shape(k))
        return index(k)

    seq = HyperSeq(term, "overspill index")
    object.__setattr__(seq, "index", index)
    return seq


def diagonal(family: Callable[[int], HyperSeq], index: HyperSeq) -> HyperSeq:
    """The sequence ``k -> family(index(k))(k)``."""
    def term(k):
        if np.ndim(k):
            return np.array([float(family(int(index(int(j))))(int(j))) for j in np.ravel(k)]).reshape(np.shape(k))
        return family(int(index(k)))(k)

    return HyperSeq(term, f"diagonal along {index.label}")


# index comparison ---------------------------------------------------------


class IndexOrder(enum.Enum):
    EVENTUALLY_LESS = "eventually_less"
    EVENTUALLY_GREATER = "eventually_greater"
    EVENTUALLY_EQUAL = "eventually_equal"
    INCOMPARABLE = "incomparable"


@dataclass(frozen=True)
class IndexComparison:
    verdict: IndexOrder
    witnesses: tuple = ()


def compare_indices(n: HyperSeq, n_prime: HyperSeq, w: EvalWindow = EvalWindow()) -> IndexComparison:
    """Eventual order of ``n'`` relative to ``n`` from the sign of ``n'(k) - n(k)``."""
    ks = w.indices
    diff = np.sign(n_prime.values(ks) - n.values(ks))
    half = w.length // 2
    for sign, verdict in ((1, IndexOrder.EVENTUALLY_GREATER), (-1, IndexOrder.EVENTUALLY_LESS),
                          (0, IndexOrder.EVENTUALLY_EQUAL)):
        start = _suffix_start(diff == sign)
        if start <= half and start < w.length:
            return IndexComparison(verdict, (int(ks[start]),))
    pos = ks[diff > 0]
    neg = ks[diff < 0]
    return IndexComparison(IndexOrder.INCOMPARABLE, _spread(pos) + _spread(neg))
