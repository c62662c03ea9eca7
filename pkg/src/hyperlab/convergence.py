"""Remainders, Cauchy blocks, and the two uniform-convergence tests.

``check_A`` is the quantifier test: for each epsilon find ``N`` with
``sup_x |r_m(x)| < eps`` for every ``m > N`` on a grid.  ``check_B`` is the
infinitesimal test: evaluate remainders at hyperreal probes such as
``x = x0 + c * n**-p`` along an increasing index schedule and ask whether
every trace is negligible.  The two are equivalent in theory;
``classify_convergence`` runs both and reports whether they agree.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Sequence

import numpy as np

from .errors import BadIndices, DomainViolation, ProbeOutsideDomain
from .families import FunctionFamily
from .sequences import APPRECIABLE_FLOOR, default_tol
from .summation import RunningSum

DEFAULT_SCHEDULE = (10**3, 10**4, 10**5, 10**6)
DEFAULT_EPS = (1e-1, 1e-2)
DEFAULT_GRID = 201
DEFAULT_REFINE = 10
DEFAULT_N_MAX = 2000
DEFAULT_OFFSET_POWERS = (Fraction(1), Fraction(1, 2), Fraction(2))


def surrogate_depth(n: int) -> int:
    """Partial-sum depth standing in for the limit when none is known."""
    return max(10 * n, n + 10**4)


# remainder and block -----------------------------------------------------


@dataclass(frozen=True)
class RemainderValue:
    value: float
    n: int
    x: float
    depth: Optional[int] = None  # surrogate depth, None when the limit is closed form


def remainder_detail(f: FunctionFamily, n: int, x: float, depth: int | None = None) -> RemainderValue:
    f.check_domain(x)
    if f.limit is not None and depth is None:
        return RemainderValue(float(f.limit(x)) - f.s(n, x), n, x)
    N = depth or surrogate_depth(n)
    if f.term is not None:
        value = f.block(n + 1, N + 1, x)
    else:
        value = f.s(N, x) - f.s(n, x)
    return RemainderValue(value, n, x, N)


def remainder(f: FunctionFamily, n: int, x: float) -> float:
    """``r_n(x) = s(x) - s_n(x)``."""
    return remainder_detail(f, n, x).value


def cauchy_block(f: FunctionFamily, n: int, n_prime: int, x: float) -> float:
    """``u_n(x) + u_{n+1}(x) + ... + u_{n'-1}(x)``, summed with compensation."""
    if n_prime <= n:
        raise BadIndices(f"need n' > n, got n={n}, n'={n_prime}")
    f.check_domain(x)
    return f.block(n, n_prime, x)


# check A ---------------------------------------------------------------------


@dataclass(frozen=True)
class AWitness:
    eps: float
    x: float
    m: int
    value: float


@dataclass(frozen=True)
class AResult:
    eps: float
    N: Optional[int]
    N_coarse: int
    witness: Optional[AWitness] = None

    @property
    def ok(self) -> bool:
        return self.witness is None


@dataclass(frozen=True)
class ACheck:
    results: tuple
    grid_size: int
    refined_grid_size: int
    N_max: int
    surrogate_depth: Optional[int]

    @property
    def uniform(self) -> bool:
        return all(r.ok for r in self.results)

    @property
    def witness(self) -> Optional[AWitness]:
        return next((r.witness for r in self.results if r.witness is not None), None)


def _grid(f: FunctionFamily, size: int) -> np.ndarray:
    a, b = f.domain
    return np.linspace(a, b, size) if b > a else np.array([a])


def remainder_grid(f: FunctionFamily, xs: np.ndarray, N_max: int) -> tuple[np.ndarray, Optional[int]]:
    """Matrix ``R[m-1, j] = r_m(xs[j])`` for ``m = 1..N_max``."""
    ms = np.arange(1, N_max + 1)
    if f.limit is not None:
        with np.errstate(all="ignore"):
            lim = np.broadcast_to(np.asarray(f.limit(xs), dtype=float), xs.shape)
        return lim[None, :] - f.partial_sums_grid(ms, xs), None
    depth = surrogate_depth(N_max)
    if f.term is None:
        top = f.partial_sums_grid(np.array([depth]), xs)[0]
        return top[None, :] - f.partial_sums_grid(ms, xs), depth
    R = np.empty((N_max, xs.size))
    acc = RunningSum(xs.shape)
    acc.add(f.tail_grid(N_max + 1, depth + 1, xs))
    for m in range(N_max, 0, -1):
        R[m - 1] = acc.value
        with np.errstate(all="ignore"):
            acc.add(np.broadcast_to(f.term(m, xs), xs.shape))
    return R, depth


def _sup_trace(f: FunctionFamily, xs: np.ndarray, N_max: int):
    R, depth = remainder_grid(f, xs, N_max)
    absR = np.abs(R)
    absR[~np.isfinite(absR)] = np.inf
    arg = absR.argmax(axis=1)
    return absR[np.arange(N_max), arg], xs[arg], depth


def _last_failure(sup: np.ndarray, eps: float) -> int:
    bad = np.flatnonzero(sup >= eps)
    return int(bad[-1]) + 1 if bad.size else 0


def check_A(f: FunctionFamily, eps_list: Sequence[float] = DEFAULT_EPS,
            x_grid_size: int = DEFAULT_GRID, N_max: int = DEFAULT_N_MAX,
            refine: int = DEFAULT_REFINE) -> ACheck:
    """Grid semi-decision of ``(for all eps)(exists N)(for all m > N) sup|r_m| < eps``.

    The search runs on a uniform grid of ``x_grid_size`` points and on a
    ``refine``-times finer grid.  An epsilon fails when the finer grid still
    violates the bound at ``m = N_max``, or when refinement more than doubles
    the required ``N`` (the threshold is running away with resolution).
    """
    if not eps_list or any(e <= 0 for e in eps_list):
        raise ValueError("eps_list must be nonempty and positive")
    if x_grid_size < 2:
        raise ValueError("x_grid_size must be at least 2")
    coarse = _grid(f, x_grid_size)
    fine = _grid(f, (x_grid_size - 1) * refine + 1)
    sup_c, _, depth = _sup_trace(f, coarse, N_max)
    sup_f, arg_f, _ = _sup_trace(f, fine, N_max)
    results = []
    for eps in eps_list:
        nc = _last_failure(sup_c, eps)
        nf = _last_failure(sup_f, eps)
        witness = None
        if nf >= N_max or nf > 2 * nc + 10:
            m = min(nf, N_max)
            witness = AWitness(eps, float(arg_f[m - 1]), m, float(sup_f[m - 1]))
        results.append(AResult(eps, None if witness else nf, nc, witness))
    return ACheck(tuple(results), coarse.size, fine.size, N_max, depth)


# check B ---------------------------------------------------------------------


@dataclass(frozen=True)
class Probe:
    """A hyperreal input ``x0 + c * nu**-p``; ``c == 0`` is a standard point.

    ``nu`` is the remainder index ``n`` itself when ``tied`` (the classical
    ``x = 1/n``), otherwise the larger infinite index ``n**2``.
    """

    x0: float
    c: float = 0.0
    p: Fraction = Fraction(1)
    tied: bool = True

    def __post_init__(self):
        p = Fraction(self.p)
        if self.c != 0 and p <= 0:
            raise ValueError("offset exponent p must be positive")
        object.__setattr__(self, "p", p)

    @classmethod
    def standard(cls, x0: float) -> Probe:
        return cls(float(x0))

    @classmethod
    def offset(cls, x0: float, c: float = 1.0, p=1, tied: bool = True) -> Probe:
        if c == 0:
            raise ValueError("offset probes need c != 0")
        return cls(float(x0), float(c), Fraction(p), tied)

    @property
    def is_standard(self) -> bool:
        return self.c == 0

    def at(self, n: int) -> float:
        if self.is_standard:
            return self.x0
        nu = float(n) if self.tied else float(n) ** 2
        return self.x0 + self.c * nu ** (-float(self.p))

    @property
    def label(self) -> str:
        if self.is_standard:
            return f"x = {self.x0:g}"
        index = "n" if self.tied else "(n^2)"
        sign = "+" if self.c > 0 else "-"
        mag = abs(self.c)
        coeff = "" if mag == 1 else f"{mag:g}*"
        return f"x = {self.x0:g} {sign} {coeff}{index}^-{self.p}"


class Mode(enum.Enum):
    UNIFORM = "uniform"
    POINTWISE_ONLY = "pointwise_only"
    NOT_POINTWISE = "not_pointwise"


class TraceStatus(enum.Enum):
    NEGLIGIBLE = "negligible"
    APPRECIABLE = "appreciable"
    INCONCLUSIVE = "inconclusive"


@dataclass(frozen=True)
class ProbeTrace:
    probe: Probe
    ns: tuple
    xs: tuple
    remainders: tuple
    depths: tuple
    status: TraceStatus
    shadow_estimate: float
    stabilization: float


@dataclass(frozen=True)
class Witness:
    probe: Probe
    shadow_estimate: float
    n_used: int
    stabilization: float


@dataclass(frozen=True)
class UniformVerdict:
    mode: Mode
    witness: Optional[Witness]
    evidence: tuple = field(default=())


def _validate_schedule(ns: Sequence[int]) -> tuple:
    ns = tuple(int(n) for n in ns)
    if len(ns) < 3 or any(b <= a for a, b in zip(ns, ns[1:])):
        raise ValueError("n_schedule must hold at least 3 increasing values")
    if ns[-1] < 1000 * ns[0]:
        raise ValueError("n_schedule must span at least three decades")
    return ns


def stabilized(last: float, previous: float) -> bool:
    """Accept ``last`` as a shadow when the final decade moved it little."""
    return abs(last - previous) < max(1e-3, 0.05 * abs(last))


def classify_trace(ns, values, floor: float = APPRECIABLE_FLOOR, tol=default_tol) -> TraceStatus:
    last, prev = values[-1], values[-2]
    if all(abs(v) < tol(n) for n, v in zip(ns[-2:], values[-2:])):
        return TraceStatus.NEGLIGIBLE
    if np.isfinite(last) and stabilized(last, prev) and abs(last) >= floor:
        return TraceStatus.APPRECIABLE
    return TraceStatus.INCONCLUSIVE


def probe_trace(f: FunctionFamily, probe: Probe, n_schedule: Sequence[int],
                floor: float = APPRECIABLE_FLOOR, tol=default_tol) -> ProbeTrace:
    xs, values, depths = [], [], []
    for n in n_schedule:
        x = probe.at(n)
        if not f.contains(x):
            raise ProbeOutsideDomain(f"probe {probe.label} gives x={x!r} outside {list(f.domain)} at n={n}")
        r = remainder_detail(f, n, x)
        xs.append(x)
        values.append(r.value)
        depths.append(r.depth)
    status = classify_trace(n_schedule, values, floor, tol)
    return ProbeTrace(probe, tuple(n_schedule), tuple(xs), tuple(values), tuple(depths), status,
                      values[-1], abs(values[-1] - values[-2]))


def check_B(f: FunctionFamily, probes: Sequence[Probe], n_schedule: Sequence[int] = DEFAULT_SCHEDULE,
            floor: float = APPRECIABLE_FLOOR) -> UniformVerdict:
    """Infinitesimal test: every remainder trace must be negligible.

    The witness is the first probe (in the given order) whose trace is not
    negligible, preferring appreciable traces over inconclusive ones.  A
    failing standard point means the family does not even converge pointwise.
    """
    if not probes:
        raise ValueError("at least one probe is required")
    ns = _validate_schedule(n_schedule)
    traces = tuple(probe_trace(f, p, ns, floor) for p in probes)

    def pick(candidates):
        bad = [t for t in candidates if t.status is TraceStatus.APPRECIABLE]
        bad = bad or [t for t in candidates if t.status is TraceStatus.INCONCLUSIVE]
        return bad[0] if bad else None

    standard = pick([t for t in traces if t.probe.is_standard])
    offset = pick([t for t in traces if not t.probe.is_standard])
    chosen, mode = (standard, Mode.NOT_POINTWISE) if standard else (offset, Mode.POINTWISE_ONLY)
    if chosen is None:
        return UniformVerdict(Mode.UNIFORM, None, traces)
    witness = Witness(chosen.probe, chosen.shadow_estimate, ns[-1], chosen.stabilization)
    return UniformVerdict(mode, witness, traces)


def verify_witness(f: FunctionFamily, witness: Witness, factor: int = 10) -> tuple[float, bool]:
    """Recompute the witness remainder at ``factor`` times the last index."""
    n = witness.n_used * factor
    value = remainder(f, n, witness.probe.at(n))
    allowed = 10 * max(witness.stabilization, np.finfo(float).eps * max(1.0, abs(value)))
    return value, bool(abs(value - witness.shadow_estimate) <= allowed)


def default_probes(f: FunctionFamily, powers=DEFAULT_OFFSET_POWERS) -> list[Probe]:
    """Endpoints and midpoint, then tied offsets into the domain from each endpoint
    and from both sides of every declared singular point."""
    a, b = f.domain
    probes = [Probe.standard(a), Probe.standard((a + b) / 2), Probe.standard(b)]
    if b == a:
        return probes[:1]
    anchors = [(a, 1.0), (b, -1.0)]
    for s in f.singular_points:
        if a < s < b:
            anchors += [(s, 1.0), (s, -1.0)]
    # keep offsets inside the domain for n >= 1000
    reach = (b - a)
    for x0, c in anchors:
        for p in powers:
            if 1000.0 ** (-float(p)) <= reach:
                probes.append(Probe.offset(x0, c, p))
    return probes


# proof decomposition ----------------------------------------------------------


@dataclass(frozen=True)
class DecompositionRow:
    n: int
    alpha: float
    delta_partial: float
    delta_remainder: float
    delta_sum: float
    partial_flag: str
    remainder_flag: str
    sum_flag: str


def size_flag(value: float, n: int, floor: float = APPRECIABLE_FLOOR, tol=default_tol) -> str:
    if abs(value) < tol(n):
        return "negligible"
    if abs(value) >= floor:
        return "appreciable"
    return "small"


def sum_theorem_decomposition(f: FunctionFamily, x0: float, p=1,
                              n_schedule: Sequence[int] = DEFAULT_SCHEDULE[:3]) -> list[DecompositionRow]:
    """Split ``s(x0 + a) - s(x0)`` into partial-sum and remainder increments, ``a = n**-p``."""
    f.check_domain(x0)
    rows = []
    for n in n_schedule:
        alpha = float(n) ** (-float(Fraction(p)))
        x1 = x0 + alpha
        if not f.contains(x1):
            raise DomainViolation(f"x0 + n^-p = {x1} leaves the domain at n={n}")
        ds_n = f.s(n, x1) - f.s(n, x0)
        dr_n = remainder(f, n, x1) - remainder(f, n, x0)
        if f.limit is not None:
            ds = float(f.limit(x1)) - float(f.limit(x0))
        else:
            ds = ds_n + dr_n
        rows.append(DecompositionRow(n, alpha, ds_n, dr_n, ds,
                                     size_flag(ds_n, n), size_flag(dr_n, n), size_flag(ds, n)))
    return rows


# both tests ------------------------------------------------------------------


@dataclass(frozen=True)
class ConvergenceReport:
    family: str
    verdict_A: ACheck
    verdict_B: UniformVerdict
    agree: bool

    @property
    def uniform_A(self) -> bool:
        return self.verdict_A.uniform

    @property
    def uniform_B(self) -> bool:
        return self.verdict_B.mode is Mode.UNIFORM


def classify_convergence(f: FunctionFamily, probes: Sequence[Probe] | None = None,
                         n_schedule: Sequence[int] = DEFAULT_SCHEDULE,
                         eps_list: Sequence[float] = DEFAULT_EPS,
                         x_grid_size: int = DEFAULT_GRID, N_max: int = DEFAULT_N_MAX) -> ConvergenceReport:
    a = check_A(f, eps_list, x_grid_size, N_max)
    b = check_B(f, list(probes) if probes else default_probes(f), n_schedule)
    return ConvergenceReport(f.name, a, b, a.uniform == (b.mode is Mode.UNIFORM))
