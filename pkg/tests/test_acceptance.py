"""Acceptance criteria 1-10, one test per criterion.

Each test records its outcome through the ``record`` fixture; the terminal
summary then prints one ``ACCEPTANCE criterion N: PASS/FAIL`` line per criterion.
"""

import functools
import math
import random
import subprocess
import sys
import time
from fractions import Fraction

import numpy as np
from overspill_reference import brute_force_index

from hyperlab.asymptotic import (AsymptoticNumber, EqualWithinOrder, Magnitude, Ordering, classify, compare,
                                 epsilon, inv, shadow)
from hyperlab.convergence import Mode, check_B, classify_convergence, default_probes, sum_theorem_decomposition
from hyperlab.families import builtin
from hyperlab.quadrature import sine_integral_tail
from hyperlab.sequences import HyperSeq, IndexOrder, compare_indices, default_tol, diagonal, diagonal_overspill
from hyperlab.studies import (HISTORICAL_SINE_TAIL, ROUNDOFF_ALLOWANCE, TRANSFER_POINTS, cauchy_series_value,
                              riemann_extrapolated, roundoff_ratio)

SINE_TAIL = 0.6247132  # int_1^inf sin t / t dt, to the printed digits
INV_E = math.exp(-1)
e = epsilon()


def _elapsed(t0):
    return time.perf_counter() - t0


# 1 ----------------------------------------------------------------------------------


def test_criterion_1_sine_integral_triple(record):
    t0 = time.perf_counter()
    series = cauchy_series_value(10)
    quad = sine_integral_tail().value
    riemann = riemann_extrapolated(10**4, 10**3)
    dt = _elapsed(t0)
    routes = {"series": series, "quadrature": quad, "riemann": riemann}
    pairwise = max(abs(a - b) for a in routes.values() for b in routes.values())
    historical = abs(HISTORICAL_SINE_TAIL - quad)
    ok = (pairwise < 1e-2 and abs(series - quad) < 1e-9 and abs(quad - SINE_TAIL) < 1e-7
          and 2.5e-4 < historical < 3.5e-4 and dt < 30)
    record(1, ok, f"series={series:.10f} quad={quad:.10f} riemann={riemann:.10f} "
                  f"|series-quad|={abs(series - quad):.1e} historical 0.6244 off by {historical:.1e} ({dt:.1f}s)")
    assert ok


# 2 ----------------------------------------------------------------------------------


def test_criterion_2_geometric_witness(record):
    t0 = time.perf_counter()
    n = 10**6
    value = (1 - 1 / n) ** n
    geo = builtin("geometric")
    verdict = check_B(geo, default_probes(geo))
    w = verdict.witness
    restricted = builtin("geometric_restricted")
    restricted_mode = check_B(restricted, default_probes(restricted)).mode
    dt = _elapsed(t0)
    probe_ok = w is not None and w.probe.x0 == 0 and w.probe.c == 1 and w.probe.p == 1 and w.probe.tied
    # the remainder s - s_n at x = 1/n is -(1 - 1/n)^n; its magnitude is compared with 1/e
    shadow_ok = w is not None and abs(abs(w.shadow_estimate) - INV_E) < 1e-3
    ok = (abs(value - INV_E) < 1e-6 and verdict.mode is Mode.POINTWISE_ONLY and probe_ok and shadow_ok
          and restricted_mode is Mode.UNIFORM and dt < 5)
    record(2, ok, f"(1-1/n)^n={value:.8f}, [0,1]: {verdict.mode.value} witness "
                  f"{w.probe.label if w else None} shadow {w.shadow_estimate if w else float('nan'):.6f}, "
                  f"[0.1,1]: {restricted_mode.value} ({dt:.1f}s)")
    assert ok


# 3 ----------------------------------------------------------------------------------


def test_criterion_3_arctan_witness(record):
    t0 = time.perf_counter()
    f = builtin("arctan")
    verdict = check_B(f, default_probes(f))
    dt = _elapsed(t0)
    w = verdict.witness
    err = abs(abs(w.shadow_estimate) - math.pi / 4) if w else math.inf
    ok = verdict.mode is Mode.POINTWISE_ONLY and err < 1e-6 and dt < 5
    record(3, ok, f"{verdict.mode.value}, witness {w.probe.label if w else None}, "
                  f"|shadow - pi/4|={err:.1e} ({dt:.1f}s)")
    assert ok


# 4 ----------------------------------------------------------------------------------

EXPECTED_UNIFORM = {
    "x_over_n": True, "sin_over_square": True, "exp_series": True, "geometric_restricted": True,
    "geometric": False, "arctan": False, "sawtooth": False, "geometric_series": False,
}


def test_criterion_4_A_B_equivalence(record):
    t0 = time.perf_counter()
    rows = []
    for name, expected in EXPECTED_UNIFORM.items():
        rep = classify_convergence(builtin(name))
        rows.append((name, rep.uniform_A, rep.uniform_B, expected))
    dt = _elapsed(t0)
    agree = sum(a == b == x for _, a, b, x in rows)
    ok = agree == len(EXPECTED_UNIFORM) and dt < 60
    bad = [r[0] for r in rows if not (r[1] == r[2] == r[3])]
    record(4, ok, f"{agree}/{len(rows)} families agree with each other and the expected verdict"
                  f"{' (mismatch: ' + ', '.join(bad) + ')' if bad else ''} ({dt:.1f}s)")
    assert ok


# 5 ----------------------------------------------------------------------------------

_EXPONENTS = sorted({Fraction(k, d) for d in (1, 2) for k in range(-4, 7)})
_LIMITED_EXPONENTS = [q for q in _EXPONENTS if q >= 0]


def _random_number(rng, limited=False):
    pool = _LIMITED_EXPONENTS if limited else _EXPONENTS
    exps = rng.sample(pool, rng.randint(0, 4))
    return AsymptoticNumber(tuple((q, Fraction(rng.randint(-20, 20), rng.randint(1, 12))) for q in exps))


def test_criterion_5_field_properties(record):
    rng = random.Random(20261018)
    zero = AsymptoticNumber()
    failures = {"assoc": 0, "distrib": 0, "order": 0, "inverse": 0, "shadow": 0, "eps": 0}
    t0 = time.perf_counter()
    for _ in range(10**4):
        a, b, c = _random_number(rng), _random_number(rng), _random_number(rng)
        if (a + b) + c != a + (b + c) or (a * b) * c != a * (b * c):
            failures["assoc"] += 1
        if a * (b + c) != a * b + a * c:
            failures["distrib"] += 1
        if a != b:
            lo, hi = (a, b) if compare(a, b) is Ordering.LESS else (b, a)
            if compare(lo + c, hi + c) is not Ordering.LESS:
                failures["order"] += 1
            if compare(c, zero) is Ordering.GREATER and compare(lo * c, hi * c) is not Ordering.LESS:
                failures["order"] += 1
        if a and (a * inv(a)).terms != ((0, 1),):
            failures["inverse"] += 1
        la, lb = _random_number(rng, True), _random_number(rng, True)
        if shadow(la + lb) != shadow(la) + shadow(lb) or shadow(la * lb) != shadow(la) * shadow(lb):
            failures["shadow"] += 1
    for _ in range(10**3):
        r = Fraction(rng.randint(1, 10**6), rng.randint(1, 10**6))
        if compare(e, AsymptoticNumber.constant(r)) is not Ordering.LESS:
            failures["eps"] += 1
    dt = _elapsed(t0)
    ok = not any(failures.values()) and dt < 10
    record(5, ok, f"10^4 triples + 10^3 rationals, failures {failures} ({dt:.1f}s)")
    assert ok


# 6 ----------------------------------------------------------------------------------


def test_criterion_6_transfer_spot_check(record):
    worst, exact_points = 0.0, 0
    ok = True
    for center, infinitesimal in TRANSFER_POINTS:
        r, ratio = roundoff_ratio(center, infinitesimal, order=8)
        ok &= r.order == 8 and ratio <= ROUNDOFF_ALLOWANCE
        if r.field.exact:
            exact_points += 1
            ok &= r.terms == ((0, 1),)
        worst = max(worst, ratio)
    record(6, ok, f"{len(TRANSFER_POINTS)} points, {exact_points} exactly 1 in the rational field; "
                  f"float residues at most {worst:.2f} round-offs of the majorant (limit {ROUNDOFF_ALLOWANCE})")
    assert ok


# 7 ----------------------------------------------------------------------------------


def _ordered_elements(rng, count):
    # all elements share order 6 and exponents <= 5, so distinct elements differ within order
    seen, out = set(), []
    while len(out) < count:
        terms = {Fraction(rng.randint(-4, 10), 2): Fraction(rng.randint(-9, 9), rng.randint(1, 5))
                 for _ in range(rng.randint(0, 4))}
        x = AsymptoticNumber(tuple(terms.items()), 6)
        if x not in seen:
            seen.add(x)
            out.append(x)
    return out


def _cmp(a, b):
    r = compare(a, b)
    return 0 if isinstance(r, EqualWithinOrder) else r.value


def test_criterion_7_reciprocal_and_order(record):
    rng = random.Random(7)
    unlimited = classify(inv(e)) is Magnitude.UNLIMITED and classify(inv(e) - inv(e**2)) is Magnitude.UNLIMITED
    xs = sorted(_ordered_elements(rng, 10**3), key=functools.cmp_to_key(_cmp))
    adjacent = all(compare(a, b) is Ordering.LESS for a, b in zip(xs, xs[1:]))
    pairs_ok = True
    for _ in range(2 * 10**4):
        i, j = sorted(rng.sample(range(len(xs)), 2))
        fwd, back = compare(xs[i], xs[j]), compare(xs[j], xs[i])
        pairs_ok &= fwd is Ordering.LESS and back is Ordering.GREATER
    k = HyperSeq(lambda k: np.asarray(k, dtype=float), "k")
    alt = HyperSeq(lambda k: np.asarray(k, dtype=float) + (-1.0) ** np.asarray(k), "k+(-1)^k")
    idx = compare_indices(k, alt)
    ok = unlimited and adjacent and pairs_ok and idx.verdict is IndexOrder.INCOMPARABLE
    record(7, ok, f"unlimited classifications {unlimited}, 10^3 elements strictly ordered {adjacent}, "
                  f"2*10^4 random pairs consistent {pairs_ok}, compare_indices {idx.verdict.value}")
    assert ok


# 8 ----------------------------------------------------------------------------------

OVERSPILL_FAMILIES = {
    "m/k": lambda m: HyperSeq(lambda k, m=m: m / np.asarray(k, dtype=float), f"{m}/k"),
    "0": lambda m: HyperSeq(lambda k: 0.0 * np.asarray(k, dtype=float), "0"),
    "1/m": lambda m: HyperSeq(lambda k, m=m: 1.0 / m + 0.0 * np.asarray(k, dtype=float), f"1/{m}"),
}


def test_criterion_8_overspill(record):
    details, ok = [], True
    ks = np.arange(10**3, 10**4 + 1)
    sample = list(range(1, 301)) + list(range(10**3, 10**4 + 1, 997))
    for name, fam in OVERSPILL_FAMILIES.items():
        N = diagonal_overspill(fam)
        table = N.index.table(10**4)
        monotone = bool(np.all(np.diff(table) >= 0))
        grows = table[-1] > table[99] > 1
        diag = np.abs(diagonal(fam, N).values(ks))
        below = bool(np.all(diag < default_tol(ks)))
        brute = all(brute_force_index(fam, k) == table[k - 1] for k in sample)
        ok &= monotone and grows and below and brute
        details.append(f"{name}: N(10^2)={table[99]} N(10^4)={table[-1]} diag max {diag.max():.1e} "
                       f"brute-force {'match' if brute else 'MISMATCH'}")
    record(8, ok, "; ".join(details))
    assert ok


# 9 ----------------------------------------------------------------------------------


def test_criterion_9_proof_decomposition(record):
    smooth = sum_theorem_decomposition(builtin("sin_over_square"), 1.0, 1, (10**2, 10**3, 10**4))
    last = smooth[-1]
    smooth_ok = (abs(last.delta_partial) < 1e-2 and abs(last.delta_remainder) < 1e-2
                 and all(abs(b.delta_partial) < abs(a.delta_partial)
                         and abs(b.delta_remainder) < abs(a.delta_remainder) for a, b in zip(smooth, smooth[1:])))
    saw = sum_theorem_decomposition(builtin("sawtooth"), 0.0)
    dr = [r.delta_remainder for r in saw]
    saw_ok = (all(abs(v - 0.6247) < 1e-2 for v in dr[-2:])
              and all(abs(r.delta_partial) > 0.1 and abs(r.delta_sum) > 0.1 for r in saw))
    ok = smooth_ok and saw_ok
    record(9, ok, f"sin kx/k^2 at x0=1, n=10^4: dS={last.delta_partial:.1e}, dR={last.delta_remainder:.1e}; "
                  f"sawtooth at x0=0: dR={', '.join(f'{v:.5f}' for v in dr)}, "
                  f"dS={saw[-1].delta_partial:.4f}")
    assert ok


# 10 ---------------------------------------------------------------------------------


def _run_cases(out):
    proc = subprocess.run([sys.executable, "-m", "hyperlab", "cases", "--format", "json", "--out", str(out)],
                          capture_output=True, text=True, timeout=600)
    assert proc.returncode == 0, proc.stderr
    return {p.name: p.read_bytes() for p in sorted(out.iterdir())}


def test_criterion_10_determinism(record, tmp_path):
    first = _run_cases(tmp_path / "run1")
    second = _run_cases(tmp_path / "run2")
    same = first == second and len(first) > 1
    record(10, same, f"{len(first)} JSON files, byte-identical: {same}")
    assert same
