import json
import math

import pytest

from hyperlab import reporting
from hyperlab.studies import (HISTORICAL_SINE_TAIL, STUDIES, TRANSFER_POINTS, Headline, cauchy_series_terms,
                              cauchy_series_value, pythagorean_majorant, pythagorean_residue, riemann_block,
                              roundoff_ratio, run_studies, sine_tail_value)


@pytest.fixture(scope="module")
def reports():
    return {name: fn() for name, fn in STUDIES.items()}


def test_all_studies_pass(reports):
    failed = {n: [h.name for h in r.headlines if not h.passed] + [c.name for c in r.checks if not c.passed]
              for n, r in reports.items() if not r.passed}
    assert not failed


def test_every_headline_is_tagged(reports):
    for r in reports.values():
        assert r.headlines
        for h in r.headlines:
            assert h.source in ("reference", "oracle", "identity")
            assert h.tolerance >= 0


def test_headline_validation():
    with pytest.raises(ValueError):
        Headline("x", 1.0, 1.0, 0.1, "guess")
    with pytest.raises(ValueError):
        Headline("x", 1.0, 1.0, -1.0, "oracle")
    assert not Headline("x", 1.0, 2.0, 0.5, "oracle").passed


def test_cauchy_series_terms():
    assert cauchy_series_terms(4)[1:] == [pytest.approx(1 / 18), pytest.approx(-1 / 600)]
    assert cauchy_series_value(2) == pytest.approx(0.570796, abs=1e-6)
    assert cauchy_series_value(4) == pytest.approx(0.624685, abs=1e-6)


def test_historical_figure_is_recorded_not_matched(reports):
    r = reports["cauchy_series"]
    assert abs(r.headline("10 terms vs quadrature").measured - HISTORICAL_SINE_TAIL) > 2e-4
    assert any(str(HISTORICAL_SINE_TAIL) in n for n in reports["sawtooth"].notes)


def test_riemann_sum_examples():
    assert riemann_block(100, 1) == 0.0
    assert riemann_block(10**4, 2) == pytest.approx(0.6593, abs=1e-3)


def test_riemann_error_shrinks_with_n(reports):
    rows = [r for r in reports["riemann_sum"].table("riemann").rows if r[0] == 10]
    errs = [abs(r[4]) for r in sorted(rows, key=lambda r: r[1])]
    assert errs == sorted(errs, reverse=True)


def test_sawtooth_block_sweep_approaches_oracle(reports):
    rows = reports["sawtooth"].table("block").rows
    best = [abs(r[3] - sine_tail_value()) for r in rows if r[0] == max(x[0] for x in rows)]
    assert max(best) < 1e-3


def test_pythagoras_rational_exact():
    r = pythagorean_residue(0, ((1, 1), (3, 2)))
    assert r.terms == ((0, 1),)


def test_majorant_dominates_every_residue_coefficient():
    for center, inf_part in TRANSFER_POINTS:
        r = pythagorean_residue(center, inf_part)
        m = pythagorean_majorant(center, inf_part, field=r.field)
        assert all(float(m.coefficient(q)) >= abs(float(c)) for q, c in r.terms)
        _, ratio = roundoff_ratio(center, inf_part)
        assert 0 <= ratio < 8


def test_reports_serialise(reports):
    for r in reports.values():
        doc = json.loads(reporting.dumps(reporting.study_document(r)))
        assert doc["schema"] == 1 and doc["study_name"] == r.study_name
        assert "PASS" in reporting.study_text(r)


def test_run_studies_rejects_unknown():
    with pytest.raises(KeyError, match="cauchy_series"):
        run_studies(["nonexistent"])


def test_sine_tail_oracle_close_to_known_value():
    assert sine_tail_value() == pytest.approx(0.6247132564277, abs=1e-12)
    assert math.isclose(STUDIES["cauchy_series"]().headline("2 terms").expected, math.pi / 2 - 1)
