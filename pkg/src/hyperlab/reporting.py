"""Serialisation of study reports and convergence verdicts.

JSON output is deterministic: keys are sorted, floats use ``repr`` and
non-finite values become ``null``.  Every document carries ``schema: 1``.
"""

from __future__ import annotations

import csv
import enum
import io
import json
import math
from dataclasses import fields, is_dataclass
from fractions import Fraction
from pathlib import Path

import numpy as np

from .convergence import ConvergenceReport, Probe
from .studies import StudyReport, Table

SCHEMA_VERSION = 1


def to_plain(obj):
    """Convert dataclasses, enums, numpy scalars and fractions into JSON-ready data."""
    if isinstance(obj, Probe):
        return {"x0": obj.x0, "c": obj.c, "p": str(obj.p), "tied": obj.tied, "label": obj.label}
    if is_dataclass(obj) and not isinstance(obj, type):
        return {f.name: to_plain(getattr(obj, f.name)) for f in fields(obj)}
    if isinstance(obj, enum.Enum):
        return obj.value
    if isinstance(obj, dict):
        return {str(k): to_plain(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [to_plain(v) for v in obj]
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, Fraction):
        return str(obj)
    if isinstance(obj, (float, np.floating)):
        v = float(obj)
        return v if math.isfinite(v) else None
    return obj


def dumps(doc: dict) -> str:
    return json.dumps(doc, sort_keys=True, indent=2, allow_nan=False) + "\n"


# studies ------------------------------------------------------------------------


def study_document(report: StudyReport) -> dict:
    doc = to_plain(report)
    doc["passed"] = report.passed
    for h, src in zip(doc["headlines"], report.headlines):
        h["error"] = to_plain(src.error)
        h["passed"] = src.passed
    doc["schema"] = SCHEMA_VERSION
    return doc


def summary_document(reports) -> dict:
    return {
        "schema": SCHEMA_VERSION,
        "passed": all(r.passed for r in reports),
        "studies": [{"study_name": r.study_name, "passed": r.passed,
                     "headlines": sum(1 for _ in r.headlines),
                     "failed": [h.name for h in r.headlines if not h.passed]
                     + [c.name for c in r.checks if not c.passed]} for r in reports],
    }


def _fmt(v) -> str:
    if isinstance(v, (float, np.floating)):
        return f"{float(v):.10g}"
    return str(v)


def _align(header, rows) -> list[str]:
    cells = [list(map(str, header))] + [[_fmt(v) for v in row] for row in rows]
    widths = [max(len(r[i]) for r in cells) for i in range(len(header))]
    return ["  ".join(c.rjust(w) for c, w in zip(row, widths)).rstrip() for row in cells]


def study_text(report: StudyReport) -> str:
    lines = [f"study {report.study_name}: {'PASS' if report.passed else 'FAIL'}"]
    lines += [f"  {k} = {v}" for k, v in sorted(report.parameters.items())]
    rows = [(h.name, h.measured, h.expected, h.tolerance, h.error, h.source,
             "ok" if h.passed else "FAIL") for h in report.headlines]
    lines += ["  " + s for s in _align(("headline", "measured", "expected", "tol", "error", "source", ""), rows)]
    for c in report.checks:
        lines.append(f"  [{'ok' if c.passed else 'FAIL'}] {c.name} ({c.detail})")
    for t in report.tables:
        lines.append(f"  table {t.name}")
        lines += ["    " + s for s in _align(t.columns, t.rows)]
    lines += [f"  note: {n}" for n in report.notes]
    return "\n".join(lines) + "\n"


def table_csv(table: Table) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(table.columns)
    for row in table.rows:
        w.writerow([repr(float(v)) if isinstance(v, (float, np.floating)) else v for v in row])
    return buf.getvalue()


def table_gnuplot(table: Table, title: str = "") -> str | None:
    """Whitespace-separated numeric columns with a commented header, or None if non-numeric."""
    if not all(isinstance(v, (int, float, np.integer, np.floating)) for row in table.rows for v in row):
        return None
    lines = [f"# {title or table.name}", "# " + " ".join(c.replace(" ", "_") for c in table.columns)]
    lines += [" ".join(repr(float(v)) for v in row) for row in table.rows]
    return "\n".join(lines) + "\n"


def write_study_files(report: StudyReport, out: Path, fmt: str, gnuplot: bool = False) -> list[Path]:
    out.mkdir(parents=True, exist_ok=True)
    written = []
    if fmt == "json":
        p = out / f"{report.study_name}.json"
        p.write_text(dumps(study_document(report)))
        written.append(p)
    elif fmt == "text":
        p = out / f"{report.study_name}.txt"
        p.write_text(study_text(report))
        written.append(p)
    elif fmt == "csv":
        for t in report.tables:
            p = out / f"{report.study_name}__{t.name}.csv"
            p.write_text(table_csv(t))
            written.append(p)
    else:
        raise ValueError(f"unknown format {fmt!r}")
    if gnuplot:
        for t in report.tables:
            data = table_gnuplot(t, f"{report.study_name}: {t.name}")
            if data is not None:
                p = out / f"{report.study_name}__{t.name}.dat"
                p.write_text(data)
                written.append(p)
    return written


# convergence verdicts ------------------------------------------------------------


def verdict_document(report: ConvergenceReport, domain, schedule) -> dict:
    a, b = report.verdict_A, report.verdict_B
    w = b.witness
    return to_plain({
        "schema": SCHEMA_VERSION,
        "family": report.family,
        "domain": list(domain),
        "n_schedule": list(schedule),
        "agree": report.agree,
        "verdict_A": {
            "uniform": a.uniform,
            "grid_size": a.grid_size,
            "refined_grid_size": a.refined_grid_size,
            "N_max": a.N_max,
            "surrogate_depth": a.surrogate_depth,
            "results": a.results,
        },
        "verdict_B": {
            "mode": b.mode,
            "witness": None if w is None else {
                "probe": w.probe, "shadow_estimate": w.shadow_estimate,
                "n_used": w.n_used, "stabilization": w.stabilization},
            "traces": [{"probe": t.probe, "status": t.status, "shadow_estimate": t.shadow_estimate,
                        "stabilization": t.stabilization,
                        "points": [{"n": n, "x": x, "remainder": r}
                                   for n, x, r in zip(t.ns, t.xs, t.remainders)]}
                       for t in b.evidence],
        },
    })


def verdict_text(report: ConvergenceReport, domain) -> str:
    a, b = report.verdict_A, report.verdict_B
    lines = [f"family {report.family} on [{domain[0]:g}, {domain[1]:g}]",
             f"check_A ({a.grid_size}/{a.refined_grid_size} grid points, N_max={a.N_max}): "
             f"{'uniform' if a.uniform else 'not uniform'}"]
    for r in a.results:
        if r.witness is None:
            lines.append(f"  eps={r.eps:g}: N={r.N}")
        else:
            wa = r.witness
            lines.append(f"  eps={r.eps:g}: fails at x={wa.x:.6g}, m={wa.m}, |r_m|={wa.value:.6g}")
    lines.append(f"check_B: {b.mode.value}")
    if b.witness is not None:
        w = b.witness
        lines.append(f"  witness {w.probe.label}: shadow ~ {w.shadow_estimate:.7g} "
                     f"(stabilization {w.stabilization:.2g} at n={w.n_used})")
    for t in b.evidence:
        trace = ", ".join(f"{r:.3g}" for r in t.remainders)
        lines.append(f"  {t.probe.label:<22} {t.status.value:<12} [{trace}]")
    lines.append(f"agree: {'yes' if report.agree else 'no'}")
    return "\n".join(lines) + "\n"


def verdict_csv(report: ConvergenceReport) -> str:
    """One row per (probe, n)."""
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["family", "probe", "n", "x", "remainder", "status"])
    for t in report.verdict_B.evidence:
        for n, x, r in zip(t.ns, t.xs, t.remainders):
            w.writerow([report.family, t.probe.label, n, repr(float(x)), repr(float(r)), t.status.value])
    return buf.getvalue()
