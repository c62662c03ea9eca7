"""Command-line front end.

Commands::

    hyperlab field eval EXPR [--precision BITS]
    hyperlab check (--family NAME | --term EXPR | --partial-sum EXPR) [--limit EXPR]
                   [--domain A B] [--probes SPEC ...] [--schedule N ...]
                   [--format json|text|csv] [--out PATH]
    hyperlab cases [--only NAME ...] [--format json|text|csv] [--out DIR] [--gnuplot]

Exit codes: 0 success, 1 a study headline failed (``cases``), 2 usage or input
error, 3 mathematical domain error (division by zero, unlimited argument),
4 I/O failure.
"""

from __future__ import annotations

import argparse
import re
import sys
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Optional, Sequence

from .errors import DivisionByZero, DomainViolation, HyperlabError, ParseError, UnlimitedArgument

EXIT_OK, EXIT_USAGE, EXIT_MATH, EXIT_IO = 0, 2, 3, 4

FIELD_GRAMMAR = """\
field grammar: rationals and decimals, the infinitesimal e, + - * / ^, parentheses,
and an optional truncation marker O(e^q).  Powers take constant exponents; a
fractional power is allowed only on a power of e.  Example: 1/(1-e) + O(e^3)"""

FAMILY_GRAMMAR = """\
family grammar: numbers, pi, symbols n and x, + - * / ^, and the functions
sin cos tan arctan exp log sqrt abs.  --term gives a series term u_n(x) (the
family is s_n = u_0 + ... + u_n); --partial-sum gives s_n(x) directly, e.g.
--partial-sum "(1-x)^n".  --limit gives s(x) in terms of x; without it the
remainder uses a deep partial sum as surrogate.

probe syntax: X0 for a standard point, X0+C*n^-P or X0-n^-P for a tied
offset, with suffix @untied to use n^2 in place of n.  Examples: 0.5, 0+n^-1,
1-2*n^-1/2, 0+n^-1@untied"""


@dataclass(frozen=True)
class RunConfig:
    subcommand: str
    family: Optional[str] = None
    term: Optional[str] = None
    partial_sum: Optional[str] = None
    limit: Optional[str] = None
    domain: Optional[tuple] = None
    probes: tuple = ()
    n_schedule: Optional[tuple] = None
    format: str = "text"
    out: Optional[str] = None
    precision: Optional[int] = None
    only: tuple = ()
    gnuplot: bool = False
    singular_points: tuple = ()
    deterministic: bool = field(default=True, init=False)

    def __post_init__(self):
        if self.n_schedule is not None:
            ns = self.n_schedule
            if any(b <= a for a, b in zip(ns, ns[1:])):
                raise UsageError("--schedule must be strictly increasing")
        if self.precision is not None and self.precision < 64:
            raise UsageError("--precision must be at least 64 bits")


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


_PROBE = re.compile(
    r"^\s*(?P<x0>[-+]?(?:\d+\.?\d*|\.\d+)(?:[eE][-+]?\d+)?|[-+]?pi)\s*"
    r"(?:(?P<sign>[-+])\s*(?:(?P<c>\d+\.?\d*(?:[eE][-+]?\d+)?)\s*\*\s*)?n\s*\^\s*-\s*\(?(?P<p>\d+(?:/\d+)?)\)?)?"
    r"\s*(?P<untied>@untied)?\s*$")


def parse_probe(text: str):
    from math import pi

    from .convergence import Probe

    m = _PROBE.match(text)
    if not m:
        raise UsageError(f"bad probe {text!r}; expected e.g. 0.5, 0+n^-1, 1-2*n^-1/2")
    x0s = m["x0"]
    x0 = (-pi if x0s.startswith("-") else pi) if x0s.lstrip("+-") == "pi" else float(x0s)
    if m["sign"] is None:
        if m["untied"]:
            raise UsageError("@untied needs an offset")
        return Probe.standard(x0)
    c = float(m["c"] or 1.0) * (1 if m["sign"] == "+" else -1)
    return Probe.offset(x0, c, Fraction(m["p"]), tied=not m["untied"])


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="hyperlab", description="Asymptotic-field arithmetic and uniform-convergence experiments.",
                formatter_class=argparse.RawDescriptionHelpFormatter,
                epilog="exit codes: 0 ok, 1 study failed, 2 usage or input error, 3 math domain error, 4 I/O error")
    sub = p.add_subparsers(dest="subcommand", required=True, parser_class=_Parser)

    fld = sub.add_parser("field", help="asymptotic-field arithmetic", epilog=FIELD_GRAMMAR,
                         formatter_class=argparse.RawDescriptionHelpFormatter)
    fsub = fld.add_subparsers(dest="action", required=True, parser_class=_Parser)
    ev = fsub.add_parser("eval", help="evaluate and print the normal form", epilog=FIELD_GRAMMAR,
                         formatter_class=argparse.RawDescriptionHelpFormatter)
    ev.add_argument("expr")
    ev.add_argument("--precision", type=int, help="binary float coefficients with this many bits (>= 64)")

    chk = sub.add_parser("check", help="classify convergence of a family", epilog=FAMILY_GRAMMAR,
                         formatter_class=argparse.RawDescriptionHelpFormatter)
    src = chk.add_mutually_exclusive_group(required=True)
    src.add_argument("--family", help="built-in family name")
    src.add_argument("--term", help="series term u_n(x)")
    src.add_argument("--partial-sum", dest="partial_sum", help="partial sum s_n(x)")
    chk.add_argument("--limit", help="closed-form limit s(x)")
    chk.add_argument("--domain", nargs=2, type=float, metavar=("A", "B"))
    chk.add_argument("--probes", nargs="+", default=[], metavar="SPEC")
    chk.add_argument("--singular", nargs="+", type=float, default=[], metavar="X",
                     help="interior points that get offset probes by default")
    chk.add_argument("--schedule", nargs="+", type=int, metavar="N")
    chk.add_argument("--format", choices=("json", "text", "csv"), default="text")
    chk.add_argument("--out")
    chk.add_argument("--precision", type=int, help="accepted for symmetry; checks run in binary64")

    cs = sub.add_parser("cases", help="run the case-study suite")
    cs.add_argument("--only", nargs="+", default=[], metavar="STUDY")
    cs.add_argument("--format", choices=("json", "text", "csv"), default="text")
    cs.add_argument("--out", help="output directory (stdout summary when omitted)")
    cs.add_argument("--gnuplot", action="store_true", help="also write .dat files for numeric tables")
    cs.add_argument("--precision", type=int)
    return p


def config_from_args(ns: argparse.Namespace) -> RunConfig:
    name = ns.subcommand
    if name == "field":
        return RunConfig("field eval", term=ns.expr, precision=ns.precision)
    if name == "check":
        return RunConfig(
            "check", family=ns.family, term=ns.term, partial_sum=ns.partial_sum, limit=ns.limit,
            domain=tuple(ns.domain) if ns.domain else None,
            probes=tuple(parse_probe(s) for spec in ns.probes for s in spec.split(",") if s.strip()),
            n_schedule=tuple(ns.schedule) if ns.schedule else None, format=ns.format, out=ns.out,
            precision=ns.precision, singular_points=tuple(ns.singular))
    return RunConfig("cases", format=ns.format, out=ns.out, only=tuple(ns.only), gnuplot=ns.gnuplot,
                     precision=ns.precision)


# commands ----------------------------------------------------------------------


def cmd_field_eval(expr: str, precision: int | None = None) -> str:
    from .asymptotic import parse, render
    from .scalars import RATIONAL, binary_float

    fld = RATIONAL if precision is None else binary_float(precision)
    return render(parse(expr, fld))


def _family(cfg: RunConfig):
    from .families import builtin, from_expressions

    if cfg.family is not None:
        if cfg.limit is not None:
            raise UsageError("--limit applies only to --term or --partial-sum families")
        try:
            return builtin(cfg.family, cfg.domain)
        except KeyError as exc:
            raise UsageError(exc.args[0]) from None
    domain = cfg.domain or (0.0, 1.0)
    return from_expressions(domain, term=cfg.term, partial_sum=cfg.partial_sum, limit=cfg.limit,
                            singular_points=cfg.singular_points)


def _emit(text: str, out: str | None) -> None:
    if out is None:
        sys.stdout.write(text)
        return
    path = Path(out)
    if path.parent and not path.parent.exists():
        path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(text)


def cmd_check(cfg: RunConfig) -> int:
    from . import reporting
    from .convergence import DEFAULT_SCHEDULE, Mode, classify_convergence

    f = _family(cfg)
    schedule = cfg.n_schedule or DEFAULT_SCHEDULE
    try:
        report = classify_convergence(f, cfg.probes or None, schedule)
    except ValueError as exc:
        if isinstance(exc, HyperlabError) and not isinstance(exc, DomainViolation):
            raise
        raise UsageError(str(exc)) from None
    if cfg.format == "json":
        text = reporting.dumps(reporting.verdict_document(report, f.domain, schedule))
    elif cfg.format == "csv":
        text = reporting.verdict_csv(report)
    else:
        text = reporting.verdict_text(report, f.domain)
        if cfg.term is not None and report.verdict_B.mode is Mode.NOT_POINTWISE:
            text += ("hint: --term is a series term; the series appears to diverge. "
                     "Use --partial-sum for a sequence of functions f_n(x).\n")
    _emit(text, cfg.out)
    return EXIT_OK


def cmd_cases(cfg: RunConfig) -> int:
    from . import reporting
    from .studies import STUDIES, run_studies

    unknown = [s for s in cfg.only if s not in STUDIES]
    if unknown:
        raise UsageError(f"unknown study {unknown[0]!r}; valid studies: {', '.join(STUDIES)}")
    reports = run_studies(cfg.only or None)
    if cfg.out is None:
        for r in reports:
            if cfg.format == "json":
                sys.stdout.write(reporting.dumps(reporting.study_document(r)))
            elif cfg.format == "csv":
                for t in r.tables:
                    sys.stdout.write(f"# {r.study_name}: {t.name}\n" + reporting.table_csv(t))
            else:
                sys.stdout.write(reporting.study_text(r))
    else:
        out = Path(cfg.out)
        for r in reports:
            reporting.write_study_files(r, out, cfg.format, cfg.gnuplot)
        summary = reporting.summary_document(reports)
        (out / "summary.json").write_text(reporting.dumps(summary))
    ok = all(r.passed for r in reports)
    if cfg.out is not None or cfg.format == "text":
        sys.stderr.write(f"{sum(r.passed for r in reports)}/{len(reports)} studies passed\n")
    return EXIT_OK if ok else 1


def main(argv: Sequence[str] | None = None) -> int:
    try:
        ns = build_parser().parse_args(argv)
        cfg = config_from_args(ns)
        if cfg.subcommand == "field eval":
            print(cmd_field_eval(cfg.term, cfg.precision))
            return EXIT_OK
        if cfg.subcommand == "check":
            return cmd_check(cfg)
        return cmd_cases(cfg)
    except UsageError as exc:
        print(f"hyperlab: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except ParseError as exc:
        print(f"hyperlab: parse error: {exc.annotated()}", file=sys.stderr)
        return EXIT_USAGE
    except (DivisionByZero, UnlimitedArgument) as exc:
        print(f"hyperlab: math error: {exc}", file=sys.stderr)
        return EXIT_MATH
    except OSError as exc:
        print(f"hyperlab: I/O error: {exc}", file=sys.stderr)
        return EXIT_IO
    except HyperlabError as exc:
        print(f"hyperlab: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except SystemExit as exc:  # --help
        return int(exc.code or 0)


if __name__ == "__main__":
    sys.exit(main())
