"""Run the case-study suite and write every report format to one directory.

    python3 scripts/run_cases.py --out results
"""

import argparse
import sys
import time
from pathlib import Path

from hyperlab import reporting
from hyperlab.studies import STUDIES, run_studies


def main(argv=None):
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--out", default="results")
    p.add_argument("--only", nargs="+", choices=sorted(STUDIES))
    args = p.parse_args(argv)

    out = Path(args.out)
    t0 = time.perf_counter()
    reports = run_studies(args.only)
    for r in reports:
        for fmt in ("json", "text", "csv"):
            reporting.write_study_files(r, out, fmt, gnuplot=(fmt == "csv"))
        print(reporting.study_text(r))
    (out / "summary.json").write_text(reporting.dumps(reporting.summary_document(reports)))
    passed = sum(r.passed for r in reports)
    print(f"{passed}/{len(reports)} studies passed in {time.perf_counter() - t0:.1f}s; files in {out}/")
    return 0 if passed == len(reports) else 1


if __name__ == "__main__":
    sys.exit(main())
