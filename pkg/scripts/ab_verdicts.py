"""Side-by-side check_A / check_B verdicts for the built-in families.

    python3 scripts/ab_verdicts.py [--json verdicts.json]
"""

import argparse
import json
import sys
import time

from hyperlab import reporting
from hyperlab.convergence import classify_convergence
from hyperlab.families import BUILTINS, builtin


def main(argv=None):
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--families", nargs="+", default=list(BUILTINS), choices=sorted(BUILTINS))
    p.add_argument("--json", help="also write the full verdict documents here")
    args = p.parse_args(argv)

    docs, rows = {}, []
    for name in args.families:
        f = builtin(name)
        t0 = time.perf_counter()
        rep = classify_convergence(f)
        dt = time.perf_counter() - t0
        a, b = rep.verdict_A, rep.verdict_B
        Ns = " ".join("-" if r.witness else str(r.N) for r in a.results)
        w = b.witness
        rows.append((name, f"[{f.domain[0]:g}, {f.domain[1]:g}]", "uniform" if a.uniform else "not uniform", Ns,
                     b.mode.value, w.probe.label if w else "", f"{w.shadow_estimate:+.6f}" if w else "",
                     "yes" if rep.agree else "NO", f"{dt:.1f}s"))
        docs[name] = reporting.verdict_document(rep, f.domain, b.evidence[0].ns if b.evidence else ())
    header = ("family", "domain", "check_A", "N(eps)", "check_B", "witness", "shadow", "agree", "time")
    widths = [max(len(str(r[i])) for r in rows + [header]) for i in range(len(header))]
    for r in [header] + rows:
        print("  ".join(str(c).ljust(w) for c, w in zip(r, widths)).rstrip())
    if args.json:
        with open(args.json, "w") as fh:
            json.dump(docs, fh, sort_keys=True, indent=2)
    return 0 if all(r[7] == "yes" for r in rows) else 1


if __name__ == "__main__":
    sys.exit(main())
