import csv
import io
import json
import math
from fractions import Fraction

import numpy as np

from hyperlab import reporting
from hyperlab.convergence import Probe, classify_convergence
from hyperlab.families import builtin
from hyperlab.studies import StudyReport, Table, Headline


def test_to_plain_handles_numeric_types():
    doc = reporting.to_plain({"a": np.float64(1.5), "b": np.int64(3), "c": Fraction(1, 3), "d": math.nan,
                              "e": (np.bool_(True),), "p": Probe.offset(0.0, 1.0, "1/2")})
    assert doc == {"a": 1.5, "b": 3, "c": "1/3", "d": None, "e": [True],
                   "p": {"x0": 0.0, "c": 1.0, "p": "1/2", "tied": True, "label": "x = 0 + n^-1/2"}}


def test_dumps_is_sorted_and_strict():
    text = reporting.dumps({"b": 1, "a": 2})
    assert text.index('"a"') < text.index('"b"')


def test_verdict_outputs():
    f = builtin("geometric")
    rep = classify_convergence(f)
    doc = json.loads(reporting.dumps(reporting.verdict_document(rep, f.domain, (1000, 10**4, 10**5, 10**6))))
    assert doc["schema"] == 1 and doc["verdict_B"]["mode"] == "pointwise_only"
    assert doc["verdict_B"]["witness"]["probe"]["label"] == "x = 0 + n^-1"
    rows = list(csv.reader(io.StringIO(reporting.verdict_csv(rep))))
    assert rows[0] == ["family", "probe", "n", "x", "remainder", "status"]
    assert len(rows) == 1 + sum(len(t.ns) for t in rep.verdict_B.evidence)
    assert "witness x = 0 + n^-1" in reporting.verdict_text(rep, f.domain)


def test_study_files(tmp_path):
    r = StudyReport("demo", {"n": 3}, (Headline("h", 1.0, 1.0, 0.0, "identity"),),
                    tables=(Table("t", ("n", "value"), ((1, 0.5), (2, 0.25))), Table("s", ("label",), (("a",),))))
    written = reporting.write_study_files(r, tmp_path, "csv", gnuplot=True)
    names = sorted(p.name for p in written)
    assert names == ["demo__s.csv", "demo__t.csv", "demo__t.dat"]
    dat = (tmp_path / "demo__t.dat").read_text().splitlines()
    assert dat[0].startswith("#") and dat[2] == "1.0 0.5"
