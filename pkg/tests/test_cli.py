import json

import pytest

from hyperlab.cli import RunConfig, UsageError, main, parse_probe


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


@pytest.mark.parametrize("expr, expected", [
    ("(1+e)*(1-e)", "1 - 1*e^2"),
    ("1/(1-e) + O(e^3)", "1 + 1*e^1 + 1*e^2 + 1*e^3 (+O(e^3))"),
    ("1/e - 1/e", "0"),
])
def test_field_eval(capsys, expr, expected):
    code, out, _ = run(capsys, "field", "eval", expr)
    assert code == 0 and out.strip() == expected


def test_field_eval_errors(capsys):
    code, _, err = run(capsys, "field", "eval", "1 + * e")
    assert code == 2 and "column 5" in err and "^" in err
    code, _, err = run(capsys, "field", "eval", "1/(e-e)")
    assert code == 3
    code, _, _ = run(capsys, "field", "eval", "e", "--precision", "32")
    assert code == 2
    code, out, _ = run(capsys, "field", "eval", "1/3", "--precision", "64")
    assert code == 0 and out.startswith("0.333")
    code, out, _ = run(capsys, "field", "eval", "(1+e)^2", "--precision", "128")
    assert code == 0 and out.strip() == "1.0 + 2.0*e^1 + 1.0*e^2"


def test_usage_errors(capsys):
    assert run(capsys)[0] == 2
    assert run(capsys, "check")[0] == 2
    assert run(capsys, "check", "--family", "nope")[0] == 2
    assert run(capsys, "check", "--family", "arctan", "--probes", "5")[0] == 2
    assert run(capsys, "check", "--partial-sum", "x/", "--domain", "0", "1")[0] == 2
    assert run(capsys, "check", "--family", "x_over_n", "--schedule", "10", "5", "1")[0] == 2


def test_help_exits_zero(capsys):
    assert main(["check", "--help"]) == 0
    assert "probe syntax" in capsys.readouterr().out


def test_check_sawtooth(capsys):
    code, out, _ = run(capsys, "check", "--family", "sawtooth", "--domain", "0", "3.14159", "--format", "json")
    doc = json.loads(out)
    assert code == 0 and doc["verdict_B"]["mode"] == "pointwise_only"
    assert doc["verdict_B"]["witness"]["shadow_estimate"] == pytest.approx(0.6247, abs=1e-3)


def test_check_partial_sum_examples(capsys):
    code, out, _ = run(capsys, "check", "--partial-sum", "x/n", "--domain", "0", "1")
    assert code == 0 and "check_B: uniform" in out
    code, out, _ = run(capsys, "check", "--partial-sum", "(1-x)^n", "--domain", "0", "1", "--format", "json")
    w = json.loads(out)["verdict_B"]["witness"]
    assert abs(w["shadow_estimate"]) == pytest.approx(0.3679, abs=1e-3)


def test_check_term_hint_for_divergent_series(capsys):
    code, out, _ = run(capsys, "check", "--term", "x/n", "--domain", "0", "1")
    assert code == 0 and "hint" in out


def test_check_csv_to_file(tmp_path, capsys):
    path = tmp_path / "sub" / "r.csv"
    code, _, _ = run(capsys, "check", "--family", "arctan", "--probes", "0+n^-1,0.5", "--format", "csv",
                     "--out", str(path))
    lines = path.read_text().splitlines()
    assert code == 0 and lines[0].startswith("family,probe,n") and len(lines) == 1 + 2 * 4


def test_cases_only(capsys):
    code, out, _ = run(capsys, "cases", "--only", "cauchy_series")
    assert code == 0 and out.count("study ") == 1
    code, _, err = run(capsys, "cases", "--only", "nonexistent")
    assert code == 2 and "cauchy_series" in err


def test_cases_json_files(tmp_path, capsys):
    code, _, _ = run(capsys, "cases", "--only", "cauchy_series", "order_and_reciprocal", "--format", "json",
                     "--out", str(tmp_path))
    assert code == 0
    assert sorted(p.name for p in tmp_path.iterdir()) == ["cauchy_series.json", "order_and_reciprocal.json",
                                                          "summary.json"]
    assert json.loads((tmp_path / "summary.json").read_text())["passed"] is True


def test_cases_io_error(tmp_path, capsys):
    blocker = tmp_path / "file"
    blocker.write_text("x")
    code, _, err = run(capsys, "cases", "--only", "cauchy_series", "--format", "json", "--out", str(blocker))
    assert code == 4 and "I/O" in err


@pytest.mark.parametrize("text, x0, c, p, tied", [
    ("0.5", 0.5, 0.0, 1, True), ("0+n^-1", 0.0, 1.0, 1, True), ("1-2*n^-1/2", 1.0, -2.0, 0.5, True),
    ("0+n^-(1/2)@untied", 0.0, 1.0, 0.5, False), ("-pi + n^-2", -3.141592653589793, 1.0, 2, True),
])
def test_parse_probe(text, x0, c, p, tied):
    pr = parse_probe(text)
    assert (pr.x0, pr.c, float(pr.p), pr.tied) == (x0, c, p, tied)


def test_parse_probe_rejects_garbage():
    with pytest.raises(UsageError):
        parse_probe("x+1")
    with pytest.raises(UsageError):
        parse_probe("0.5@untied")


def test_run_config_invariants():
    assert RunConfig("cases").deterministic
    with pytest.raises(UsageError):
        RunConfig("check", n_schedule=(10, 10, 100))
    with pytest.raises(UsageError):
        RunConfig("field eval", precision=53)
