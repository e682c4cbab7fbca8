import json
import subprocess
import sys
from fractions import Fraction

import pytest

from cfconv import cli
from cfconv.cfseq import gf_from_json
from cfconv.convolve import InternalConsistencyError
from cfconv.ratcore import normalize, parse_rational, series_expand

from conftest import brute_binomial_conv, kbonacci_loop


def run(capsys, *argv):
    code = cli.main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_terms(capsys):
    assert run(capsys, "terms", "--kbonacci", "3", "-n", "7")[1].split() == "0 1 1 2 4 7 13".split()
    assert run(capsys, "terms", "--seq", "fibonacci", "-n", "5")[1].split() == ["0", "1", "1", "2", "3"]
    assert run(capsys, "terms", "--gf", "x/(1-x)", "-n", "3")[1].split() == ["0", "1", "1"]
    code, out, _ = run(capsys, "terms", "--gf", "1/(2-x)", "-n", "3", "--format", "json")
    assert code == 0 and json.loads(out) == ["1/2", "1/4", "1/8"]


def test_terms_from_json_file(tmp_path, capsys):
    path = tmp_path / "seq.json"
    path.write_text(json.dumps({"recurrence": ["2", "1"], "initial": ["0", "1"]}))
    assert run(capsys, "terms", "--json", str(path), "-n", "5")[1].split() == ["0", "1", "2", "5", "12"]
    path.write_text(json.dumps({"gf": {"num": "x", "den": "1-x-x^2-x^3"}}))
    assert run(capsys, "terms", "--json", str(path), "-n", "5")[1].split() == ["0", "1", "1", "2", "4"]


def test_parse_error_exit_code(capsys):
    code, _, err = run(capsys, "terms", "--gf", "x/(1-x", "-n", "3")
    assert code == 1
    assert "position 6" in err and "')'" in err


@pytest.mark.parametrize(
    "argv",
    [
        ["terms", "-n", "3"],
        ["terms", "--seq", "nosuch", "-n", "3"],
        ["crossconv", "--seq", "fibonacci"],
        ["selfconv", "--gf", "x/(1-x)"],
        ["selfconv", "--seq", "fibonacci", "--guard", "-1"],
        ["table-self", "--kmax", "1"],
        ["nosuchcommand"],
        ["terms", "--kbonacci", "two"],
    ],
)
def test_usage_errors(capsys, argv):
    assert run(capsys, *argv)[0] == 1


def test_selfconv_text(capsys):
    code, out, _ = run(capsys, "selfconv", "--seq", "fibonacci")
    assert code == 0
    first, meta = out.splitlines()
    assert first == "2*x^2/(1 - 3*x - 2*x^2 + 4*x^3)"
    assert "order_bound=3" in meta and "order_found=3" in meta and "guard_verified=10" in meta
    assert run(capsys, "selfconv", "--gf", "1/(1-x)")[1].splitlines()[0] == "1/(1 - 2*x)"


def test_selfconv_json_schema(capsys):
    code, out, _ = run(capsys, "selfconv", "--kbonacci", "3", "--format", "json")
    doc = json.loads(out)
    assert set(doc) == {"gf", "order_bound", "order_found", "terms_generated", "guard_verified", "elapsed_ms"}
    assert all(isinstance(c, str) for c in doc["gf"]["num"] + doc["gf"]["den"])
    assert doc["order_bound"] == 6 and doc["terms_generated"] == 23
    t = kbonacci_loop(3, 23)
    assert series_expand(gf_from_json(doc), 23) == brute_binomial_conv(t, t, 23)


def test_format_agreement(capsys):
    text = run(capsys, "selfconv", "--kbonacci", "4")[1].splitlines()[0]
    doc = json.loads(run(capsys, "selfconv", "--kbonacci", "4", "--format", "json")[1])
    assert parse_rational(text) == gf_from_json(doc)


def test_selfconv_latex(capsys):
    out = run(capsys, "selfconv", "--seq", "fibonacci", "--format", "latex")[1]
    assert out.strip() == r"\[ \frac{2\,x^{2}}{1 - 3\,x - 2\,x^{2} + 4\,x^{3}} \]"


def test_crossconv(capsys):
    out = run(capsys, "crossconv", "--seq", "fibonacci", "--gf", "1/(1-x)")[1]
    assert out.splitlines()[0] == "x/(1 - 3*x + x^2)"
    code, out, _ = run(capsys, "crossconv", "--kbonacci", "2", "--kbonacci", "3", "--format", "json")
    doc = json.loads(out)
    assert code == 0 and doc["order_bound"] == 6 and len(doc["gf"]["den"]) - 1 <= 6
    self_out = run(capsys, "selfconv", "--seq", "lucas")[1].splitlines()[0]
    cross_out = run(capsys, "crossconv", "--seq", "lucas", "--seq", "lucas")[1].splitlines()[0]
    assert series_expand(parse_rational(self_out), 30) == series_expand(parse_rational(cross_out), 30)


def test_internal_error_exit_code(capsys, monkeypatch):
    def boom(*args):
        raise InternalConsistencyError("bound violated", [Fraction(0), Fraction(2)], 3)

    monkeypatch.setattr(cli, "self_convolution_identity", boom)
    code, _, err = run(capsys, "selfconv", "--seq", "fibonacci")
    assert code == 3
    assert "bound violated" in err and "terms: 0 2" in err


def test_guess_command(tmp_path, capsys):
    path = tmp_path / "t.json"
    path.write_text(json.dumps(["0", "1", "1", "2", "4", "7", "13"]))
    code, out, _ = run(capsys, "guess", str(path), "--max-order", "3")
    assert code == 0 and out.splitlines()[0] == "x/(1 - x - x^2 - x^3)"
    path.write_text("[1, 2, 4, 8, 16]")
    doc = json.loads(run(capsys, "guess", str(path), "--max-order", "2", "--format", "json")[1])
    assert doc["order_found"] == 1 and doc["recurrence"] == ["2"]
    assert gf_from_json(doc) == parse_rational("1/(1-2x)")


def test_guess_not_found_and_insufficient(tmp_path, capsys):
    path = tmp_path / "t.json"
    path.write_text(json.dumps(["0", "1", "1", "2", "3", "5", "8", "14"]))
    code, out, _ = run(capsys, "guess", str(path), "--max-order", "3")
    assert code == 2 and "order <= 3" in out
    doc = json.loads(run(capsys, "guess", str(path), "--max-order", "3", "--format", "json")[1])
    assert doc == {"found": False, "max_order": 3, "terms_used": 8}
    assert run(capsys, "guess", str(path), "--max-order", "4")[0] == 1


def test_guess_plain_text_terms(tmp_path, capsys):
    path = tmp_path / "t.txt"
    path.write_text("1/2 1/4 1/8\n1/16 1/32")
    first = run(capsys, "guess", str(path))[1].splitlines()[0]
    assert first == "(1/2)/(1 - 1/2*x)"
    assert parse_rational(first) == parse_rational("1/(2 - x)")


def test_rec2gf_and_gf2rec(tmp_path, capsys):
    path = tmp_path / "s.json"
    path.write_text(json.dumps({"recurrence": ["1", "1", "1"], "initial": ["0", "1", "1"]}))
    assert run(capsys, "rec2gf", "--json", str(path))[1].strip() == "x/(1 - x - x^2 - x^3)"
    out = run(capsys, "gf2rec", "--gf", "2*x^2/(1-3*x-2*x^2+4*x^3)", "--format", "json")[1]
    assert json.loads(out) == {"recurrence": ["3", "2", "-4"], "initial": ["0", "0", "2"]}
    out = run(capsys, "gf2rec", "--gf", "x/(1-x-x^2)")[1]
    assert out.splitlines() == ["a(n) = a(n-1) + a(n-2)", "initial: [0, 1]"]


def test_table_self_small(capsys, tmp_path):
    out_path = tmp_path / "self.txt"
    assert run(capsys, "table-self", "--kmax", "4", "--out", str(out_path))[0] == 0
    lines = [l for l in out_path.read_text().splitlines() if l.startswith("k=")]
    assert [l.split(":")[0] for l in lines] == ["k=2", "k=3", "k=4"]
    single = run(capsys, "selfconv", "--kbonacci", "2")[1].splitlines()[0]
    assert lines[0] == f"k=2: {single}"


def test_table_cross_order_and_consistency():
    report = cli.table_cross(3)
    assert [p for p, _, _ in report.entries] == [(2, 2), (2, 3), (3, 3)]
    self_report = cli.table_self(2)
    assert report.entries[0][1].gf == self_report.entries[0][1].gf


def test_table_outputs_deterministic_across_jobs(tmp_path, capsys):
    paths = []
    for jobs, fmt in [("1", "json"), ("2", "json"), ("1", "text"), ("3", "text")]:
        p = tmp_path / f"t{jobs}.{fmt}"
        assert run(capsys, "table-cross", "--kmax", "4", "--format", fmt, "--jobs", jobs, "--out", str(p))[0] == 0
        paths.append(p.read_bytes())
    assert paths[0] == paths[1]
    assert paths[2] == paths[3]
    doc = json.loads(paths[0])
    assert doc["totals"] == {"count": 6}
    assert [(e["k1"], e["k2"]) for e in doc["entries"]] == [(2, 2), (2, 3), (2, 4), (3, 3), (3, 4), (4, 4)]


def test_table_latex_document(capsys):
    out = run(capsys, "table-self", "--kmax", "3", "--format", "latex")[1]
    assert out.startswith(r"\documentclass{article}")
    assert out.rstrip().endswith(r"\end{document}")
    assert out.count(r"\[") == 2
    assert out.count("{") == out.count("}")


def test_table_timings_flag(capsys):
    out = run(capsys, "table-self", "--kmax", "2", "--format", "json", "--timings")[1]
    doc = json.loads(out)
    assert "elapsed_ms" in doc["entries"][0]["result"] and "elapsed_ms" in doc["totals"]


def test_jobs_env_default(monkeypatch):
    monkeypatch.setenv("CFCONV_JOBS", "3")
    args = cli.build_parser().parse_args(["table-self", "--kmax", "2"])
    assert args.jobs == 3


def test_module_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "cfconv", "terms", "--seq", "lucas", "-n", "4"],
        capture_output=True,
        text=True,
        check=True,
    )
    assert proc.stdout.split() == ["2", "1", "3", "4"]
