import io
import json

import pytest

from conftest import TUTORIAL
from finprob.cli import main

DIE = str(TUTORIAL / "die.prob")
BAD = str(TUTORIAL / "bad.prob")
BITS = str(TUTORIAL / "bits.prob")


def run(*argv):
    out, err = io.StringIO(), io.StringIO()
    code = main(list(argv), out, err)
    return code, out.getvalue(), err.getvalue()


def test_query_rational():
    assert run("query", DIE, "P(A|B)") == (0, "1/3\n", "")
    assert run("query", DIE, "P(A)") == (0, "1/2\n", "")


def test_query_decimal_and_json():
    code, out, _ = run("query", DIE, "P(A|B)", "--decimal")
    assert out == "1/3 ~ 0.33333333333333333333\n"
    code, out, _ = run("query", DIE, "P(A|B)", "--decimal", "--format", "json")
    assert json.loads(out) == {
        "query": "P(A | B)", "kind": "rational", "value": "1/3",
        "decimal": "0.33333333333333333333",
    }


def test_query_booleans():
    assert run("query", DIE, "partition(Thirds)") == (0, "true\n", "")
    assert run("query", DIE, "indep(A, B)") == (1, "false\n", "")
    code, out, _ = run("query", BITS, "mutindep(First, Second, Differ)")
    assert code == 1
    assert out == "false (violating subset: First, Second, Differ)\n"
    code, out, _ = run("query", DIE, "mutindep(Thirds, A)", "--format", "json")
    assert json.loads(out)["violating"] == ["Thirds[1]", "Thirds[2]"]
    code, out, _ = run("query", DIE, "sigma({}, A)")
    assert code == 1 and out.startswith("false (omega: ")


def test_query_errors_go_to_stderr():
    code, out, err = run("query", DIE, "P(A | A & ~A)")
    assert (code, out) == (3, "")
    assert err.startswith("finprob: query:1:9: ConditionOnNull: ")
    code, out, err = run("query", DIE, "P(A |)")
    assert (code, out) == (3, "")
    assert err.startswith("finprob: query:1:6: ProbSyntaxError: expected one of")


def test_check():
    code, out, err = run("check", DIE)
    assert code == 0 and err == ""
    assert out.splitlines()[0] == "space die: 6 outcomes, 6 events"
    code, out, err = run("check", BAD)
    assert (code, out) == (3, "")
    assert "normalization: weights sum to 5/6, not 1" in err
    code, out, err = run("check", BAD, "--format", "json")
    record = json.loads(err)
    assert record["valid"] is False and record["normalized_ok"] is False


def test_input_errors(tmp_path):
    code, out, err = run("check", str(tmp_path / "missing.prob"))
    assert (code, out) == (3, "")
    assert "cannot read" in err
    broken = tmp_path / "broken.prob"
    broken.write_text("space s { a: 1 }\nevent E = {b}\n")
    code, out, err = run("query", str(broken), "P(E)")
    assert (code, out) == (3, "")
    assert err == f"finprob: {broken}:2:11: UnknownName: unknown outcome 'b'\n"


def test_usage_errors(capsys):
    assert run("fuzz", "--trials", "0")[0] == 2
    assert run("bogus")[0] == 2
    assert run()[0] == 2
    assert run("query", DIE)[0] == 2
    assert capsys.readouterr().out == ""


def test_verify():
    code, out, err = run("verify", DIE)
    assert code == 0 and err == ""
    assert out.endswith("21 catalogue entries, 0 violated\n")
    assert run("verify", DIE) == (code, out, err)
    code, out, _ = run("verify", DIE, "--format", "json", "--elapsed")
    assert "elapsed_seconds" in json.loads(out)


def test_fuzz_small():
    code, out, _ = run("fuzz", "--seed", "3", "--trials", "5", "--max-outcomes", "4")
    assert code == 0
    assert out.splitlines()[0] == "seed 3, 5 space(s)"


def test_graph(tmp_path):
    code, out, _ = run("graph")
    assert code == 0 and out.startswith("digraph results {")
    target = tmp_path / "g.dot"
    assert run("graph", "--out", str(target)) == (0, "", "")
    assert target.read_text() == out
    code, out, _ = run("graph", "--format", "json")
    assert json.loads(out)["dot"].startswith("digraph")
