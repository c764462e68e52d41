import json
from pathlib import Path

import pytest

from bval import cli
from bval.cli import main

MACHINES = Path(cli.__file__).parent / "data" / "machines"


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_pp(capsys):
    assert run(capsys, "pp", "x+(1*2) = y") == (0, "x+1*2 = y\n", "")


def test_parse_json(capsys):
    code, out, _ = run(capsys, "parse", "1 + 2", "--json")
    assert code == 0
    assert json.loads(out)["kind"] == "plus"


@pytest.mark.parametrize(
    "formula, first_line, code",
    [
        ("1 = 1", "positive: true, negative: false => TrueP (true)", 0),
        ("1 = 2", "positive: false, negative: true => FalseP (false)", 0),
        ("1/0 = 1", "positive: fail, negative: fail => NotWellDefined (unknown)", 1),
        ("card({1,2})", "2", 0),
        ("x : 1..3 & x > 2", "true", 0),
        ("x : 1..3 & x > 5", "false", 0),
    ],
)
def test_eval(capsys, formula, first_line, code):
    got, out, _ = run(capsys, "eval", formula)
    assert got == code
    assert out.splitlines()[0] == first_line


def test_eval_reports_undefined_binding(capsys):
    code, out, _ = run(capsys, "eval", "x = 2/y & y = x-x")
    assert code == 1
    assert out == "unknown / not well-defined\nbinding: x=-3, y=0\n"


def test_eval_json_matches_text(capsys):
    _, text, _ = run(capsys, "eval", "1/0 = 1")
    _, js, _ = run(capsys, "eval", "1/0 = 1", "--json")
    data = json.loads(js)
    assert text.splitlines()[0] == (
        f"positive: {data['positive']}, negative: {data['negative']} "
        f"=> {data['classification']} ({data['verdict']})"
    )
    assert text.splitlines()[1] == f"reason: {data['reason']}"


def test_eval_with_mutation(capsys):
    assert run(capsys, "eval", "3*3 = 9")[0] == 0
    code, out, _ = run(capsys, "eval", "3*3 = 9", "--mutation", "M2")
    assert "FalseP" in out and code == 0


def test_solve(capsys):
    code, out, _ = run(capsys, "solve", "x : 1..3 & x > 1")
    assert code == 0
    assert out == "solution: x=2\nsolution: x=3\n"


def test_solve_respects_int_bounds(capsys):
    _, out, _ = run(capsys, "solve", "x > 2", "--int=-5:5")
    assert out.count("solution:") == 3


def test_typecheck(capsys):
    code, out, _ = run(capsys, "typecheck", "x = 1 & y <: {x}")
    assert code == 0 and out.startswith("cross-check: pass")
    code, out, _ = run(capsys, "typecheck", "x = 1 & x = TRUE")
    assert code == 1 and "type mismatch" in out


def test_typecheck_external_checker(capsys):
    assert run(capsys, "typecheck", "1 = 1", "--external-typecheck", "cat > /dev/null")[0] == 0
    code, out, _ = run(capsys, "typecheck", "1 = 1", "--external-typecheck", "exit 3")
    assert code == 1
    assert "external checker exit status: 3" in out


def test_check_machine(capsys):
    code, out, _ = run(capsys, "check-machine", str(MACHINES / "DoubleEvaluationTest.mch"))
    assert code == 0
    code, out, _ = run(capsys, "check-machine", str(MACHINES / "DoubleEvaluationTest.mch"), "--mutation", "M5")
    assert code == 1
    assert out == "iv : {aa}\n== unknown\n\niv /: {bb}\n== both_true_false\n\n"


def test_check_machine_json(capsys):
    code, out, _ = run(capsys, "check-machine", str(MACHINES / "Colours.mch"), "--json")
    assert code == 0
    data = json.loads(out)
    assert data and all(a["verdict"] == "true" for a in data["assertions"])


def test_check_laws_small_scope(capsys):
    code, out, _ = run(capsys, "check-laws", "--int=-2:2", "--json")
    assert code == 0
    data = json.loads(out)
    assert all(row["verdict"] == "ok" for row in data["laws"])


def test_check_laws_finds_counterexample(capsys, tmp_path):
    corpus = tmp_path / "laws.txt"
    corpus.write_text("SECTION sets VARS SS:POW(EL), TT:POW(EL)\nunion_is_inter == SS \\/ TT = SS /\\ TT\n")
    code, out, _ = run(capsys, "check-laws", str(corpus), "--scope", "EL=2")
    assert code == 1
    assert "SS={el1}, TT={}" in out


def test_roundtrip(capsys, tmp_path):
    code, out, _ = run(capsys, "roundtrip")
    assert code == 0
    (tmp_path / "M.mch").write_text("MACHINE M\nPROPERTIES\n  1 = 1\nASSERTIONS\n  1+2*3 = 7\nEND\n")
    assert run(capsys, "roundtrip", str(tmp_path))[0] == 0


def test_gen_tests(capsys):
    code, out, _ = run(capsys, "gen-tests", "{1} \\/ {2} = {1,2}")
    assert code == 0
    assert out.splitlines()[0].split(None, 1) == ["true", "{1} \\/ {2} = {1,2}"]
    assert run(capsys, "gen-tests", "{1} \\/ {2} = {1}")[0] == 1


def test_mutate(capsys):
    code, out, _ = run(capsys, "mutate", "--id", "M2", "unit")
    assert code == 1
    assert "3*3 = 9 expected true, got false" in out
    assert run(capsys, "mutate", "--id", "M9", "unit")[0] == 2


def test_coverage(capsys, tmp_path):
    code, out, _ = run(capsys, "coverage", "--runs", "unit", "--out", str(tmp_path))
    assert code == 0
    assert {p.name for p in tmp_path.iterdir()} == {"coverage.txt", "coverage.json", "coverage.html"}
    assert "internal-error branches" in out


@pytest.mark.parametrize(
    "argv",
    [
        ["frobnicate"],
        ["eval"],
        ["eval", "1 = 1", "--mutation", "M9"],
        ["eval", "1 = 1", "--int", "x:y"],
        ["eval", "1 = 1", "--int=3:-3"],
        ["check-machine", "/nonexistent/M.mch"],
    ],
)
def test_usage_errors(capsys, argv):
    assert run(capsys, *argv)[0] == 2


@pytest.mark.parametrize("text", ["x = ", "1 = TRUE"])
def test_rejected_input_is_a_finding(capsys, text):
    code, _, err = run(capsys, "eval", text)
    assert code == 1
    assert err.startswith("error: ")


def test_config_file_and_flag_precedence(capsys, tmp_path):
    cfg = tmp_path / "bval.cfg"
    cfg.write_text("# bounds\nint = 1:4\njson = true\n")
    _, out, _ = run(capsys, "solve", "x > 0", "--config", str(cfg))
    assert json.loads(out)["solutions"] == ["x=1", "x=2", "x=3", "x=4"]
    _, out, _ = run(capsys, "solve", "x > 0", "--config", str(cfg), "--int=2:3")
    assert json.loads(out)["solutions"] == ["x=2", "x=3"]


def test_config_file_rejects_unknown_keys(capsys, tmp_path):
    cfg = tmp_path / "bad.cfg"
    cfg.write_text("colour = blue\n")
    assert run(capsys, "eval", "1 = 1", "--config", str(cfg))[0] == 2


def test_stdin_input(capsys, monkeypatch):
    import io

    monkeypatch.setattr("sys.stdin", io.StringIO("1+2"))
    assert run(capsys, "eval", "-") == (0, "3\n", "")
