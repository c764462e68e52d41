import json

import pytest

from bval.core import Scope
from bval.errors import DuplicateLaw, ScopeOverflow
from bval.evaluate import Classification, evaluate, format_env
from bval.kernel.context import EvalContext
from bval.laws import (
    CATEGORIES,
    BugAt,
    Counterexample,
    CorpusError,
    NoCounterexample,
    case_count,
    check_corpus,
    check_law,
    load_corpus,
    make_law,
    var_values,
)

SETS_DECL = "SS:POW(EL), TT:POW(EL)"


@pytest.fixture(scope="module")
def corpus():
    return load_corpus()


def law(name):
    return next(l for l in load_corpus() if l.name == name)


def test_corpus_size_and_categories(corpus):
    assert len(corpus) >= 60
    assert {l.category for l in corpus} == set(CATEGORIES)
    assert len({l.name for l in corpus}) == len(corpus)


def test_function_laws_present(corpus):
    names = {l.name for l in corpus}
    assert {"dom_of_union", "union_by_comprehension", "pow1_is_pow_without_empty", "generalized_union"} <= names


def test_empty_corpus():
    assert load_corpus(text="") == []
    assert load_corpus(text="# only a comment\n") == []


def test_duplicate_law_names():
    text = "SECTION sets VARS SS:POW(EL)\na == SS = SS\na == SS <: SS\n"
    with pytest.raises(DuplicateLaw, match="line 3"):
        load_corpus(text=text)


@pytest.mark.parametrize(
    "text, message",
    [
        ("SECTION sets VARS SS:POW(EL)\nbroken == SS = \n", "broken"),
        ("SECTION sets VARS SS:POW(EL)\nill == SS = 1\n", "ill"),
        ("SECTION colours\n", "unknown category"),
        ("x == 1 = 1\n", "outside a SECTION"),
        ("SECTION sets\nno law here\n", "line 2"),
    ],
)
def test_corpus_errors_name_the_law_or_line(text, message):
    with pytest.raises(CorpusError, match=message):
        load_corpus(text=text)


def test_load_from_path(tmp_path):
    p = tmp_path / "laws.txt"
    p.write_text("SECTION arithmetic VARS xx:INTEGER\nzero == xx + 0 = xx\n")
    (l,) = load_corpus(p)
    assert (l.name, l.category, l.line) == ("zero", "arithmetic", 2)


def test_pow1_law_on_three_elements():
    scope = Scope(carriers={"EL": 3})
    v = check_law(make_law("pow1", "sets", "SS:POW(EL)", "POW1(SS) = POW(SS) - {{}}", scope=scope), scope)
    assert v == NoCounterexample(8)


def test_union_law_holds_unmutated():
    assert isinstance(check_law(law("union_by_comprehension")), NoCounterexample)


def test_union_law_counterexample_under_m5():
    l = law("union_by_comprehension")
    v = check_law(l, ctx=EvalContext(mutation="M5"))
    assert isinstance(v, Counterexample)
    assert format_env(v.env) == "SS={el1}, TT={}"
    again = evaluate(l.typed, v.env, ctx=EvalContext(mutation="M5"))
    assert again.classification is Classification.FalseP


def test_generalized_union_law():
    assert isinstance(check_law(law("generalized_union")), NoCounterexample)


def test_false_law_first_counterexample():
    l = make_law("wrong", "sets", SETS_DECL, "SS \\/ TT = SS /\\ TT")
    v = check_law(l)
    assert isinstance(v, Counterexample)
    # the first variable varies fastest
    assert format_env(v.env) == "SS={el1}, TT={}"
    assert evaluate(l.typed, v.env).classification is Classification.FalseP


def test_all_counterexamples():
    l = make_law("wrong", "sets", SETS_DECL, "SS \\/ TT = SS /\\ TT")
    found = check_law(l, all_counterexamples=True)
    # every pair of different subsets of a two-element carrier
    assert len(found) == 12
    assert all(isinstance(f, Counterexample) for f in found)


def test_bug_verdict_under_m5():
    l = make_law("bug", "sets", "SS:POW(EL)", "el1 /: {el2}")
    assert isinstance(check_law(l, ctx=EvalContext(mutation="M5")), BugAt)


def test_case_count_is_product_of_enumeration_sizes(corpus):
    scope = Scope()
    ctx = EvalContext()
    for l in corpus:
        n = 1
        for v in l.vars:
            n *= len(var_values(v, scope, ctx))
        assert case_count(l, scope) == n
        v = check_law(l, scope)
        assert v == NoCounterexample(n), l.name


def test_scope_overflow():
    l = make_law("big", "sets", SETS_DECL, "SS = SS & TT = TT")
    with pytest.raises(ScopeOverflow):
        check_law(l, limit=10)


def test_unused_variables_are_not_enumerated():
    l = make_law("one", "sets", SETS_DECL, "SS = SS")
    assert [v.name for v in l.vars] == ["SS"]
    assert case_count(l) == 4


def test_baseline_corpus(corpus):
    report = check_corpus(corpus)
    assert report.passed and not report.bug
    t = report.totals()
    assert t["counterexamples"] == t["bugs"] == t["errors"] == 0
    assert t["laws"] == len(corpus)


@pytest.mark.parametrize(
    "mutation, categories",
    [("M1", {"sets", "relations"}), ("M3", {"functions"}), ("M5", {"sets"})],
)
def test_mutations_are_caught_by_laws(corpus, mutation, categories):
    report = check_corpus(corpus, mutation=mutation)
    assert not report.passed
    found = {l.category for l, v in report.counterexamples}
    assert categories <= found


def test_m4_hides_counterexamples(corpus):
    assert check_corpus(corpus, mutation="M4").passed


def test_parallel_run_is_identical(corpus):
    one = check_corpus(corpus, mutation="M1")
    two = check_corpus(corpus, mutation="M1", jobs=3)
    assert one.to_json() == two.to_json()
    assert one.text() == two.text()


def test_text_and_json_agree(corpus):
    report = check_corpus(corpus, mutation="M2")
    data = json.loads(report.to_json())
    assert data["totals"] == report.totals()
    bad = [e["law"] for e in data["laws"] if e["verdict"] != "ok"]
    assert bad == [l.name for l, _ in report.counterexamples]
    assert f"{len(bad)} counterexamples" in report.text()
