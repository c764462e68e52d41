import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from bval.core import BoolT, EnumT, IntT, PowT, ProdT
from bval.errors import TypeCheckError, UnknownIdentifier
from bval.harness.suites import corpus_texts
from bval.syntax import parse_any, parse_expr, parse_machine, parse_pred
from bval.syntax.randgen import random_pred
from bval.typecheck import crosscheck_typing, infer, pretty_print_typed

ID_ENV = {"ID": PowT(EnumT("ID")), "aa": EnumT("ID"), "bb": EnumT("ID")}


def type_of(text, env=None):
    t = infer(parse_expr(text), env)
    return t.types[id(t.node)]


@pytest.mark.parametrize(
    "text, expected",
    [
        ("{1,2} \\/ {3}", PowT(IntT())),
        ("{1 |-> TRUE}", PowT(ProdT(IntT(), BoolT()))),
        ("dom({1 |-> aa})", PowT(IntT())),
        ("card({aa})", IntT()),
        ("POW({1})", PowT(PowT(IntT()))),
        ("{x | x : ID}", PowT(EnumT("ID"))),
        ("%x.(x : 1..3 | x-1)", PowT(ProdT(IntT(), IntT()))),
        ("[aa, bb]", PowT(ProdT(IntT(), EnumT("ID")))),
        ("{} \\/ {aa}", PowT(EnumT("ID"))),
        ("bool(1 = 1)", BoolT()),
    ],
)
def test_infer_examples(text, expected):
    assert type_of(text, ID_ENV) == expected


def test_free_identifier_in_machine_predicate():
    t = infer(parse_pred("iv : ID & iv /= bb"), ID_ENV, free_as_vars=True)
    assert t.env["iv"] == EnumT("ID")


def test_machine_sets_and_constants():
    m = parse_machine("MACHINE M\nSETS ID={aa,bb}\nCONSTANTS iv\nPROPERTIES iv : ID & iv /= bb\nEND")
    assert infer(m).env["iv"] == EnumT("ID")


@pytest.mark.parametrize("text", ["1 = TRUE", "{1} = {aa}", "aa + 1 = 2", "{1} <: {{1}}", "card(1) = 1"])
def test_type_errors(text):
    with pytest.raises(TypeCheckError):
        infer(parse_pred(text), ID_ENV)


def test_type_error_carries_expected_and_found():
    with pytest.raises(TypeCheckError) as err:
        infer(parse_pred("1 = TRUE"))
    assert (str(err.value.expected), str(err.value.found)) == ("INTEGER", "BOOL")
    assert err.value.pos == (1, 1)


def test_unknown_identifier():
    with pytest.raises(UnknownIdentifier) as err:
        infer(parse_pred("xx = 1"))
    assert err.value.name == "xx"


def test_ambiguous_empty_set():
    with pytest.raises(TypeCheckError, match="ambiguous empty set"):
        infer(parse_pred("{} = {}"))


def test_typed_print_annotates_binders():
    t = infer(parse_expr("%x.(x:1..3|x-1)"))
    assert pretty_print_typed(t) == "%x.(x : INTEGER & x : 1..3 | x-1)"


def test_typed_print_annotates_empty_sets():
    t = infer(parse_pred("{} = {1} /\\ {}"))
    assert pretty_print_typed(t) == "{} /\\ INTEGER = {1} /\\ ({} /\\ INTEGER)"


def test_inference_is_deterministic():
    text = "!(xx,yy).(xx : POW(ID) & yy : ID => {yy} \\/ xx /= {})"
    a, b = infer(parse_pred(text), ID_ENV), infer(parse_pred(text), ID_ENV)
    assert pretty_print_typed(a) == pretty_print_typed(b)
    assert sorted(map(str, a.types.values())) == sorted(map(str, b.types.values()))


def test_crosscheck_not_applicable_on_type_error():
    rep = crosscheck_typing("1 = TRUE")
    assert rep.status == "not-applicable"
    assert rep.stage == "infer"


def test_crosscheck_passes_on_lambda():
    rep = crosscheck_typing("%x.(x:1..3|x-1) = {1|->0, 2|->1, 3|->2}")
    assert rep.passed
    assert "x : INTEGER" in rep.typed_text


def test_crosscheck_external_command_status():
    assert crosscheck_typing("1 = 1", external_cmd="cat > /dev/null").external_status == 0
    rep = crosscheck_typing("1 = 1", external_cmd="exit 3")
    assert rep.external_status == 3
    assert rep.status == "fail" and rep.stage == "external"


@pytest.mark.parametrize("name, text, env", corpus_texts(), ids=lambda x: x if isinstance(x, str) and len(x) < 40 else None)
def test_corpus_crosscheck(name, text, env):
    rep = crosscheck_typing(text, env)
    assert rep.passed, f"{name}: {rep.stage}: {rep.message}"


@settings(max_examples=200)
@given(st.integers(0, 2**32))
def test_ill_typed_input_raises_type_errors_only(seed):
    tree = random_pred(random.Random(seed), 5)
    env = {n: IntT() for n in ("xx", "yy", "zz", "ff", "SS", "el1")}
    try:
        infer(tree, env)
    except TypeCheckError:
        pass
