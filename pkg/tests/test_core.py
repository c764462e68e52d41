import itertools
import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from bval.core import (
    BoolT,
    Elem,
    EnumT,
    IntT,
    PowT,
    ProdT,
    Scope,
    SetV,
    canonical,
    compare,
    enumerate_type,
    enumeration_size,
    is_canonical,
    sort_key,
)
from bval.errors import HeterogeneousSet, ScopeOverflow

ints = st.integers(-5, 5)
elems = st.builds(Elem, st.just("ID"), st.integers(0, 2))
atoms = st.one_of(st.booleans(), ints, elems)


def raw_sets(inner):
    return st.lists(inner, max_size=4)


# homogeneous raw values: a set of ints, of pairs, or of sets of ints
raw_values = st.one_of(
    ints,
    st.tuples(ints, elems),
    raw_sets(ints),
    raw_sets(st.tuples(ints, st.booleans())),
    raw_sets(raw_sets(ints)),
)


def test_canonical_sorts_and_dedups():
    assert canonical([2, 1, 2]).elems == (1, 2)


def test_canonical_empty_is_empty():
    assert canonical(SetV()) == SetV()
    assert canonical([]).elems == ()


def test_canonical_collapses_equal_inner_sets():
    assert canonical([[2, 1], [1, 2]]).elems == (SetV([1, 2]),)


def test_canonical_rejects_mixed_members():
    with pytest.raises(HeterogeneousSet):
        canonical([1, True])
    with pytest.raises(HeterogeneousSet):
        canonical([(1, 2), (1, Elem("ID", 0))])


def test_canonical_rejects_overflow():
    with pytest.raises(OverflowError):
        canonical(2**64)


@given(raw_values)
def test_canonical_is_idempotent(v):
    c = canonical(v)
    assert canonical(c) == c
    assert is_canonical(c)


@pytest.mark.parametrize(
    "a, b, expected",
    [
        (1, 2, -1),
        (SetV(), SetV([0]), -1),
        ((1, 2), (1, 3), -1),
        (False, True, -1),
        (True, 0, -1),
        (3, Elem("ID", 0), -1),
        (Elem("ID", 1), (0, 0), -1),
        ((5, 5), SetV(), -1),
        (SetV([5]), SetV([1, 2]), -1),
        (SetV([1, 3]), SetV([2, 3]), -1),
        (Elem("AA", 1), Elem("BB", 0), -1),
        (SetV([1]), SetV([1]), 0),
    ],
)
def test_compare_examples(a, b, expected):
    assert compare(a, b) == expected
    assert compare(b, a) == -expected


@settings(max_examples=200)
@given(st.lists(st.one_of(atoms, st.tuples(ints, ints), raw_sets(ints).map(canonical)), min_size=3, max_size=3))
def test_compare_is_a_total_order(vals):
    a, b, c = vals
    assert compare(a, a) == 0
    assert compare(a, b) == -compare(b, a)
    if compare(a, b) <= 0 and compare(b, c) <= 0:
        assert compare(a, c) <= 0
    if compare(a, b) == 0:
        assert a == b


def test_enumerate_bool():
    assert enumerate_type(BoolT()) == (False, True)


def test_enumerate_int_range():
    assert enumerate_type(IntT(), Scope(int_lo=-1, int_hi=1)) == (-1, 0, 1)


def test_enumerate_power_set_of_carrier():
    scope = Scope(elements={"ID": ("aa", "bb")}, max_set_card=2)
    got = [str(v) for v in enumerate_type(PowT(EnumT("ID")), scope)]
    assert got == ["{}", "{aa}", "{bb}", "{aa,bb}"]


def test_default_scope():
    s = Scope()
    assert (s.int_lo, s.int_hi, s.max_set_card, s.fuel) == (-3, 3, 4, 10**6)
    assert [str(e) for e in s.carrier_elems("EL")] == ["el1", "el2"]


@pytest.mark.parametrize("kwargs", [dict(int_lo=2, int_hi=1), dict(fuel=0), dict(max_set_card=-1), dict(carriers={"A": 0})])
def test_scope_rejects_bad_bounds(kwargs):
    with pytest.raises(ValueError):
        Scope(**kwargs)


def test_enumeration_limit():
    with pytest.raises(ScopeOverflow):
        enumerate_type(PowT(ProdT(IntT(), IntT())), Scope(max_set_card=49), limit=10**6)


def brute_force(t, scope):
    """Values of a type built from scratch, without the library's enumerator."""
    if isinstance(t, BoolT):
        return [False, True]
    if isinstance(t, IntT):
        return list(range(scope.int_lo, scope.int_hi + 1))
    if isinstance(t, EnumT):
        return [Elem(t.name, i) for i in range(scope.carrier_size(t.name))]
    if isinstance(t, ProdT):
        return [(a, b) for a in brute_force(t.left, scope) for b in brute_force(t.right, scope)]
    inner = brute_force(t.inner, scope)
    out = []
    for bits in itertools.product([0, 1], repeat=len(inner)):
        if sum(bits) <= scope.max_set_card:
            out.append(SetV.of(x for x, b in zip(inner, bits) if b))
    return sorted(out, key=sort_key)


TYPES = [
    BoolT(),
    IntT(),
    EnumT("EL"),
    ProdT(EnumT("EL"), BoolT()),
    PowT(IntT()),
    PowT(ProdT(EnumT("EL"), EnumT("EL"))),
    PowT(PowT(EnumT("EL"))),
    ProdT(PowT(BoolT()), IntT()),
]


@pytest.mark.parametrize("t", TYPES, ids=str)
def test_enumeration_matches_brute_force(t):
    scope = Scope(int_lo=-2, int_hi=2, max_set_card=3)
    got = enumerate_type(t, scope)
    assert list(got) == brute_force(t, scope)
    assert len(got) == enumeration_size(t, scope)
    assert len(set(got)) == len(got)


@given(st.integers(0, 5), st.integers(0, 6))
def test_power_set_size(n, card):
    scope = Scope(carriers={"EL": max(n, 1)}, max_set_card=card)
    size = len(enumerate_type(PowT(EnumT("EL")), scope))
    n = max(n, 1)
    if card >= n:
        assert size == 2**n
    else:
        assert size == sum(math.comb(n, k) for k in range(card + 1))
