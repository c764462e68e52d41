"""Kernel operators on canonical values.

Every operator takes the evaluation context first and records the branch it
took. Well-definedness violations raise :class:`Undefined`; branches that a
correct build can never reach are registered as internal and raise
:class:`InternalError`.
"""

from __future__ import annotations

import itertools

from ..core import INT_MAX, INT_MIN, SetV
from ..errors import EnumerationLimit, Undefined
from .context import register
from .lazy import FunSpace, LazySet

EMPTY = SetV()
MAX_POW_BASE = 20


def _finite(ctx, s, scope=None):
    if isinstance(s, LazySet):
        return s.materialize(ctx)
    return s


def _int(ctx, op, n):
    if not INT_MIN <= n <= INT_MAX:
        ctx.internal(op, "overflow", f"integer overflow ({n})")
    return n


# -- sets ----------------------------------------------------------------------

register("union", "sets", 2, commutative=True, symbol="\\/")
register("inter", "sets", 2, ("ok", "lazy"), commutative=True, symbol="/\\")
register("setminus", "sets", 2, symbol="-")
register("product", "sets", 2, symbol="*")
register("pow", "sets", 1, ("ok", "too_large"), symbol="POW")
register("pow1", "sets", 1, symbol="POW1")
register("fin", "sets", 1, symbol="FIN")
register("fin1", "sets", 1, symbol="FIN1")
register("gunion", "sets", 1, symbol="union")
register("ginter", "sets", 1, ("ok", "undef_empty"), symbol="inter")
register("card", "sets", 1, symbol="card")
register("interval", "sets", 2, ("ok", "empty"), symbol="..")
register("min", "sets", 1, ("ok", "undef_empty"), symbol="min")
register("max", "sets", 1, ("ok", "undef_empty"), symbol="max")


def union(ctx, a, b):
    a, b = _finite(ctx, a), _finite(ctx, b)
    ctx.hit("union", "ok")
    return SetV.of(a.members | b.members)


def inter(ctx, a, b):
    if ctx.mutation == "M1":
        return setminus(ctx, a, b)
    if isinstance(a, LazySet) or isinstance(b, LazySet):
        if isinstance(a, LazySet):
            a, b = b, a
        a = _finite(ctx, a)
        ctx.hit("inter", "lazy")
        return SetV(e for e in a.elems if b.contains(ctx, e))
    ctx.hit("inter", "ok")
    return SetV.of(a.members & b.members)


def setminus(ctx, a, b):
    a = _finite(ctx, a)
    ctx.hit("setminus", "ok")
    if isinstance(b, LazySet):
        return SetV(e for e in a.elems if not b.contains(ctx, e))
    bm = b.members
    return SetV(e for e in a.elems if e not in bm)


def product(ctx, a, b):
    a, b = _finite(ctx, a), _finite(ctx, b)
    ctx.hit("product", "ok")
    return SetV(itertools.product(a.elems, b.elems))


def _subsets(s, min_card=0):
    out = []
    for k in range(min_card, len(s.elems) + 1):
        out.extend(SetV(c) for c in itertools.combinations(s.elems, k))
    return SetV.of(out)


def pow_(ctx, s):
    s = _finite(ctx, s)
    if len(s) > MAX_POW_BASE:
        ctx.hit("pow", "too_large")
        raise EnumerationLimit(f"POW of a set with {len(s)} elements")
    ctx.hit("pow", "ok")
    return _subsets(s)


def pow1(ctx, s):
    s = _finite(ctx, s)
    if len(s) > MAX_POW_BASE:
        raise EnumerationLimit(f"POW1 of a set with {len(s)} elements")
    ctx.hit("pow1", "ok")
    return _subsets(s, 1)


def fin(ctx, s):
    # every subset of a finite set is finite
    s = _finite(ctx, s)
    if len(s) > MAX_POW_BASE:
        raise EnumerationLimit(f"FIN of a set with {len(s)} elements")
    ctx.hit("fin", "ok")
    return _subsets(s)


def fin1(ctx, s):
    s = _finite(ctx, s)
    if len(s) > MAX_POW_BASE:
        raise EnumerationLimit(f"FIN1 of a set with {len(s)} elements")
    ctx.hit("fin1", "ok")
    return _subsets(s, 1)


def gunion(ctx, ss):
    ss = _finite(ctx, ss)
    ctx.hit("gunion", "ok")
    out = set()
    for s in ss.elems:
        out |= s.members
    return SetV.of(out)


def ginter(ctx, ss):
    ss = _finite(ctx, ss)
    if not ss.elems:
        ctx.hit("ginter", "undef_empty")
        raise Undefined("inter of the empty set")
    ctx.hit("ginter", "ok")
    out = set(ss.elems[0].members)
    for s in ss.elems[1:]:
        out &= s.members
    return SetV.of(out)


def card(ctx, s):
    s = _finite(ctx, s)
    ctx.hit("card", "ok")
    return len(s)


def interval(ctx, lo, hi):
    if lo > hi:
        ctx.hit("interval", "empty")
        return EMPTY
    if hi - lo > 10**6:
        raise EnumerationLimit(f"interval {lo}..{hi} is too large")
    ctx.hit("interval", "ok")
    return SetV(range(lo, hi + 1))


def min_(ctx, s):
    s = _finite(ctx, s)
    if not s.elems:
        ctx.hit("min", "undef_empty")
        raise Undefined("min of the empty set")
    ctx.hit("min", "ok")
    return s.elems[0]


def max_(ctx, s):
    s = _finite(ctx, s)
    if not s.elems:
        ctx.hit("max", "undef_empty")
        raise Undefined("max of the empty set")
    ctx.hit("max", "ok")
    return s.elems[-1]


# -- membership, inclusion, equality ---------------------------------------------
#
# The positive and negative versions are written independently of each other:
# a wrong answer from one of them shows up as a disagreement between the two
# evaluation chains.

register("member", "membership", 2, ("empty", "singleton", "general", "lazy"), ("not_a_set",))
register("not_member", "membership", 2, ("scan", "lazy"), ("not_a_set",))
register("subset", "membership", 2, ("finite", "lazy"))
register("not_subset", "membership", 2, ("scan", "lazy"))
register("equal", "membership", 2, ("ok", "lazy"), commutative=True)
register("not_equal", "membership", 2, ("atom", "pair", "set_size", "set_scan", "lazy"), ("kind_clash",))


def member(ctx, x, s) -> bool:
    if isinstance(s, LazySet):
        ctx.hit("member", "lazy")
        return s.contains(ctx, x)
    if not isinstance(s, SetV):
        ctx.internal("member", "not_a_set", f"membership in non-set {s!r}")
    n = len(s.elems)
    if n == 0:
        ctx.hit("member", "empty")
        return False
    if n == 1:
        ctx.hit("member", "singleton")
        if ctx.mutation == "M5":
            return x != s.elems[0]
        return x == s.elems[0]
    ctx.hit("member", "general")
    return x in s.members


def not_member(ctx, x, s) -> bool:
    if isinstance(s, LazySet):
        ctx.hit("not_member", "lazy")
        return not s.contains(ctx, x)
    if not isinstance(s, SetV):
        ctx.internal("not_member", "not_a_set", f"membership in non-set {s!r}")
    ctx.hit("not_member", "scan")
    for e in s.elems:
        if not differs(ctx, e, x):
            return False
    return True


def subset(ctx, a, b) -> bool:
    a = _finite(ctx, a)
    if isinstance(b, LazySet):
        ctx.hit("subset", "lazy")
        return all(b.contains(ctx, e) for e in a.elems)
    ctx.hit("subset", "finite")
    return a.members <= b.members


def not_subset(ctx, a, b) -> bool:
    a = _finite(ctx, a)
    if isinstance(b, LazySet):
        ctx.hit("not_subset", "lazy")
        return any(not b.contains(ctx, e) for e in a.elems)
    ctx.hit("not_subset", "scan")
    for e in a.elems:
        if not_member(ctx, e, b):
            return True
    return False


def equal(ctx, a, b) -> bool:
    if isinstance(a, LazySet) or isinstance(b, LazySet):
        ctx.hit("equal", "lazy")
        return _finite(ctx, a) == _finite(ctx, b)
    ctx.hit("equal", "ok")
    return a == b


def differs(ctx, a, b) -> bool:
    """Structural search for a position where two values disagree."""
    if isinstance(a, LazySet) or isinstance(b, LazySet):
        ctx.hit("not_equal", "lazy")
        return differs(ctx, _finite(ctx, a), _finite(ctx, b))
    if isinstance(a, tuple):
        if not isinstance(b, tuple):
            ctx.internal("not_equal", "kind_clash", f"comparing {a!r} with {b!r}")
        ctx.hit("not_equal", "pair")
        return differs(ctx, a[0], b[0]) or differs(ctx, a[1], b[1])
    if isinstance(a, SetV):
        if not isinstance(b, SetV):
            ctx.internal("not_equal", "kind_clash", f"comparing {a!r} with {b!r}")
        if len(a.elems) != len(b.elems):
            ctx.hit("not_equal", "set_size")
            return True
        ctx.hit("not_equal", "set_scan")
        # both are sorted canonically, so equal sets agree position by position
        for x, y in zip(a.elems, b.elems):
            if differs(ctx, x, y):
                return True
        return False
    if type(a) is not type(b):
        ctx.internal("not_equal", "kind_clash", f"comparing {a!r} with {b!r}")
    ctx.hit("not_equal", "atom")
    return a != b


# -- relations -------------------------------------------------------------------

register("dom", "relations", 1, symbol="dom")
register("ran", "relations", 1, symbol="ran")
register("inverse", "relations", 1, symbol="~")
register("comp", "relations", 2, symbol=";")
register("override", "relations", 2, symbol="<+")
register("domres", "relations", 2, symbol="<|")
register("ranres", "relations", 2, symbol="|>")
register("domsub", "relations", 2, symbol="<<|")
register("ransub", "relations", 2, symbol="|>>")
register("image", "relations", 2, symbol="[]")
register("id", "relations", 1, symbol="id")
register("apply", "relations", 2, ("ok", "undef_outside", "undef_not_function"), ("not_a_relation",))


def dom(ctx, r):
    r = _finite(ctx, r)
    ctx.hit("dom", "ok")
    return SetV.of(p[0] for p in r.elems)


def ran(ctx, r):
    r = _finite(ctx, r)
    ctx.hit("ran", "ok")
    return SetV.of(p[1] for p in r.elems)


def inverse(ctx, r):
    r = _finite(ctx, r)
    ctx.hit("inverse", "ok")
    return SetV.of((y, x) for x, y in r.elems)


def comp(ctx, r, s):
    r, s = _finite(ctx, r), _finite(ctx, s)
    ctx.hit("comp", "ok")
    succ = {}
    for y, z in s.elems:
        succ.setdefault(y, []).append(z)
    return SetV.of((x, z) for x, y in r.elems for z in succ.get(y, ()))


def override(ctx, r, s):
    r, s = _finite(ctx, r), _finite(ctx, s)
    ctx.hit("override", "ok")
    ds = {p[0] for p in s.elems}
    return SetV.of([p for p in r.elems if p[0] not in ds] + list(s.elems))


def domres(ctx, s, r):
    r = _finite(ctx, r)
    ctx.hit("domres", "ok")
    return SetV(p for p in r.elems if member(ctx, p[0], s))


def domsub(ctx, s, r):
    r = _finite(ctx, r)
    ctx.hit("domsub", "ok")
    return SetV(p for p in r.elems if not member(ctx, p[0], s))


def ranres(ctx, r, s):
    r = _finite(ctx, r)
    ctx.hit("ranres", "ok")
    return SetV(p for p in r.elems if member(ctx, p[1], s))


def ransub(ctx, r, s):
    r = _finite(ctx, r)
    ctx.hit("ransub", "ok")
    return SetV(p for p in r.elems if not member(ctx, p[1], s))


def image(ctx, r, s):
    r = _finite(ctx, r)
    ctx.hit("image", "ok")
    return SetV.of(p[1] for p in r.elems if member(ctx, p[0], s))


def identity(ctx, s):
    s = _finite(ctx, s)
    ctx.hit("id", "ok")
    return SetV((x, x) for x in s.elems)


def apply(ctx, f, x):
    f = _finite(ctx, f)
    if not isinstance(f, SetV):
        ctx.internal("apply", "not_a_relation", f"applying non-set {f!r}")
    images = {p[1] for p in f.elems if p[0] == x}
    if not images:
        ctx.hit("apply", "undef_outside")
        raise Undefined("function applied outside its domain")
    if len(images) > 1:
        ctx.hit("apply", "undef_not_function")
        raise Undefined("relation is not a function at the argument")
    ctx.hit("apply", "ok")
    return images.pop()


# -- function spaces ---------------------------------------------------------------

FUNCTION_KINDS = {
    "rel": "relation",
    "pfun": "partial",
    "tfun": "total",
    "pinj": "partial_injective",
    "tinj": "total_injective",
    "psurj": "partial_surjective",
    "tsurj": "total_surjective",
    "tbij": "bijective",
}

register(
    "is_function_kind",
    "functions",
    4,
    ("relation", "not_functional", "outside_domain", "outside_range", "not_total",
     "not_injective", "not_surjective", "holds"),
    ("not_a_pair",),
)
register("funspace", "functions", 2, ("ok", "too_large"))


def _is_pfun(ctx, r, d, c):
    lefts = set()
    for p in r.elems:
        if not isinstance(p, tuple):
            ctx.internal("is_function_kind", "not_a_pair", f"relation member {p!r}")
        if p[0] in lefts:
            ctx.hit("is_function_kind", "not_functional")
            return False
        lefts.add(p[0])
    checked = c if ctx.mutation == "M3" else d
    for x in lefts:
        if not member(ctx, x, checked):
            ctx.hit("is_function_kind", "outside_domain")
            return False
    for p in r.elems:
        if not member(ctx, p[1], c):
            ctx.hit("is_function_kind", "outside_range")
            return False
    return True


def is_function_kind(ctx, r, d, c, kind) -> bool:
    """Whether ``r`` belongs to the function space of ``kind`` from d to c.

    ``kind`` is one of relation, partial, total, partial_injective,
    total_injective, partial_surjective, total_surjective or bijective.
    """
    r = _finite(ctx, r)
    if kind == "relation":
        ctx.hit("is_function_kind", "relation")
        return all(member(ctx, x, d) and member(ctx, y, c) for x, y in r.elems)
    if not _is_pfun(ctx, r, d, c):
        return False
    if kind in ("total", "total_injective", "total_surjective", "bijective"):
        d = _finite(ctx, d)
        if len(r.elems) != len(d.elems):
            ctx.hit("is_function_kind", "not_total")
            return False
    if kind in ("partial_injective", "total_injective", "bijective"):
        if len({p[1] for p in r.elems}) != len(r.elems):
            ctx.hit("is_function_kind", "not_injective")
            return False
    if kind in ("partial_surjective", "total_surjective", "bijective"):
        c = _finite(ctx, c)
        if {p[1] for p in r.elems} != c.members:
            ctx.hit("is_function_kind", "not_surjective")
            return False
    ctx.hit("is_function_kind", "holds")
    return True


def funspace_members(ctx, space: FunSpace):
    d, c = _finite(ctx, space.dom), _finite(ctx, space.cod)
    pairs = SetV(itertools.product(d.elems, c.elems))
    if len(pairs) > MAX_POW_BASE:
        ctx.hit("funspace", "too_large")
        raise EnumerationLimit(f"function space over {len(pairs)} pairs")
    ctx.hit("funspace", "ok")
    kind = FUNCTION_KINDS[space.kind]
    return SetV.of(r for r in _subsets(pairs).elems if is_function_kind(ctx, r, d, c, kind))


# -- arithmetic --------------------------------------------------------------------

register("plus", "arith", 2, internal=("overflow",), commutative=True, symbol="+")
register("minus", "arith", 2, internal=("overflow",), symbol="-")
register("mul", "arith", 2, internal=("overflow",), commutative=True, symbol="*")
register("div", "arith", 2, ("ok", "undef_zero"), symbol="/")
register("mod", "arith", 2, ("ok", "undef"), symbol="mod")
register("power", "arith", 2, ("ok", "undef_negative"), ("overflow",), symbol="**")
register("neg", "arith", 1, internal=("overflow",), symbol="-")
register("int_compare", "arith", 2)


def plus(ctx, a, b):
    ctx.hit("plus", "ok")
    return _int(ctx, "plus", a + b)


def minus(ctx, a, b):
    ctx.hit("minus", "ok")
    return _int(ctx, "minus", a - b)


def mul(ctx, a, b):
    if ctx.mutation == "M2" and a == 3 and b == 3:
        return 10
    ctx.hit("mul", "ok")
    return _int(ctx, "mul", a * b)


def div(ctx, a, b):
    if b == 0:
        ctx.hit("div", "undef_zero")
        raise Undefined("division by zero")
    ctx.hit("div", "ok")
    q = abs(a) // abs(b)
    return q if (a >= 0) == (b > 0) else -q


def mod(ctx, a, b):
    if a < 0 or b <= 0:
        ctx.hit("mod", "undef")
        raise Undefined("mod needs a non-negative dividend and a positive divisor")
    ctx.hit("mod", "ok")
    return a % b


def power(ctx, a, b):
    if b < 0:
        ctx.hit("power", "undef_negative")
        raise Undefined("negative exponent")
    if b > 64 and abs(a) > 1:
        ctx.internal("power", "overflow", f"{a}**{b} overflows")
    ctx.hit("power", "ok")
    return _int(ctx, "power", a**b)


def neg(ctx, a):
    ctx.hit("neg", "ok")
    return _int(ctx, "neg", -a)


def int_compare(ctx, kind, a, b) -> bool:
    ctx.hit("int_compare", "ok")
    if kind == "lt":
        return a < b
    if kind == "le":
        return a <= b
    if kind == "gt":
        return a > b
    return a >= b


# -- sequences ---------------------------------------------------------------------

for _op in ("size", "concat", "rev"):
    register(_op, "sequences", 2 if _op == "concat" else 1, ("ok", "undef_not_seq"))
for _op in ("first", "last", "front", "tail"):
    register(_op, "sequences", 1, ("ok", "undef_not_seq", "undef_empty"))
register("seqext", "sequences", 1)


def is_sequence(s) -> bool:
    if not isinstance(s, SetV):
        return False
    for i, p in enumerate(s.elems, 1):
        # canonical order sorts pairs by index, so a sequence reads 1, 2, ..., n
        if not isinstance(p, tuple) or p[0] != i:
            return False
    return True


def _seq(ctx, op, s, nonempty=False):
    s = _finite(ctx, s)
    if not is_sequence(s):
        ctx.hit(op, "undef_not_seq")
        raise Undefined(f"{op} applied to a value that is not a sequence")
    if nonempty and not s.elems:
        ctx.hit(op, "undef_empty")
        raise Undefined(f"{op} of the empty sequence")
    ctx.hit(op, "ok")
    return [p[1] for p in s.elems]


def make_seq(items):
    return SetV((i, v) for i, v in enumerate(items, 1))


def seqext(ctx, items):
    ctx.hit("seqext", "ok")
    return make_seq(items)


def size(ctx, s):
    return len(_seq(ctx, "size", s))


def concat(ctx, s, t):
    a = _seq(ctx, "concat", s)
    b = _seq(ctx, "concat", t)
    return make_seq(a + b)


def first(ctx, s):
    return _seq(ctx, "first", s, True)[0]


def last(ctx, s):
    return _seq(ctx, "last", s, True)[-1]


def front(ctx, s):
    return make_seq(_seq(ctx, "front", s, True)[:-1])


def tail(ctx, s):
    return make_seq(_seq(ctx, "tail", s, True)[1:])


def rev(ctx, s):
    return make_seq(_seq(ctx, "rev", s)[::-1])
