"""Deliberately naive reference implementations used as test oracles.

Everything here works on plain Python values (frozensets, tuples, ints)
and spells each operator out as a comprehension over an explicit universe.
Nothing is shared with the kernel apart from the Elem and SetV classes used
for conversion.
"""

from __future__ import annotations

from itertools import chain, combinations, product

from bval.core import BoolT, EnumT, IntT, PowT, ProdT, SetV


def to_py(v):
    if isinstance(v, SetV):
        return frozenset(to_py(e) for e in v.elems)
    if isinstance(v, tuple):
        return tuple(to_py(x) for x in v)
    return v


def from_py(v):
    if isinstance(v, (frozenset, set)):
        return SetV.of(from_py(e) for e in v)
    if isinstance(v, tuple):
        return tuple(from_py(x) for x in v)
    return v


def subsets(universe):
    items = list(universe)
    return [frozenset(c) for c in chain.from_iterable(combinations(items, k) for k in range(len(items) + 1))]


# -- sets ---------------------------------------------------------------------


def union(U, a, b):
    return frozenset(x for x in U if x in a or x in b)


def inter(U, a, b):
    return frozenset(x for x in U if x in a and x in b)


def setminus(U, a, b):
    return frozenset(x for x in U if x in a and x not in b)


def product_(U, a, b):
    return frozenset((x, y) for x in U for y in U if x in a and y in b)


def pow_(U, a):
    return frozenset(s for s in subsets(U) if all(x in a for x in s))


def pow1(U, a):
    return frozenset(s for s in pow_(U, a) if s)


def gunion(U, ss):
    return frozenset(x for x in U if any(x in s for s in ss))


def ginter(U, ss):
    if not ss:
        return None  # undefined
    return frozenset(x for x in U if all(x in s for s in ss))


def card(U, a):
    return sum(1 for x in U if x in a)


# -- relations ----------------------------------------------------------------


def dom(U, r):
    return frozenset(x for x in U if any((x, y) in r for y in U))


def ran(U, r):
    return frozenset(y for y in U if any((x, y) in r for x in U))


def inverse(U, r):
    return frozenset((y, x) for x in U for y in U if (x, y) in r)


def comp(U, r, s):
    return frozenset((x, z) for x in U for z in U if any((x, y) in r and (y, z) in s for y in U))


def override(U, r, s):
    ds = dom(U, s)
    return frozenset((x, y) for x in U for y in U if (x, y) in s or ((x, y) in r and x not in ds))


def domres(U, a, r):
    return frozenset((x, y) for x in U for y in U if (x, y) in r and x in a)


def domsub(U, a, r):
    return frozenset((x, y) for x in U for y in U if (x, y) in r and x not in a)


def ranres(U, r, a):
    return frozenset((x, y) for x in U for y in U if (x, y) in r and y in a)


def ransub(U, r, a):
    return frozenset((x, y) for x in U for y in U if (x, y) in r and y not in a)


def image(U, r, a):
    return frozenset(y for y in U if any((x, y) in r and x in a for x in U))


def identity(U, a):
    return frozenset((x, x) for x in U if x in a)


def apply(U, f, x):
    images = [y for y in U if (x, y) in f]
    if len(images) != 1:
        return None  # undefined
    return images[0]


def is_function_kind(U, r, d, c, kind):
    inside = all(x in d and y in c for (x, y) in r)
    functional = all(not ((x, y) in r and (x, z) in r and y != z) for x in U for y in U for z in U)
    injective = all(not ((x, y) in r and (z, y) in r and x != z) for x in U for y in U for z in U)
    total = all(any((x, y) in r for y in U) for x in d)
    onto = all(any((x, y) in r for x in U) for y in c)
    if kind == "rel":
        return inside
    ok = inside and functional
    if kind in ("tfun", "tinj", "tsurj", "tbij"):
        ok = ok and total
    if kind in ("pinj", "tinj", "tbij"):
        ok = ok and injective
    if kind in ("psurj", "tsurj", "tbij"):
        ok = ok and onto
    return ok


# -- a naive three-valued evaluator ---------------------------------------------


class Unsupported(Exception):
    pass


def enumerate_naive(t, lo, hi, elements):
    """All values of type ``t``; integers range over lo..hi."""
    if isinstance(t, BoolT):
        return [False, True]
    if isinstance(t, IntT):
        return list(range(lo, hi + 1))
    if isinstance(t, EnumT):
        return list(elements[t.name])
    if isinstance(t, ProdT):
        return [(a, b) for a in enumerate_naive(t.left, lo, hi, elements) for b in enumerate_naive(t.right, lo, hi, elements)]
    if isinstance(t, PowT):
        inner = enumerate_naive(t.inner, lo, hi, elements)
        if len(inner) > 12:
            raise Unsupported("power set too large for the naive evaluator")
        return subsets(inner)
    raise Unsupported(str(t))


def _and(a, b):
    if a is None:
        return None
    return b() if a else False


def _or(a, b):
    if a is None:
        return None
    return True if a else b()


def _is_seq(s):
    n = len(s)
    return all(isinstance(p, tuple) for p in s) and sorted(i for i, _ in s) == list(range(1, n + 1))


def _seq_items(s):
    return [y for _, y in sorted(s)]


def _seq(items):
    return frozenset((i, x) for i, x in enumerate(items, 1))


class NaiveEvaluator:
    """Left-to-right three-valued semantics; ``None`` means undefined.

    Bound variables range over their whole (small) type; integers over
    ``lo..hi``. Raises :class:`Unsupported` for constructs it does not model.
    """

    def __init__(self, typed, elements, lo=-12, hi=12):
        self.typed = typed
        self.elements = elements
        self.lo, self.hi = lo, hi

    def domain(self, node, i):
        return enumerate_naive(self.typed.binders[id(node)][i], self.lo, self.hi, self.elements)

    def bindings(self, node, env):
        names = node.value
        lists = [self.domain(node, i) for i in range(len(names))]
        for combo in product(*lists):
            yield {**env, **dict(zip(names, combo))}

    def pred(self, n, env):
        k = n.kind
        c = n.children
        if k == "and":
            return _and(self.pred(c[0], env), lambda: self.pred(c[1], env))
        if k == "or":
            return _or(self.pred(c[0], env), lambda: self.pred(c[1], env))
        if k == "implies":
            a = self.pred(c[0], env)
            return None if a is None else (self.pred(c[1], env) if a else True)
        if k == "equiv":
            a, b = self.pred(c[0], env), self.pred(c[1], env)
            return None if a is None or b is None else a == b
        if k == "not":
            a = self.pred(c[0], env)
            return None if a is None else not a
        if k in ("forall", "exists"):
            results = [self.pred(c[0], e) for e in self.bindings(n, env)]
            if None in results:
                return None
            return all(results) if k == "forall" else any(results)
        if k in ("member", "notmember") and c[1].kind in ("INTEGER", "NATURAL", "NATURAL1", "NAT", "NAT1", "INT"):
            x = self.expr(c[0], env)
            if x is None:
                return None
            bounds = {"NATURAL": (0, None), "NATURAL1": (1, None), "NAT": (0, 3), "NAT1": (1, 3), "INT": (-3, 3)}
            lo, hi = bounds.get(c[1].kind, (None, None))
            inside = (lo is None or x >= lo) and (hi is None or x <= hi)
            return inside if k == "member" else not inside
        if k in ("member", "notmember") and c[1].kind in ARROWS:
            r, d, cod = (self.expr(x, env) for x in (c[0], *c[1].children))
            if r is None or d is None or cod is None:
                return None
            ok = is_function_kind(_universe(r, d, cod), r, d, cod, c[1].kind)
            return ok if k == "member" else not ok
        a = self.expr(c[0], env)
        if a is None:
            return None
        b = self.expr(c[1], env)
        if b is None:
            return None
        if k == "eq":
            return a == b
        if k == "neq":
            return a != b
        if k == "member":
            return a in b
        if k == "notmember":
            return a not in b
        if k == "subset":
            return a <= b
        if k == "notsubset":
            return not a <= b
        if k == "ssubset":
            return a < b
        if k == "notssubset":
            return not a < b
        if k in ("lt", "le", "gt", "ge"):
            return {"lt": a < b, "le": a <= b, "gt": a > b, "ge": a >= b}[k]
        raise Unsupported(k)

    def universe(self, n):
        t = self.typed.types[id(n)]
        return enumerate_naive(t.inner, self.lo, self.hi, self.elements)

    def expr(self, n, env):
        k = n.kind
        c = n.children
        if k == "int":
            return n.value
        if k == "true":
            return True
        if k == "false":
            return False
        if k == "ident":
            return env[n.value]
        if k == "empty":
            return frozenset()
        if k == "BOOL":
            return frozenset([False, True])
        if k == "boolof":
            return self.pred(c[0], env)
        if k == "cset":
            members = []
            for e in self.bindings(n, env):
                r = self.pred(c[0], e)
                if r is None:
                    return None
                if r:
                    vals = [e[v] for v in n.value]
                    members.append(vals[0] if len(vals) == 1 else _tuple(vals))
            return frozenset(members)
        if k == "lambda":
            pairs = []
            for e in self.bindings(n, env):
                r = self.pred(c[0], e)
                if r is None:
                    return None
                if r:
                    y = self.expr(c[1], e)
                    if y is None:
                        return None
                    pairs.append((_tuple([e[v] for v in n.value]), y))
            return frozenset(pairs)
        args = [self.expr(x, env) for x in c]
        if any(a is None for a in args):
            return None
        if k == "setext":
            return frozenset(args)
        if k == "seqext":
            return _seq(args)
        if k == "pair":
            return tuple(args)
        if k in ("plus", "minus", "mul", "div", "mod", "power", "neg") and all(isinstance(a, int) for a in args):
            return _arith(k, args)
        if k == "interval":
            if args[1] - args[0] > 1000:
                raise Unsupported("interval too large for the naive evaluator")
            return frozenset(range(args[0], args[1] + 1))
        if k == "card":
            return len(args[0])
        if k in ("min", "max"):
            return (min if k == "min" else max)(args[0]) if args[0] else None
        if k == "gunion":
            return frozenset(x for s in args[0] for x in s)
        if k == "ginter":
            if not args[0]:
                return None
            return frozenset.intersection(*args[0])
        if k == "size" and _is_seq(args[0]):
            return len(args[0])
        if k in ("first", "last", "front", "tail", "rev") and _is_seq(args[0]):
            items = _seq_items(args[0])
            if k == "rev":
                return _seq(items[::-1])
            if not items:
                return None
            return {"first": items[0], "last": items[-1], "front": _seq(items[:-1]), "tail": _seq(items[1:])}[k]
        if k == "concat" and _is_seq(args[0]) and _is_seq(args[1]):
            return _seq(_seq_items(args[0]) + _seq_items(args[1]))
        if k in ("size", "first", "last", "front", "tail", "rev", "concat"):
            return None
        # set and relation operators, spelled out over the type's universe
        if k in ("union", "inter", "minus", "setminus"):
            U = self.universe(n)
            fn = {"union": union, "inter": inter, "minus": setminus, "setminus": setminus}[k]
            return fn(U, *args)
        if k == "mul":
            return frozenset((x, y) for x in args[0] for y in args[1])
        if k in ARROWS:
            d, cod = args
            U = _universe(frozenset(), d, cod)
            pairs = [(x, y) for x in d for y in cod]
            if len(pairs) > 12:
                raise Unsupported("function space too large for the naive evaluator")
            return frozenset(r for r in subsets(pairs) if is_function_kind(U, r, d, cod, k))
        if k in ("pow", "fin", "pow1", "fin1") and len(args[0]) > 12:
            raise Unsupported("power set too large for the naive evaluator")
        if k in ("pow", "fin"):
            return frozenset(subsets(args[0]))
        if k in ("pow1", "fin1"):
            return frozenset(s for s in subsets(args[0]) if s)
        if k == "dom":
            return frozenset(x for x, _ in args[0])
        if k == "ran":
            return frozenset(y for _, y in args[0])
        if k == "inverse":
            return frozenset((y, x) for x, y in args[0])
        if k == "comp":
            return frozenset((x, z) for x, y in args[0] for y2, z in args[1] if y == y2)
        if k == "override":
            ds = frozenset(x for x, _ in args[1])
            return frozenset(p for p in args[0] if p[0] not in ds) | args[1]
        if k == "domres":
            return frozenset(p for p in args[1] if p[0] in args[0])
        if k == "domsub":
            return frozenset(p for p in args[1] if p[0] not in args[0])
        if k == "ranres":
            return frozenset(p for p in args[0] if p[1] in args[1])
        if k == "ransub":
            return frozenset(p for p in args[0] if p[1] not in args[1])
        if k == "image":
            return frozenset(y for x, y in args[0] if x in args[1])
        if k == "id":
            return frozenset((x, x) for x in args[0])
        if k == "apply":
            images = [y for x, y in args[0] if x == args[1]]
            funct = len({x for x, _ in args[0]}) == len(args[0])
            return images[0] if funct and len(images) == 1 else None
        raise Unsupported(k)


ARROWS = ("rel", "pfun", "tfun", "pinj", "tinj", "psurj", "tsurj", "tbij")


def _universe(r, d, c):
    return set(d) | set(c) | {x for p in r for x in p}


def _tuple(vals):
    out = vals[0]
    for v in vals[1:]:
        out = (out, v)
    return out


def _arith(k, args):
    if k == "neg":
        return -args[0]
    a, b = args
    if k == "plus":
        return a + b
    if k == "minus":
        return a - b
    if k == "mul":
        return a * b
    if k == "div":
        if b == 0:
            return None
        q = abs(a) // abs(b)
        return q if (a >= 0) == (b > 0) else -q
    if k == "mod":
        if a < 0 or b <= 0:
            return None
        return a % b
    if b < 0:
        return None
    if b > 64:
        raise Unsupported("power too large for the naive evaluator")
    return a**b
