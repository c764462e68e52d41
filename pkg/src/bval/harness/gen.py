"""Unit-test generation from seed facts.

A seed fact states one kernel result, for instance that the union of {1}
and {2} is {1,2}. From it we derive many predicates that must all be true:
every set is written in several ways (different literal orderings, an
interval, a comprehension), arguments of commutative operators are swapped,
and each argument is also recovered by solving for it.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

from ..core import DEFAULT_SCOPE, BoolT, Elem, IntT, PowT, ProdT, Scope, SetV, enumeration_size, type_of_value
from ..errors import UnsupportedOperator
from ..kernel.context import CATALOG
from ..kernel.ops import is_sequence
from ..syntax import Node, pretty_print
from ..syntax.ast import ident, intlit
from ..typecheck import type_set

# kernel operator -> AST node kind used to write it down
RENDER = {
    "union": "union",
    "inter": "inter",
    "setminus": "setminus",
    "product": "mul",
    "pow": "pow",
    "pow1": "pow1",
    "fin": "fin",
    "fin1": "fin1",
    "gunion": "gunion",
    "ginter": "ginter",
    "card": "card",
    "interval": "interval",
    "min": "min",
    "max": "max",
    "dom": "dom",
    "ran": "ran",
    "inverse": "inverse",
    "comp": "comp",
    "override": "override",
    "domres": "domres",
    "ranres": "ranres",
    "domsub": "domsub",
    "ransub": "ransub",
    "image": "image",
    "id": "id",
    "apply": "apply",
    "plus": "plus",
    "minus": "minus",
    "mul": "mul",
    "div": "div",
    "mod": "mod",
    "power": "power",
    "neg": "neg",
    "size": "size",
    "concat": "concat",
    "first": "first",
    "last": "last",
    "front": "front",
    "tail": "tail",
    "rev": "rev",
}

MAX_SOLVE_DOMAIN = 2000


@dataclass(frozen=True)
class SeedFact:
    op: str
    args: tuple
    expected: object
    # explicit types, needed when a value is an empty set
    arg_types: tuple | None = None
    result_type: object = None


@dataclass(frozen=True)
class TestCase:
    name: str
    text: str
    expect: str = "true"  # true, false, undefined or unknown


@dataclass
class Generated:
    seed: SeedFact
    tests: list
    counts: dict = field(default_factory=dict)


def _complete(t):
    if t is None:
        return False
    if isinstance(t, PowT):
        return _complete(t.inner)
    if isinstance(t, ProdT):
        return _complete(t.left) and _complete(t.right)
    return True


def _type(v, hint):
    if hint is not None:
        return hint
    t = type_of_value(v)
    if not _complete(t):
        raise UnsupportedOperator("seed values with empty sets need explicit types")
    return t


def literal(v, t) -> Node:
    """The canonical literal for value ``v`` of type ``t``."""
    if v is True or v is False:
        return Node("true" if v else "false")
    if isinstance(v, int):
        return intlit(v) if v >= 0 else Node("neg", (intlit(-v),))
    if isinstance(v, Elem):
        return ident(v.name)
    if isinstance(v, tuple):
        return Node("pair", (literal(v[0], t.left), literal(v[1], t.right)))
    if not v.elems:
        return Node("inter", (Node("empty"), type_set(t.inner)))
    return Node("setext", tuple(literal(e, t.inner) for e in v.elems))


def representations(v, t, var="xx") -> list[Node]:
    """Different ways of writing the same value."""
    out = [literal(v, t)]
    if not isinstance(v, SetV) or not v.elems:
        return out
    elems = list(v.elems)
    if len(elems) >= 2:
        out.append(Node("setext", tuple(literal(e, t.inner) for e in reversed(elems))))
    if len(elems) >= 3:
        rotated = elems[1:] + elems[:1]
        out.append(Node("setext", tuple(literal(e, t.inner) for e in rotated)))
    if isinstance(t.inner, IntT) and elems == list(range(elems[0], elems[-1] + 1)):
        out.append(Node("interval", (literal(elems[0], IntT()), literal(elems[-1], IntT()))))
    if isinstance(t.inner, ProdT) and isinstance(t.inner.left, IntT) and is_sequence(v):
        out.append(Node("seqext", tuple(literal(p[1], t.inner.right) for p in elems)))
    x = ident(var)
    alts = [Node("eq", (x, literal(e, t.inner))) for e in elems]
    cond = alts[0]
    for a in alts[1:]:
        cond = Node("or", (cond, a))
    typing = Node("member", (x, type_set(t.inner)))
    out.append(Node("cset", (Node("and", (typing, cond)),), (var,)))
    return out


def _apply(op, args) -> Node:
    kind = RENDER[op]
    return Node(kind, tuple(args))


def _elements_of(values, t):
    acc = set()
    for v in values:
        if isinstance(v, SetV) and v.elems and type_of_value(v.elems[0]) == t:
            acc |= v.members
    return SetV.of(acc)


SEQUENCE_OPS = {"size", "concat", "first", "last", "front", "tail", "rev"}
NONEMPTY_OPS = {"ginter", "min", "max", "first", "last", "front", "tail"}


def _solve_domain(op, t, values, scope):
    """A set expression to search for an argument of type ``t``."""
    if op in SEQUENCE_OPS and isinstance(t, PowT):
        items = SetV.of(p[1] for v in values if isinstance(v, SetV) for p in v.elems)
        return Node("seq", (literal(items, PowT(t.inner.right)),))
    if enumeration_size(t, scope) <= MAX_SOLVE_DOMAIN:
        return type_set(t)
    if isinstance(t, PowT):
        universe = _elements_of(values, t.inner)
        if len(universe) <= 8:
            return Node("pow", (literal(universe, t),))
    return None


def _wd_guard(op, args, types):
    """Conditions under which ``op(args)`` is well-defined."""
    if op in NONEMPTY_OPS:
        return [Node("neq", (args[0], literal(SetV(), types[0])))]
    if op == "apply":
        f, x = args
        fun = Node("pfun", (type_set(types[0].inner.left), type_set(types[0].inner.right)))
        return [Node("member", (f, fun)), Node("member", (x, Node("dom", (f,))))]
    zero = intlit(0)
    if op == "div":
        return [Node("neq", (args[1], zero))]
    if op == "mod":
        return [Node("ge", (args[0], zero)), Node("gt", (args[1], zero))]
    if op == "power":
        return [Node("ge", (args[1], zero))]
    return []


def _in_scope(v, t, scope):
    if isinstance(t, IntT):
        return scope.int_lo <= v <= scope.int_hi
    if isinstance(t, BoolT):
        return True
    if isinstance(t, ProdT):
        return _in_scope(v[0], t.left, scope) and _in_scope(v[1], t.right, scope)
    if isinstance(t, PowT):
        return len(v) <= scope.max_set_card and all(_in_scope(e, t.inner, scope) for e in v.elems)
    return True


def gen_unit_tests(seed: SeedFact, scope: Scope = DEFAULT_SCOPE) -> Generated:
    """Deterministic list of predicates that must all evaluate to true."""
    info = CATALOG.get(seed.op)
    if info is None or seed.op not in RENDER:
        raise UnsupportedOperator(f"no test generator for operator {seed.op}")
    hints = seed.arg_types or (None,) * len(seed.args)
    types = [_type(v, h) for v, h in zip(seed.args, hints)]
    rtype = _type(seed.expected, seed.result_type)
    arg_reps = [representations(v, t) for v, t in zip(seed.args, types)]
    result_reps = representations(seed.expected, rtype)
    orders = [tuple(range(len(seed.args)))]
    if info.commutative and len(seed.args) == 2:
        orders.append((1, 0))

    tests, seen = [], set()
    counts = {"forward": 0, "solve": 0, "solve_skipped": 0}

    def add(kind, node):
        text = pretty_print(node)
        if text not in seen:
            seen.add(text)
            tests.append(TestCase(f"{seed.op}:{kind}:{len(tests)}", text))
            counts[kind] += 1

    for order in orders:
        for combo in itertools.product(*(arg_reps[i] for i in order)):
            for r in result_reps:
                add("forward", Node("eq", (_apply(seed.op, combo), r)))
    values = list(seed.args) + [seed.expected]
    for order in orders:
        for pos, i in enumerate(order):
            t = types[i]
            domain = _solve_domain(seed.op, t, values, scope)
            if domain is None or not _in_scope(seed.args[i], t, scope):
                counts["solve_skipped"] += 1
                continue
            unknown = ident("XX")
            args = [unknown if j == i else literal(seed.args[j], types[j]) for j in order]
            conds = [Node("member", (unknown, domain))]
            conds += _wd_guard(seed.op, args, [types[j] for j in order])
            conds.append(Node("eq", (_apply(seed.op, args), literal(seed.expected, rtype))))
            body = conds[0]
            for c in conds[1:]:
                body = Node("and", (body, c))
            cset = Node("cset", (body,), ("XX",))
            add("solve", Node("member", (literal(seed.args[i], t), cset)))
    counts["total"] = len(tests)
    return Generated(seed, tests, counts)


def _s(*xs):
    return SetV.of(xs)


def _seq(*xs):
    return SetV((i, x) for i, x in enumerate(xs, 1))


INT_SET = PowT(IntT())

SEEDS = (
    SeedFact("union", (_s(1), _s(2)), _s(1, 2)),
    SeedFact("inter", (_s(1, 2), _s(2, 3)), _s(2)),
    SeedFact("setminus", (_s(1, 2, 3), _s(2)), _s(1, 3)),
    SeedFact("product", (_s(1, 2), _s(True)), _s((1, True), (2, True))),
    SeedFact("pow", (_s(1, 2),), _s(_s(), _s(1), _s(2), _s(1, 2))),
    SeedFact("pow1", (_s(1, 2),), _s(_s(1), _s(2), _s(1, 2))),
    SeedFact("fin", (_s(1),), _s(_s(), _s(1))),
    SeedFact("fin1", (_s(1),), _s(_s(1))),
    SeedFact("gunion", (_s(_s(1), _s(2, 3)),), _s(1, 2, 3)),
    SeedFact("ginter", (_s(_s(1, 2), _s(2, 3)),), _s(2)),
    SeedFact("card", (_s(),), 0, arg_types=(INT_SET,)),
    SeedFact("card", (_s(1, 2, 3),), 3),
    SeedFact("interval", (1, 3), _s(1, 2, 3)),
    SeedFact("min", (_s(3, 1, 2),), 1),
    SeedFact("max", (_s(3, 1, 2),), 3),
    SeedFact("dom", (_s((1, 2), (3, 2)),), _s(1, 3)),
    SeedFact("ran", (_s((1, 2), (1, 3)),), _s(2, 3)),
    SeedFact("inverse", (_s((1, 2)),), _s((2, 1))),
    SeedFact("comp", (_s((1, 2)), _s((2, 3))), _s((1, 3))),
    SeedFact("override", (_s((1, 2), (3, 1)), _s((1, 3))), _s((1, 3), (3, 1))),
    SeedFact("domres", (_s(1), _s((1, 2), (3, 1))), _s((1, 2))),
    SeedFact("ranres", (_s((1, 2), (3, 1)), _s(1)), _s((3, 1))),
    SeedFact("domsub", (_s(1), _s((1, 2), (3, 1))), _s((3, 1))),
    SeedFact("ransub", (_s((1, 2), (3, 1)), _s(1)), _s((1, 2))),
    SeedFact("image", (_s((1, 2), (3, 1)), _s(1)), _s(2)),
    SeedFact("id", (_s(1, 2),), _s((1, 1), (2, 2))),
    SeedFact("apply", (_s((1, 2), (3, 1)), 3), 1),
    SeedFact("plus", (1, 2), 3),
    SeedFact("minus", (3, 1), 2),
    SeedFact("mul", (2, 3), 6),
    SeedFact("div", (7, 2), 3),
    SeedFact("mod", (7, 2), 1),
    SeedFact("power", (2, 3), 8),
    SeedFact("neg", (2,), -2),
    SeedFact("size", (_seq(1, 2),), 2),
    SeedFact("concat", (_seq(1), _seq(2)), _seq(1, 2)),
    SeedFact("first", (_seq(3, 1),), 3),
    SeedFact("last", (_seq(3, 1),), 1),
    SeedFact("front", (_seq(3, 1),), _seq(3)),
    SeedFact("tail", (_seq(3, 1),), _seq(1)),
    SeedFact("rev", (_seq(1, 2),), _seq(2, 1)),
)


def generated_suite(scope: Scope = DEFAULT_SCOPE, seeds=SEEDS) -> list[TestCase]:
    tests = []
    for seed in seeds:
        tests.extend(gen_unit_tests(seed, scope).tests)
    return tests


def seed_from_text(text: str, scope: Scope = DEFAULT_SCOPE) -> SeedFact:
    """Read a seed written as ``op(args) = result``, e.g. ``{1} \\/ {2} = {1,2}``.

    The fact must hold on the current kernel.
    """
    from ..evaluate import Classification, Interpreter, evaluate, prepare
    from ..kernel.context import EvalContext
    from ..syntax import parse_pred

    node = parse_pred(text)
    if node.kind != "eq":
        raise UnsupportedOperator("a seed has the form op(args) = result")
    lhs, rhs = node.children
    ops = [op for op, kind in RENDER.items() if kind == lhs.kind]
    if lhs.kind == "minus":
        ops.append("setminus")
    if not ops:
        raise UnsupportedOperator(f"no test generator for {lhs.kind}")
    typed, values = prepare(node, None, scope)
    ctx = EvalContext()
    ctx.refuel(scope.fuel)
    interp = Interpreter(typed, ctx, scope)
    args = tuple(interp.expr(c, values) for c in lhs.children)
    arg_types = tuple(typed.types[id(c)] for c in lhs.children)
    op = ops[0]
    if len(ops) > 1:  # '*' and '-' work on integers and on sets
        op = next(o for o in ops if (o in ("mul", "minus")) == isinstance(arg_types[0], IntT))
    if evaluate(typed, values, scope).classification is not Classification.TrueP:
        raise UnsupportedOperator(f"seed {text!r} does not hold")
    return SeedFact(op, args, interp.expr(rhs, values), arg_types, typed.types[id(rhs)])
