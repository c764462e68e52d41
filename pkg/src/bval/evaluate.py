"""Expression evaluation and dual positive/negative predicate evaluation.

Every predicate is evaluated twice: the positive chain tries to establish
that it holds, the negative chain that it does not. Connectives are
evaluated left to right, so a conjunct whose left part is false never looks
at its right part. Atomic negatives use their own kernel algorithms, which
is what makes a disagreement between the chains evidence of a kernel bug.
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass, field
from enum import Enum

from .core import DEFAULT_SCOPE, EnumT, PowT, ProdT, Scope, SetV, enumerate_type, type_of_value, value_str
from .errors import EnumerationLimit, Timeout, Undefined, UnknownIdentifier
from .kernel import ops
from .kernel.context import EvalContext
from .kernel.lazy import FunSpace, IntSet, LazySet, PowSet, ProductSet, SeqSet
from .syntax import Machine, Node, parse_expr, parse_pred, pretty_print
from .syntax.ast import free_vars
from .typecheck import TypedExpr, infer


class Outcome(Enum):
    TRUE = "true"
    FALSE = "false"
    FAIL = "fail"
    TIMEOUT = "timeout"


class Classification(Enum):
    BugBothTrueFalse = "both_true_false"
    TrueP = "true"
    FalseP = "false"
    NotWellDefined = "not_well_defined"
    ProbablyTrue = "probably_true"
    FalseOrUndefined = "false_or_undefined"
    ProbablyFalse = "probably_false"
    TrueOrUndefined = "true_or_undefined"
    Unknown = "unknown"

    @property
    def verdict(self) -> str:
        """Label used in machine reports."""
        if self in (Classification.NotWellDefined, Classification.Unknown):
            return "unknown"
        return self.value


_T, _F, _O = Outcome.TRUE, Outcome.FALSE, Outcome.TIMEOUT

CLASSIFICATION_TABLE = {
    (_T, _T): Classification.BugBothTrueFalse,
    (_T, _F): Classification.TrueP,
    (_F, _T): Classification.FalseP,
    (_F, _F): Classification.NotWellDefined,
    (_T, _O): Classification.ProbablyTrue,
    (_F, _O): Classification.FalseOrUndefined,
    (_O, _T): Classification.ProbablyFalse,
    (_O, _F): Classification.TrueOrUndefined,
    (_O, _O): Classification.Unknown,
}


def classify(pos: Outcome, neg: Outcome) -> Classification:
    # a failing chain did not succeed, which the table counts as false
    if pos is Outcome.FAIL:
        pos = Outcome.FALSE
    if neg is Outcome.FAIL:
        neg = Outcome.FALSE
    return CLASSIFICATION_TABLE[pos, neg]


def tuple_value(vals):
    v = vals[0]
    for w in vals[1:]:
        v = (v, w)
    return v


def _conjuncts(node):
    if node.kind == "and":
        return _conjuncts(node.children[0]) + _conjuncts(node.children[1])
    return [node]


_COMPLEMENT = {"lt": "ge", "le": "gt", "gt": "le", "ge": "lt"}
_UNARY = {
    "gunion": ops.gunion,
    "ginter": ops.ginter,
    "card": ops.card,
    "min": ops.min_,
    "max": ops.max_,
    "dom": ops.dom,
    "ran": ops.ran,
    "id": ops.identity,
    "size": ops.size,
    "first": ops.first,
    "last": ops.last,
    "front": ops.front,
    "tail": ops.tail,
    "rev": ops.rev,
    "inverse": ops.inverse,
}
_BINARY = {
    "union": ops.union,
    "inter": ops.inter,
    "setminus": ops.setminus,
    "override": ops.override,
    "domres": ops.domres,
    "ranres": ops.ranres,
    "domsub": ops.domsub,
    "ransub": ops.ransub,
    "comp": ops.comp,
    "concat": ops.concat,
    "interval": ops.interval,
    "plus": ops.plus,
    "div": ops.div,
    "mod": ops.mod,
    "power": ops.power,
    "image": ops.image,
    "apply": ops.apply,
}
_ARROWS = set(ops.FUNCTION_KINDS)


class Interpreter:
    """Evaluates the nodes of one type-checked tree under varying environments."""

    def __init__(self, typed: TypedExpr, ctx: EvalContext, scope: Scope = DEFAULT_SCOPE):
        self.typed = typed
        self.ctx = ctx
        self.scope = scope
        self.undefined: str | None = None
        self._fv = {}

    # -- entry points ------------------------------------------------------

    def run(self, chain: str, node: Node, env, fuel=None) -> Outcome:
        if chain in self.ctx.force_timeout:
            return Outcome.TIMEOUT
        self.ctx.refuel(self.scope.fuel if fuel is None else fuel)
        try:
            return self.pos(node, env) if chain == "pos" else self.neg(node, env)
        except Timeout:
            return Outcome.TIMEOUT

    def classify(self, node: Node, env) -> Classification:
        return classify(self.run("pos", node, env), self.run("neg", node, env))

    # -- helpers -------------------------------------------------------------

    def free(self, node):
        fv = self._fv.get(id(node))
        if fv is None:
            fv = self._fv[id(node)] = frozenset(free_vars(node))
        return fv

    def _guarded(self, fn, *args) -> Outcome:
        try:
            return _T if fn(*args) else _F
        except Undefined as exc:
            if self.undefined is None:
                self.undefined = exc.reason
            return Outcome.FAIL
        except Timeout:
            return Outcome.TIMEOUT

    # -- predicates: positive chain ----------------------------------------------

    def pos(self, node: Node, env) -> Outcome:
        self.ctx.tick()
        k = node.kind
        c = node.children
        if k == "and":
            a = self.pos(c[0], env)
            return self.pos(c[1], env) if a is _T else a
        if k == "or":
            a = self.pos(c[0], env)
            return self.pos(c[1], env) if a is _F else a
        if k == "implies":
            a = self.neg(c[0], env)
            return self.pos(c[1], env) if a is _F else a
        if k == "equiv":
            a = self.pos(c[0], env)
            if a is _T:
                return self.pos(c[1], env)
            if a is _F:
                return self.neg(c[1], env)
            return a
        if k == "not":
            return self.neg(c[0], env)
        if k == "exists":
            return self.quantify(node, env, self.pos, stop_on=_T, default=_F)
        if k == "forall":
            return self.quantify(node, env, self.pos, stop_on=_F, default=_T)
        return self._guarded(self.atom, k, c, env, False)

    # -- predicates: negative chain ----------------------------------------------

    def neg(self, node: Node, env) -> Outcome:
        self.ctx.tick()
        k = node.kind
        c = node.children
        if k == "and":
            a = self.neg(c[0], env)
            return self.neg(c[1], env) if a is _F else a
        if k == "or":
            a = self.neg(c[0], env)
            return self.neg(c[1], env) if a is _T else a
        if k == "implies":
            a = self.pos(c[0], env)
            return self.neg(c[1], env) if a is _T else a
        if k == "equiv":
            a = self.pos(c[0], env)
            if a is _T:
                return self.neg(c[1], env)
            if a is _F:
                return self.pos(c[1], env)
            return a
        if k == "not":
            return self.pos(c[0], env)
        if k == "exists":
            # no witness: the negation of the body holds everywhere
            return self.quantify(node, env, self.neg, stop_on=_F, default=_T)
        if k == "forall":
            return self.quantify(node, env, self.neg, stop_on=_T, default=_F)
        return self._guarded(self.atom, k, c, env, True)

    def quantify(self, node, env, chain, stop_on, default) -> Outcome:
        """Run ``chain`` on the body for every candidate assignment.

        The first result equal to ``stop_on`` decides; a failure or timeout
        ends the search with that outcome.
        """
        body = node.children[0]
        guard = body.children[0] if node.kind == "forall" and body.kind == "implies" else body
        if node.kind == "forall" and body.kind != "implies":
            guard = None
        try:
            for e in self.assignments(node, guard, env):
                r = chain(body, e)
                if r is stop_on:
                    return r
                if r is not _T and r is not _F:
                    return r
        except Undefined as exc:
            if self.undefined is None:
                self.undefined = exc.reason
            return Outcome.FAIL
        except Timeout:
            return Outcome.TIMEOUT
        return default

    def atom(self, k, c, env, negated) -> bool:
        a = self.expr(c[0], env)
        b = self.expr(c[1], env)
        ctx = self.ctx
        if negated:
            k = {
                "eq": "neq",
                "neq": "eq",
                "member": "notmember",
                "notmember": "member",
                "subset": "notsubset",
                "notsubset": "subset",
                "ssubset": "notssubset",
                "notssubset": "ssubset",
            }.get(k) or _COMPLEMENT[k]
        if k == "eq":
            return ops.equal(ctx, a, b)
        if k == "neq":
            return ops.differs(ctx, a, b)
        if k == "member":
            return ops.member(ctx, a, b)
        if k == "notmember":
            return ops.not_member(ctx, a, b)
        if k == "subset":
            return ops.subset(ctx, a, b)
        if k == "notsubset":
            return ops.not_subset(ctx, a, b)
        if k == "ssubset":
            return ops.subset(ctx, a, b) and ops.differs(ctx, a, b)
        if k == "notssubset":
            return ops.not_subset(ctx, a, b) or ops.equal(ctx, a, b)
        return ops.int_compare(ctx, k, a, b)

    # -- binder domains ------------------------------------------------------------

    def assignments(self, node, guard, env):
        """Environments extending ``env`` with the binder's variables.

        Each variable ranges over a set read off the guard when a conjunct
        pins it down (``v : S``, ``v = e``, a disjunction of those, or integer
        bounds); otherwise over its type within the scope.
        """
        names = node.value
        types = self.typed.binders[id(node)]
        conjs = _conjuncts(guard) if guard is not None else []

        def go(i, e):
            if i == len(names):
                yield e
                return
            later = frozenset(names[i:])
            for v in self.candidates(names[i], later, types[i], conjs, e):
                e2 = dict(e)
                e2[names[i]] = v
                yield from go(i + 1, e2)

        return go(0, env)

    def _closed(self, node, unbound):
        return not (self.free(node) & unbound)

    def _pinned(self, c, name, unbound, env):
        k = c.kind
        if k == "member":
            x, s = c.children
            if x.kind == "ident" and x.value == name and self._closed(s, unbound):
                return self.expr(s, env)
        elif k == "eq":
            for x, y in (c.children, c.children[::-1]):
                if x.kind == "ident" and x.value == name and self._closed(y, unbound):
                    return SetV((self.expr(y, env),))
        elif k == "or":
            left = self._pinned(c.children[0], name, unbound, env)
            if isinstance(left, SetV):
                right = self._pinned(c.children[1], name, unbound, env)
                if isinstance(right, SetV):
                    return SetV.of(left.members | right.members)
        return None

    def candidates(self, name, unbound, typ, conjs, env):
        lazy = None
        lo = hi = None
        for c in conjs:
            s = self._pinned(c, name, unbound, env)
            if isinstance(s, SetV):
                return s.elems
            if isinstance(s, LazySet) and lazy is None:
                lazy = s
            if c.kind in _COMPLEMENT:
                a, b = c.children
                kind = c.kind
                if b.kind == "ident" and b.value == name:
                    a, b, kind = b, a, {"lt": "gt", "le": "ge", "gt": "lt", "ge": "le"}[kind]
                if a.kind == "ident" and a.value == name and self._closed(b, unbound):
                    bound = self.expr(b, env)
                    if kind == "lt":
                        hi = bound - 1 if hi is None else min(hi, bound - 1)
                    elif kind == "le":
                        hi = bound if hi is None else min(hi, bound)
                    elif kind == "gt":
                        lo = bound + 1 if lo is None else max(lo, bound + 1)
                    else:
                        lo = bound if lo is None else max(lo, bound)
        if lo is not None and hi is not None:
            if hi - lo > 10**6:
                raise EnumerationLimit(f"range {lo}..{hi} for {name} is too large")
            return range(lo, hi + 1)
        if lazy is not None:
            return self.ctx.enumerate(lazy.candidates(self.ctx))
        return self.ctx.enumerate(enumerate_type(typ, self.scope))

    # -- expressions -----------------------------------------------------------------

    def expr(self, node: Node, env):
        self.ctx.tick()
        k = node.kind
        c = node.children
        ctx = self.ctx
        if k == "ident":
            try:
                return env[node.value]
            except KeyError:
                raise UnknownIdentifier(node.pos, node.value) from None
        if k == "int":
            return node.value
        fn = _BINARY.get(k)
        if fn is not None:
            return fn(ctx, self.expr(c[0], env), self.expr(c[1], env))
        fn = _UNARY.get(k)
        if fn is not None:
            return fn(ctx, self.expr(c[0], env))
        if k == "pair":
            return (self.expr(c[0], env), self.expr(c[1], env))
        if k == "minus":
            a, b = self.expr(c[0], env), self.expr(c[1], env)
            if isinstance(a, int):
                return ops.minus(ctx, a, b)
            return ops.setminus(ctx, a, b)
        if k == "mul":
            a, b = self.expr(c[0], env), self.expr(c[1], env)
            if isinstance(a, int):
                return ops.mul(ctx, a, b)
            if isinstance(a, LazySet) or isinstance(b, LazySet):
                return ProductSet(a, b, self.scope)
            return ops.product(ctx, a, b)
        if k == "neg":
            return ops.neg(ctx, self.expr(c[0], env))
        if k == "setext":
            return SetV.of(self.expr(x, env) for x in c)
        if k == "empty":
            return ops.EMPTY
        if k == "seqext":
            return ops.seqext(ctx, [self.expr(x, env) for x in c])
        if k in ("true", "false"):
            return k == "true"
        if k == "BOOL":
            return SetV((False, True))
        if k in ("INTEGER", "NATURAL", "NATURAL1"):
            return IntSet(k, self.scope)
        if k == "NAT":
            return ops.interval(ctx, 0, self.scope.int_hi)
        if k == "NAT1":
            return ops.interval(ctx, 1, self.scope.int_hi)
        if k == "INT":
            return ops.interval(ctx, self.scope.int_lo, self.scope.int_hi)
        if k == "MAXINT":
            return self.scope.int_hi
        if k == "MININT":
            return self.scope.int_lo
        if k in ("pow", "fin"):
            s = self.expr(c[0], env)
            if isinstance(s, LazySet):
                return PowSet(s, False, self.scope)
            return ops.pow_(ctx, s) if k == "pow" else ops.fin(ctx, s)
        if k in ("pow1", "fin1"):
            s = self.expr(c[0], env)
            if isinstance(s, LazySet):
                return PowSet(s, True, self.scope)
            return ops.pow1(ctx, s) if k == "pow1" else ops.fin1(ctx, s)
        if k in _ARROWS:
            return FunSpace(k, self.expr(c[0], env), self.expr(c[1], env), self.scope)
        if k in ("seq", "seq1"):
            return SeqSet(self.expr(c[0], env), k == "seq1", self.scope)
        if k == "cset":
            return SetV.of(tuple_value([e[n] for n in node.value]) for e in self.solutions(node, c[0], env))
        if k == "lambda":
            out = []
            for e in self.solutions(node, c[0], env):
                out.append((tuple_value([e[n] for n in node.value]), self.expr(c[1], e)))
            return SetV.of(out)
        if k == "boolof":
            return self.truth(c[0], env)
        raise ValueError(f"cannot evaluate node kind {k!r}")

    def truth(self, pred, env) -> bool:
        r = self.pos(pred, env)
        if r is _T:
            return True
        if r is _F:
            return False
        if r is Outcome.TIMEOUT:
            raise Timeout("predicate evaluation timed out")
        raise Undefined(self.undefined or "predicate is not well-defined")

    def solutions(self, node, pred, env):
        for e in self.assignments(node, pred, env):
            if self.truth(pred, e):
                yield e


# -- public API ----------------------------------------------------------------


def _complete(t) -> bool:
    if t is None:
        return False
    if isinstance(t, PowT):
        return _complete(t.inner)
    if isinstance(t, ProdT):
        return _complete(t.left) and _complete(t.right)
    return True


def _carriers(t, out):
    if isinstance(t, EnumT):
        out.add(t.name)
    elif isinstance(t, PowT):
        _carriers(t.inner, out)
    elif isinstance(t, ProdT):
        _carriers(t.left, out)
        _carriers(t.right, out)


def carrier_env(names, scope: Scope):
    """Type and value bindings for carrier sets and their elements."""
    types, values = {}, {}
    for name in sorted(names):
        elems = scope.carrier_elems(name)
        types[name] = PowT(EnumT(name))
        values[name] = SetV(elems)
        for e in elems:
            types[e.name] = EnumT(name)
            values[e.name] = e
    return types, values


def prepare(p, env=None, scope: Scope = DEFAULT_SCOPE, expression=False):
    """Parse and type a formula against the values in ``env``.

    Returns ``(typed, values)``; ``typed.env`` also lists the free
    identifiers that ``env`` leaves unbound.
    """
    env = dict(env or {})
    if isinstance(p, TypedExpr):
        typed = p
        carriers = set()
        for t in typed.env.values():
            _carriers(t, carriers)
        return typed, {**carrier_env(carriers, scope)[1], **env}
    if isinstance(p, str):
        p = parse_expr(p) if expression else parse_pred(p)
    carriers = set(scope.carriers) | set(scope.elements)
    types = {}
    for name, v in env.items():
        t = type_of_value(v)
        if _complete(t):
            types[name] = t
            _carriers(t, carriers)
    ctypes, cvalues = carrier_env(carriers, scope)
    typed = infer(p, {**ctypes, **types}, free_as_vars=True)
    return typed, {**cvalues, **env}


def _unbound(typed, values):
    return [n for n in sorted(free_vars(typed.node)) if n not in values]


def _context(ctx, scope, fuel):
    ctx = ctx or EvalContext()
    ctx.refuel(fuel if fuel is not None else scope.fuel)
    return ctx


def eval_expr(e, env=None, scope: Scope | None = None, fuel=None, ctx=None):
    scope = scope or DEFAULT_SCOPE
    typed, values = prepare(e, env, scope, expression=True)
    missing = _unbound(typed, values)
    if missing:
        raise UnknownIdentifier(None, missing[0])
    ctx = _context(ctx, scope, fuel)
    return Interpreter(typed, ctx, scope).expr(typed.node, values)


def _chain(chain, p, env, scope, fuel, ctx):
    scope = scope or DEFAULT_SCOPE
    typed, values = prepare(p, env, scope)
    missing = _unbound(typed, values)
    if missing:
        raise UnknownIdentifier(None, missing[0])
    ctx = _context(ctx, scope, fuel)
    return Interpreter(typed, ctx, scope).run(chain, typed.node, values, fuel)


def eval_pos(p, env=None, scope: Scope | None = None, fuel=None, ctx=None) -> Outcome:
    return _chain("pos", p, env, scope, fuel, ctx)


def eval_neg(p, env=None, scope: Scope | None = None, fuel=None, ctx=None) -> Outcome:
    return _chain("neg", p, env, scope, fuel, ctx)


@dataclass
class EvalResult:
    pos: Outcome
    neg: Outcome
    classification: Classification
    undefined: str | None = None


def evaluate(p, env=None, scope: Scope | None = None, fuel=None, ctx=None) -> EvalResult:
    scope = scope or DEFAULT_SCOPE
    typed, values = prepare(p, env, scope)
    missing = _unbound(typed, values)
    if missing:
        raise UnknownIdentifier(None, missing[0])
    ctx = ctx or EvalContext()
    interp = Interpreter(typed, ctx, scope)
    return _both(interp, typed.node, values, fuel if fuel is not None else scope.fuel)


def _both(interp, node, values, fuel):
    interp.undefined = None
    pos = interp.run("pos", node, values, fuel)
    neg = interp.run("neg", node, values, fuel)
    return EvalResult(pos, neg, classify(pos, neg), interp.undefined)


def colex(lists):
    """Cartesian product in which the first list varies fastest."""
    for combo in itertools.product(*reversed(lists)):
        yield combo[::-1]


@dataclass
class Solutions:
    """Stream of satisfying assignments; filled in while it is consumed."""

    vars: list
    checked: int = 0
    undefined: list = field(default_factory=list)
    _gen: object = None

    def __iter__(self):
        return self._gen


def solve(p, vars=None, scope: Scope | None = None, env=None, ctx=None, fuel=None) -> Solutions:
    """Enumerate assignments of ``vars`` that make ``p`` classify as true.

    ``vars`` is a list of names or ``(name, type)`` pairs; by default all
    free identifiers of ``p`` that ``env`` does not bind. Assignments are
    tried in canonical order with the first variable varying fastest.
    Assignments on which ``p`` is not well-defined are collected in
    ``Solutions.undefined``.
    """
    scope = scope or DEFAULT_SCOPE
    typed, values = prepare(p, env, scope)
    if vars is None:
        vars = _unbound(typed, values)
    names, types = [], []
    for v in vars:
        name, t = v if isinstance(v, tuple) else (v, typed.env[v])
        names.append(name)
        types.append(t)
    ctx = ctx or EvalContext()
    interp = Interpreter(typed, ctx, scope)
    result = Solutions(list(zip(names, types)))
    budget = fuel if fuel is not None else scope.fuel

    def gen():
        lists = [ctx.enumerate(enumerate_type(t, scope)) for t in types]
        for combo in colex(lists):
            assignment = dict(zip(names, combo))
            r = _both(interp, typed.node, {**values, **assignment}, budget)
            result.checked += 1
            if r.classification is Classification.TrueP:
                yield assignment
            elif r.classification is Classification.NotWellDefined:
                result.undefined.append(assignment)

    result._gen = gen()
    return result


def format_env(env) -> str:
    return ", ".join(f"{k}={value_str(v)}" for k, v in env.items())


# -- machines --------------------------------------------------------------------


@dataclass
class MachineReport:
    name: str
    entries: list  # (assertion text, verdict)
    binding: dict | None
    status: str = "ok"

    @property
    def failures(self) -> int:
        if self.status != "ok":
            return 1
        return sum(1 for _, v in self.entries if v != "true")

    def text(self) -> str:
        if self.status != "ok":
            return f"{self.status}\n"
        return "".join(f"{a}\n== {v}\n\n" for a, v in self.entries)

    def to_json(self) -> str:
        if self.status != "ok":
            return json.dumps({"machine": self.name, "status": self.status})
        return json.dumps([{"assertion": a, "verdict": v} for a, v in self.entries], indent=2)


def machine_scope(m: Machine, scope: Scope) -> Scope:
    elements = dict(scope.elements)
    for name, elems in m.sets:
        if elems:
            elements[name] = elems
    return scope.replace(elements=elements)


def check_machine(m: Machine, scope: Scope | None = None, ctx=None) -> MachineReport:
    """Bind the constants to the first solution of PROPERTIES, then classify
    every assertion under that binding."""
    scope = machine_scope(m, scope or DEFAULT_SCOPE)
    typed = infer(m)
    ctx = ctx or EvalContext()
    interp = Interpreter(typed, ctx, scope)
    _, values = carrier_env([name for name, _ in m.sets], scope)
    lists = [ctx.enumerate(enumerate_type(typed.env[c], scope)) for c in m.constants]
    binding = None
    for combo in colex(lists):
        env = {**values, **dict(zip(m.constants, combo))}
        if _both(interp, m.properties, env, scope.fuel).classification is Classification.TrueP:
            binding = dict(zip(m.constants, combo))
            break
    if binding is None:
        return MachineReport(m.name, [], None, "properties unsatisfiable")
    env = {**values, **binding}
    entries = []
    for a in m.assertions:
        r = _both(interp, a, env, scope.fuel)
        entries.append((pretty_print(a), r.classification.verdict))
    return MachineReport(m.name, entries, binding)


__all__ = [
    "Classification",
    "EvalResult",
    "Interpreter",
    "MachineReport",
    "Outcome",
    "Solutions",
    "check_machine",
    "classify",
    "colex",
    "eval_expr",
    "eval_neg",
    "eval_pos",
    "evaluate",
    "prepare",
    "solve",
]
