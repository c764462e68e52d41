"""Unification-based type inference and the typed-print cross-check.

The cross-check prints a tree with every bound variable (and every empty
set) pinned by an explicit typing predicate, feeds that text back through
the ordinary parser and checker, and compares the two type assignments node
by node.
"""

from __future__ import annotations

import subprocess
from dataclasses import dataclass, field
from itertools import count

from .core import BOOL_T, INT_T, BoolT, EnumT, IntT, PowT, ProdT
from .errors import BError, TypeCheckError, UnknownIdentifier
from .syntax import Machine, Node, parse_any, pretty_print, walk
from .syntax.ast import BUILTINS, COMPARISONS


@dataclass(frozen=True)
class TVar:
    id: int

    def __str__(self):
        return f"?{self.id}"


@dataclass
class TypedExpr:
    """An AST together with the type of every expression node.

    ``types`` and ``binders`` are keyed by ``id(node)``; the tree is kept
    alive by ``node`` so the keys stay valid.
    """

    node: object
    types: dict
    binders: dict
    env: dict = field(default_factory=dict)

    def type_of(self, node):
        return self.types[id(node)]

    @property
    def root_type(self):
        if isinstance(self.node, Machine):
            return None
        return self.types.get(id(self.node))


def tuple_type(types):
    t = types[0]
    for u in types[1:]:
        t = ProdT(t, u)
    return t


_INT_SETS = {"INTEGER", "NATURAL", "NATURAL1", "NAT", "NAT1", "INT"}
_SAME_SETS = {"union", "inter", "setminus"}
_ARROWS = {"rel", "pfun", "tfun", "pinj", "tinj", "psurj", "tsurj", "tbij"}


class Checker:
    def __init__(self, free_as_vars=False):
        self.subst = {}
        self.fresh_ids = count()
        self.types = {}
        self.binders = {}
        self.empties = []
        self.free_as_vars = free_as_vars
        self.introduced = {}

    def fresh(self):
        return TVar(next(self.fresh_ids))

    # -- unification -----------------------------------------------------

    def find(self, t):
        while isinstance(t, TVar) and t in self.subst:
            t = self.subst[t]
        return t

    def resolve(self, t):
        t = self.find(t)
        if isinstance(t, ProdT):
            return ProdT(self.resolve(t.left), self.resolve(t.right))
        if isinstance(t, PowT):
            return PowT(self.resolve(t.inner))
        return t

    def occurs(self, v, t):
        t = self.find(t)
        if t == v:
            return True
        if isinstance(t, ProdT):
            return self.occurs(v, t.left) or self.occurs(v, t.right)
        if isinstance(t, PowT):
            return self.occurs(v, t.inner)
        return False

    def unify(self, a, b, node, what="operand"):
        a0, b0 = a, b
        a, b = self.find(a), self.find(b)
        if a == b:
            return
        if isinstance(a, TVar) or isinstance(b, TVar):
            v, t = (a, b) if isinstance(a, TVar) else (b, a)
            if self.occurs(v, t):
                raise TypeCheckError(node.pos, f"recursive type in {what}")
            self.subst[v] = t
            return
        if isinstance(a, PowT) and isinstance(b, PowT):
            return self.unify(a.inner, b.inner, node, what)
        if isinstance(a, ProdT) and isinstance(b, ProdT):
            self.unify(a.left, b.left, node, what)
            return self.unify(a.right, b.right, node, what)
        expected, found = self.resolve(a0), self.resolve(b0)
        raise TypeCheckError(
            node.pos,
            f"type mismatch in {what}: expected {_show(expected)}, found {_show(found)}",
            expected,
            found,
        )

    # -- inference -------------------------------------------------------

    def pred(self, node: Node, env):
        k = node.kind
        c = node.children
        if k in ("and", "or", "implies", "equiv"):
            self.pred(c[0], env)
            self.pred(c[1], env)
        elif k == "not":
            self.pred(c[0], env)
        elif k in ("forall", "exists"):
            inner = self.bind(node, env)
            self.pred(c[0], inner)
        elif k in ("eq", "neq"):
            self.unify(self.expr(c[0], env), self.expr(c[1], env), node, "equality")
        elif k in ("member", "notmember"):
            elem = self.expr(c[0], env)
            self.unify(PowT(elem), self.expr(c[1], env), node, "membership")
        elif k in ("subset", "notsubset", "ssubset", "notssubset"):
            a = self.set_of(c[0], env)
            self.unify(PowT(a), self.expr(c[1], env), node, "inclusion")
        elif k in ("lt", "le", "gt", "ge"):
            self.int_arg(c[0], env)
            self.int_arg(c[1], env)
        else:
            raise TypeCheckError(node.pos, f"not a predicate: {k}")

    def bind(self, node, env):
        inner = dict(env)
        tvs = []
        for name in node.value:
            tv = self.fresh()
            inner[name] = tv
            tvs.append(tv)
        self.binders[id(node)] = (node, tvs)
        return inner

    def int_arg(self, node, env):
        self.unify(INT_T, self.expr(node, env), node, "integer operand")

    def set_of(self, node, env):
        inner = self.fresh()
        self.unify(PowT(inner), self.expr(node, env), node, "set operand")
        return inner

    def rel_of(self, node, env):
        a, b = self.fresh(), self.fresh()
        self.unify(PowT(ProdT(a, b)), self.expr(node, env), node, "relation operand")
        return a, b

    def expr(self, node: Node, env):
        t = self._expr(node, env)
        self.types[id(node)] = (node, t)
        return t

    def _expr(self, node: Node, env):
        k = node.kind
        c = node.children
        if k == "int" or k in ("MAXINT", "MININT"):
            return INT_T
        if k in ("true", "false"):
            return BOOL_T
        if k == "BOOL":
            return PowT(BOOL_T)
        if k in _INT_SETS:
            return PowT(INT_T)
        if k == "ident":
            if node.value in env:
                return env[node.value]
            if self.free_as_vars:
                if node.value not in self.introduced:
                    self.introduced[node.value] = self.fresh()
                return self.introduced[node.value]
            raise UnknownIdentifier(node.pos, node.value)
        if k == "empty":
            self.empties.append(node)
            return PowT(self.fresh())
        if k == "setext":
            t = self.expr(c[0], env)
            for item in c[1:]:
                self.unify(t, self.expr(item, env), item, "set extension")
            return PowT(t)
        if k == "seqext":
            t = self.expr(c[0], env) if c else self.fresh()
            for item in c[1:]:
                self.unify(t, self.expr(item, env), item, "sequence extension")
            if not c:
                self.empties.append(node)
            return PowT(ProdT(INT_T, t))
        if k == "cset":
            inner = self.bind(node, env)
            self.pred(c[0], inner)
            return PowT(tuple_type(self.binders[id(node)][1]))
        if k == "lambda":
            inner = self.bind(node, env)
            self.pred(c[0], inner)
            body = self.expr(c[1], inner)
            return PowT(ProdT(tuple_type(self.binders[id(node)][1]), body))
        if k == "boolof":
            self.pred(c[0], env)
            return BOOL_T
        if k in ("plus", "div", "mod", "power"):
            self.int_arg(c[0], env)
            self.int_arg(c[1], env)
            return INT_T
        if k == "neg":
            self.int_arg(c[0], env)
            return INT_T
        if k in ("minus", "mul"):
            return self.overloaded(node, env)
        if k in _SAME_SETS:
            a = self.set_of(c[0], env)
            self.unify(PowT(a), self.expr(c[1], env), node, "set operand")
            return PowT(a)
        if k == "override":
            a, b = self.rel_of(c[0], env)
            self.unify(PowT(ProdT(a, b)), self.expr(c[1], env), node, "relation operand")
            return PowT(ProdT(a, b))
        if k in ("domres", "domsub"):
            s = self.set_of(c[0], env)
            a, b = self.rel_of(c[1], env)
            self.unify(s, a, node, "domain restriction")
            return PowT(ProdT(a, b))
        if k in ("ranres", "ransub"):
            a, b = self.rel_of(c[0], env)
            s = self.set_of(c[1], env)
            self.unify(s, b, node, "range restriction")
            return PowT(ProdT(a, b))
        if k == "comp":
            a, b = self.rel_of(c[0], env)
            b2, d = self.rel_of(c[1], env)
            self.unify(b, b2, node, "composition")
            return PowT(ProdT(a, d))
        if k == "concat":
            t = self.seq_of(c[0], env)
            self.unify(PowT(ProdT(INT_T, t)), self.expr(c[1], env), node, "concatenation")
            return PowT(ProdT(INT_T, t))
        if k in _ARROWS:
            a = self.set_of(c[0], env)
            b = self.set_of(c[1], env)
            return PowT(PowT(ProdT(a, b)))
        if k == "pair":
            return ProdT(self.expr(c[0], env), self.expr(c[1], env))
        if k == "interval":
            self.int_arg(c[0], env)
            self.int_arg(c[1], env)
            return PowT(INT_T)
        if k in ("pow", "pow1", "fin", "fin1"):
            return PowT(PowT(self.set_of(c[0], env)))
        if k == "dom":
            return PowT(self.rel_of(c[0], env)[0])
        if k == "ran":
            return PowT(self.rel_of(c[0], env)[1])
        if k == "card":
            self.set_of(c[0], env)
            return INT_T
        if k in ("min", "max"):
            self.unify(PowT(INT_T), self.expr(c[0], env), node, "integer set")
            return INT_T
        if k in ("gunion", "ginter"):
            a = self.fresh()
            self.unify(PowT(PowT(a)), self.expr(c[0], env), node, "set of sets")
            return PowT(a)
        if k == "id":
            a = self.set_of(c[0], env)
            return PowT(ProdT(a, a))
        if k == "size":
            self.seq_of(c[0], env)
            return INT_T
        if k in ("first", "last"):
            return self.seq_of(c[0], env)
        if k in ("front", "tail", "rev"):
            return PowT(ProdT(INT_T, self.seq_of(c[0], env)))
        if k in ("seq", "seq1"):
            return PowT(PowT(ProdT(INT_T, self.set_of(c[0], env))))
        if k == "inverse":
            a, b = self.rel_of(c[0], env)
            return PowT(ProdT(b, a))
        if k == "image":
            a, b = self.rel_of(c[0], env)
            self.unify(PowT(a), self.expr(c[1], env), node, "image argument")
            return PowT(b)
        if k == "apply":
            a, b = self.rel_of(c[0], env)
            self.unify(a, self.expr(c[1], env), node, "function argument")
            return b
        if k in COMPARISONS or k in ("and", "or", "implies", "equiv", "not", "forall", "exists"):
            raise TypeCheckError(node.pos, "predicate used where an expression is expected")
        raise TypeCheckError(node.pos, f"unsupported expression {k}")

    def seq_of(self, node, env):
        t = self.fresh()
        self.unify(PowT(ProdT(INT_T, t)), self.expr(node, env), node, "sequence operand")
        return t

    def overloaded(self, node, env):
        # '-' is subtraction or set difference, '*' multiplication or cartesian product
        left = self.expr(node.children[0], env)
        right = self.expr(node.children[1], env)
        lt, rt = self.find(left), self.find(right)
        is_set = isinstance(lt, PowT) or (isinstance(lt, TVar) and isinstance(rt, PowT))
        if not is_set:
            self.unify(INT_T, left, node.children[0], "integer operand")
            self.unify(INT_T, right, node.children[1], "integer operand")
            return INT_T
        a = self.set_of(node.children[0], env) if not isinstance(lt, PowT) else lt.inner
        if node.kind == "minus":
            self.unify(PowT(a), right, node.children[1], "set operand")
            return PowT(a)
        b = self.fresh()
        self.unify(PowT(b), right, node.children[1], "set operand")
        return PowT(ProdT(a, b))

    # -- finishing -------------------------------------------------------

    def finish(self, root, env) -> TypedExpr:
        for node in self.empties:
            if _has_var(self.resolve(self.types[id(node)][1])):
                raise TypeCheckError(node.pos, "ambiguous empty set")
        types = {}
        for key, (node, t) in self.types.items():
            r = self.resolve(t)
            if _has_var(r):
                raise TypeCheckError(node.pos, "cannot infer a type for this expression")
            types[key] = r
        binders = {}
        for key, (node, tvs) in self.binders.items():
            rs = tuple(self.resolve(t) for t in tvs)
            for name, r in zip(node.value, rs):
                if _has_var(r):
                    raise TypeCheckError(node.pos, f"cannot infer a type for {name}")
            binders[key] = rs
        out_env = {}
        for name, t in env.items():
            r = self.resolve(t)
            if _has_var(r):
                raise TypeCheckError(None, f"cannot infer a type for {name}")
            out_env[name] = r
        return TypedExpr(root, types, binders, out_env)


def _has_var(t) -> bool:
    if isinstance(t, TVar):
        return True
    if isinstance(t, ProdT):
        return _has_var(t.left) or _has_var(t.right)
    if isinstance(t, PowT):
        return _has_var(t.inner)
    return False


def _show(t) -> str:
    return str(t)


def machine_env(m: Machine) -> dict:
    env = {}
    for name, elems in m.sets:
        env[name] = PowT(EnumT(name))
        for e in elems:
            env[e] = EnumT(name)
    return env


def infer(ast, env=None, free_as_vars=False) -> TypedExpr:
    """Infer types for a predicate, expression or machine.

    ``env`` maps free identifiers to types. With ``free_as_vars`` unknown
    identifiers get fresh type variables instead of raising; their inferred
    types end up in the returned ``env``.
    """
    if isinstance(ast, str):
        ast = parse_any(ast)
    chk = Checker(free_as_vars=free_as_vars)
    env = dict(env or {})
    if isinstance(ast, Machine):
        env.update(machine_env(ast))
        for c in ast.constants:
            env[c] = chk.fresh()
        chk.pred(ast.properties, env)
        for a in ast.assertions:
            chk.pred(a, env)
        return chk.finish(ast, env)
    if ast.kind in _PRED_ROOTS:
        chk.pred(ast, env)
    else:
        chk.expr(ast, env)
    env.update(chk.introduced)
    return chk.finish(ast, env)


_PRED_ROOTS = COMPARISONS | {"and", "or", "implies", "equiv", "not", "forall", "exists"}


# -- typed printing ----------------------------------------------------------


def type_set(t) -> Node:
    """Expression denoting the set of all values of type ``t``."""
    if isinstance(t, IntT):
        return Node("INTEGER")
    if isinstance(t, BoolT):
        return Node("BOOL")
    if isinstance(t, EnumT):
        return Node("ident", (), t.name)
    if isinstance(t, ProdT):
        return Node("mul", (type_set(t.left), type_set(t.right)))
    if isinstance(t, PowT):
        return Node(BUILTINS["POW"], (type_set(t.inner),))
    raise TypeError(f"not a type: {t!r}")


def _conj(parts):
    out = parts[0]
    for p in parts[1:]:
        out = Node("and", (out, p))
    return out


def _typing(names, types):
    return _conj([Node("member", (Node("ident", (), n), type_set(t))) for n, t in zip(names, types)])


def annotate(typed: TypedExpr):
    """Return ``(annotated_tree, mapping)``; mapping sends ``id`` of every
    original node to its counterpart in the annotated tree."""
    mapping = {}

    def go(node: Node) -> Node:
        kids = tuple(go(c) for c in node.children)
        new = Node(node.kind, kids, node.value, node.pos)
        k = node.kind
        if k in ("forall", "exists", "cset", "lambda"):
            typing = _typing(node.value, typed.binders[id(node)])
            if k == "forall":
                body = kids[0]
                if body.kind == "implies":
                    body = Node("implies", (Node("and", (typing, body.children[0])), body.children[1]))
                else:
                    body = Node("implies", (typing, body))
                new = Node(k, (body,), node.value, node.pos)
            elif k == "lambda":
                new = Node(k, (Node("and", (typing, kids[0])), kids[1]), node.value, node.pos)
            else:
                new = Node(k, (Node("and", (typing, kids[0])),), node.value, node.pos)
        mapping[id(node)] = new
        if k == "empty" or (k == "seqext" and not kids):
            t = typed.types[id(node)]
            return Node("inter", (new, type_set(t.inner)))
        return new

    root = typed.node
    if isinstance(root, Machine):
        props = go(root.properties)
        if root.constants:
            consts = [typed.env[c] for c in root.constants]
            props = Node("and", (_typing(root.constants, consts), props))
        asserts = tuple(go(a) for a in root.assertions)
        m = Machine(root.name, root.sets, root.constants, props, asserts, root.pos)
        return m, mapping
    return go(root), mapping


def pretty_print_typed(typed: TypedExpr) -> str:
    return pretty_print(annotate(typed)[0])


# -- cross-check ---------------------------------------------------------------


@dataclass
class CrossReport:
    status: str  # "pass", "fail" or "not-applicable"
    stage: str | None = None
    message: str = ""
    typed_text: str = ""
    external_status: int | None = None

    @property
    def passed(self) -> bool:
        return self.status == "pass"


def _roots(ast):
    if isinstance(ast, Machine):
        return [ast.properties, *ast.assertions]
    return [ast]


def crosscheck_typing(text_or_ast, env=None, external_cmd=None) -> CrossReport:
    ast = parse_any(text_or_ast) if isinstance(text_or_ast, str) else text_or_ast
    try:
        t1 = infer(ast, env)
    except TypeCheckError as exc:
        return CrossReport("not-applicable", "infer", str(exc))
    annotated, mapping = annotate(t1)
    s = pretty_print(annotated)
    report = CrossReport("pass", typed_text=s)
    if external_cmd:
        proc = subprocess.run(external_cmd, shell=True, input=s, text=True, capture_output=True)
        report.external_status = proc.returncode
    try:
        reparsed = parse_any(s)
    except BError as exc:
        return _fail(report, "reparse", str(exc))
    if reparsed != annotated:
        return _fail(report, "reparse", "typed output does not re-parse to the annotated tree")
    try:
        t2 = infer(reparsed, env)
    except BError as exc:
        return _fail(report, "reinfer", str(exc))
    counterpart = {}
    for a_root, b_root in zip(_roots(annotated), _roots(reparsed)):
        for a, b in zip(walk(a_root), walk(b_root)):
            counterpart[id(a)] = b
    for key, ty in t1.types.items():
        other = t2.types.get(id(counterpart[id(mapping[key])])) if key in mapping else None
        if other != ty:
            return _fail(report, "compare", f"type {ty} became {other}")
    for key, tys in t1.binders.items():
        other = t2.binders.get(id(counterpart[id(mapping[key])]))
        if other != tys:
            return _fail(report, "compare", f"binder types {tys} became {other}")
    if report.external_status not in (None, 0):
        return _fail(report, "external", f"external checker exited with {report.external_status}")
    return report


def _fail(report, stage, message):
    report.status = "fail"
    report.stage = stage
    report.message = message
    return report
