"""Precedence-climbing parser for predicates, expressions and machines.

Predicates and expressions share one grammar; the syntactic sort of every
operand is checked as nodes are built, so ``1 & 2`` and ``(x = 1) + 2`` are
parse errors.
"""

from __future__ import annotations

from ..errors import ParseError
from .ast import (
    BINARY,
    BUILTINS,
    CONSTANTS,
    LOGICAL,
    NEG_PREC,
    Machine,
    Node,
    free_vars,
    is_pred,
)
from .lexer import Token, tokenize


class Parser:
    def __init__(self, text: str):
        self.tokens = tokenize(text)
        self.i = 0
        # ';' separates machine clauses; inside brackets it is composition again
        self.semicolon_is_op = True

    # -- token helpers -----------------------------------------------------

    @property
    def tok(self) -> Token:
        return self.tokens[self.i]

    def advance(self) -> Token:
        t = self.tokens[self.i]
        self.i += 1
        return t

    def at(self, text, kind=None) -> bool:
        t = self.tok
        return t.text == text and t.kind != "eof" and (kind is None or t.kind == kind)

    def expect(self, text) -> Token:
        if not self.at(text):
            raise ParseError(self.tok.pos, f"unexpected {self.describe()}", [repr(text)])
        return self.advance()

    def expect_ident(self) -> Token:
        if self.tok.kind != "ident":
            raise ParseError(self.tok.pos, f"unexpected {self.describe()}", ["identifier"])
        return self.advance()

    def describe(self) -> str:
        t = self.tok
        return "end of input" if t.kind == "eof" else repr(t.text)

    def expect_eof(self):
        if self.tok.kind != "eof":
            raise ParseError(self.tok.pos, f"unexpected {self.describe()}", ["end of input"])

    # -- formulas ------------------------------------------------------------

    def bracketed(self, fn, *args):
        saved = self.semicolon_is_op
        self.semicolon_is_op = True
        try:
            return fn(*args)
        finally:
            self.semicolon_is_op = saved

    def binary_op(self):
        t = self.tok
        if t.kind == "symbol" or (t.kind == "keyword" and t.text in ("or", "mod")):
            if t.text == ";" and not self.semicolon_is_op:
                return None
            return BINARY.get(t.text)
        return None

    def formula(self, min_prec=0) -> Node:
        left = self.unary()
        last_prec = None
        while True:
            op = self.binary_op()
            if op is None:
                break
            kind, prec, assoc = op
            if prec < min_prec:
                break
            if assoc == "N" and last_prec == prec:
                raise ParseError(self.tok.pos, f"operator {self.tok.text!r} is not associative")
            optok = self.advance()
            right = self.formula(prec if assoc == "R" else prec + 1)
            left = self.make_binary(kind, left, right, optok)
            last_prec = prec
        return left

    def make_binary(self, kind, left, right, optok) -> Node:
        want_pred = kind in LOGICAL
        for side in (left, right):
            if is_pred(side) != want_pred:
                sort = "predicate" if want_pred else "expression"
                raise ParseError(optok.pos, f"operator {optok.text!r} needs {sort} operands")
        return Node(kind, (left, right), None, left.pos)

    def expr(self, min_prec=0) -> Node:
        start = self.tok
        node = self.formula(min_prec)
        if is_pred(node):
            raise ParseError(start.pos, "expected an expression, found a predicate")
        return node

    def pred(self) -> Node:
        start = self.tok
        node = self.formula()
        if not is_pred(node):
            raise ParseError(start.pos, "expected a predicate, found an expression")
        return node

    def unary(self) -> Node:
        t = self.tok
        if t.text == "-" and t.kind == "symbol":
            self.advance()
            operand = self.formula(NEG_PREC)
            if is_pred(operand):
                raise ParseError(t.pos, "unary minus needs an expression")
            return Node("neg", (operand,), None, t.pos)
        return self.postfix(self.primary())

    def postfix(self, node: Node) -> Node:
        while True:
            t = self.tok
            if t.kind != "symbol" or t.text not in ("~", "[", "("):
                return node
            if is_pred(node):
                raise ParseError(t.pos, f"{t.text!r} cannot follow a predicate")
            self.advance()
            if t.text == "~":
                node = Node("inverse", (node,), None, node.pos)
            elif t.text == "[":
                arg = self.bracketed(self.expr)
                self.expect("]")
                node = Node("image", (node, arg), None, node.pos)
            else:
                arg = self.bracketed(self.tuple_expr)
                self.expect(")")
                node = Node("apply", (node, arg), None, node.pos)

    def tuple_expr(self) -> Node:
        # e1,e2,...  is sugar for nested maplets
        node = self.expr()
        while self.at(","):
            self.advance()
            node = Node("pair", (node, self.expr()), None, node.pos)
        return node

    def binder_vars(self) -> tuple:
        if self.at("("):
            self.advance()
            names = [self.expect_ident().text]
            while self.at(","):
                self.advance()
                names.append(self.expect_ident().text)
            self.expect(")")
        else:
            names = [self.expect_ident().text]
        if len(set(names)) != len(names):
            raise ParseError(self.tok.pos, "repeated bound variable")
        return tuple(names)

    def primary(self) -> Node:
        t = self.tok
        if t.kind == "int":
            self.advance()
            return Node("int", (), int(t.text), t.pos)
        if t.kind == "ident":
            self.advance()
            return Node("ident", (), t.text, t.pos)
        if t.kind == "keyword":
            if t.text in CONSTANTS:
                self.advance()
                return Node(CONSTANTS[t.text], (), None, t.pos)
            if t.text in BUILTINS:
                self.advance()
                self.expect("(")
                arg = self.bracketed(self.expr)
                self.expect(")")
                return Node(BUILTINS[t.text], (arg,), None, t.pos)
            if t.text in ("not", "bool"):
                self.advance()
                self.expect("(")
                body = self.bracketed(self.pred)
                self.expect(")")
                return Node("not" if t.text == "not" else "boolof", (body,), None, t.pos)
        if t.kind == "symbol":
            if t.text in ("!", "#"):
                self.advance()
                names = self.binder_vars()
                self.expect(".")
                self.expect("(")
                body = self.bracketed(self.pred)
                self.expect(")")
                return Node("forall" if t.text == "!" else "exists", (body,), names, t.pos)
            if t.text == "%":
                self.advance()
                names = self.binder_vars()
                self.expect(".")
                self.expect("(")
                cond = self.bracketed(self.pred)
                self.expect("|")
                body = self.bracketed(self.expr)
                self.expect(")")
                return Node("lambda", (cond, body), names, t.pos)
            if t.text == "(":
                self.advance()
                inner = self.bracketed(self.formula)
                if self.at(","):
                    if is_pred(inner):
                        raise ParseError(self.tok.pos, "a pair needs expression components")
                    while self.at(","):
                        self.advance()
                        inner = Node("pair", (inner, self.bracketed(self.expr)), None, inner.pos)
                self.expect(")")
                return inner
            if t.text == "{":
                return self.brace()
            if t.text == "[":
                self.advance()
                items = []
                if not self.at("]"):
                    items.append(self.bracketed(self.expr))
                    while self.at(","):
                        self.advance()
                        items.append(self.bracketed(self.expr))
                self.expect("]")
                return Node("seqext", tuple(items), None, t.pos)
        raise ParseError(t.pos, f"unexpected {self.describe()}", ["expression", "predicate"])

    def brace(self) -> Node:
        t = self.advance()
        if self.at("}"):
            self.advance()
            return Node("empty", (), None, t.pos)
        if self.is_comprehension():
            names = [self.expect_ident().text]
            while self.at(","):
                self.advance()
                names.append(self.expect_ident().text)
            if len(set(names)) != len(names):
                raise ParseError(t.pos, "repeated bound variable")
            self.expect("|")
            body = self.bracketed(self.pred)
            self.expect("}")
            return Node("cset", (body,), tuple(names), t.pos)
        items = [self.bracketed(self.expr)]
        while self.at(","):
            self.advance()
            items.append(self.bracketed(self.expr))
        self.expect("}")
        return Node("setext", tuple(items), None, t.pos)

    def is_comprehension(self) -> bool:
        j = self.i
        toks = self.tokens
        while True:
            if toks[j].kind != "ident":
                return False
            j += 1
            if toks[j].text == "|" and toks[j].kind == "symbol":
                return True
            if toks[j].text != "," or toks[j].kind != "symbol":
                return False
            j += 1

    # -- machines ----------------------------------------------------------

    def machine(self) -> Machine:
        start = self.expect("MACHINE")
        name = self.expect_ident().text
        sets, constants, props, assertions = [], [], None, []
        self.semicolon_is_op = False
        if self.at("SETS"):
            self.advance()
            sets.append(self.set_decl())
            while self.at(";"):
                self.advance()
                sets.append(self.set_decl())
        if self.at("CONSTANTS"):
            self.advance()
            constants.append(self.expect_ident().text)
            while self.at(","):
                self.advance()
                constants.append(self.expect_ident().text)
        self.expect("PROPERTIES")
        props = self.pred()
        if self.at("ASSERTIONS"):
            self.advance()
            assertions.append(self.pred())
            while self.at(";"):
                self.advance()
                assertions.append(self.pred())
        self.expect("END")
        self.expect_eof()
        self.semicolon_is_op = True
        declared = [s for s, _ in sets] + [e for _, es in sets for e in es] + constants
        if len(set(declared)) != len(declared):
            raise ParseError(start.pos, "identifiers declared twice in SETS/CONSTANTS")
        mentioned = free_vars(props)
        for c in constants:
            if c not in mentioned:
                raise ParseError(start.pos, f"constant {c} does not occur in PROPERTIES")
        return Machine(name, tuple(sets), tuple(constants), props, tuple(assertions), start.pos)

    def set_decl(self):
        name = self.expect_ident().text
        elems = []
        if self.at("="):
            self.advance()
            self.expect("{")
            elems.append(self.expect_ident().text)
            while self.at(","):
                self.advance()
                elems.append(self.expect_ident().text)
            self.expect("}")
        return (name, tuple(elems))


def parse_pred(text: str) -> Node:
    p = Parser(text)
    node = p.pred()
    p.expect_eof()
    return node


def parse_expr(text: str) -> Node:
    p = Parser(text)
    node = p.expr()
    p.expect_eof()
    return node


def parse_formula(text: str) -> Node:
    """Parse either sort."""
    p = Parser(text)
    node = p.formula()
    p.expect_eof()
    return node


def parse_machine(text: str) -> Machine:
    return Parser(text).machine()


def parse_any(text: str):
    if text.lstrip().startswith("MACHINE"):
        return parse_machine(text)
    return parse_formula(text)
