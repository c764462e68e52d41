"""Pretty printer emitting the fewest parentheses the precedence table allows.

Layout is fixed so that printed text can be compared byte for byte:
arithmetic operators, ``..`` and ``|->`` are written without spaces, every
other binary operator gets one space on each side, and nothing is padded
inside brackets.
"""

from __future__ import annotations

from .ast import (
    ATOM_PREC,
    BINARY_BY_KIND,
    BUILTIN_BY_KIND,
    CONSTANT_BY_KIND,
    NEG_PREC,
    POSTFIX_PREC,
    Machine,
    Node,
)

TIGHT = {"plus", "minus", "mul", "div", "power", "interval", "pair"}


def precedence(node: Node, semicolon_separates=False) -> int:
    entry = BINARY_BY_KIND.get(node.kind)
    if entry is not None:
        if node.kind == "comp" and semicolon_separates:
            return -1  # always parenthesised where ';' separates clauses
        return entry[1]
    if node.kind == "neg":
        return NEG_PREC
    if node.kind in ("inverse", "image", "apply"):
        return POSTFIX_PREC
    return ATOM_PREC


def _vars(names) -> str:
    return names[0] if len(names) == 1 else "(" + ",".join(names) + ")"


class Printer:
    def __init__(self, semicolon_separates=False):
        self.semi = semicolon_separates

    def child(self, node: Node, required: int) -> str:
        if precedence(node, self.semi) < required:
            saved, self.semi = self.semi, False
            try:
                return "(" + self.fmt(node) + ")"
            finally:
                self.semi = saved
        return self.fmt(node)

    def inner(self, node: Node) -> str:
        # content of brackets: ';' is composition again
        saved, self.semi = self.semi, False
        try:
            return self.fmt(node)
        finally:
            self.semi = saved

    def fmt(self, node: Node) -> str:
        k = node.kind
        entry = BINARY_BY_KIND.get(k)
        if entry is not None:
            tok, prec, assoc = entry
            left_req = prec + 1 if assoc in ("R", "N") else prec
            right_req = prec + 1 if assoc in ("L", "N") else prec
            left = self.child(node.children[0], left_req)
            right = self.child(node.children[1], right_req)
            if k in TIGHT:
                return f"{left}{tok}{right}"
            return f"{left} {tok} {right}"
        if k == "ident":
            return node.value
        if k == "int":
            if node.value < 0:
                raise ValueError("integer literals are non-negative; use a neg node")
            return str(node.value)
        if k in CONSTANT_BY_KIND:
            return CONSTANT_BY_KIND[k]
        if k == "neg":
            return "-" + self.child(node.children[0], NEG_PREC)
        if k == "inverse":
            return self.child(node.children[0], POSTFIX_PREC) + "~"
        if k == "image":
            f, arg = node.children
            return f"{self.child(f, POSTFIX_PREC)}[{self.inner(arg)}]"
        if k == "apply":
            f, arg = node.children
            return f"{self.child(f, POSTFIX_PREC)}({self.inner(arg)})"
        if k in BUILTIN_BY_KIND:
            return f"{BUILTIN_BY_KIND[k]}({self.inner(node.children[0])})"
        if k == "not":
            return f"not({self.inner(node.children[0])})"
        if k == "boolof":
            return f"bool({self.inner(node.children[0])})"
        if k == "forall":
            return f"!{_vars(node.value)}.({self.inner(node.children[0])})"
        if k == "exists":
            return f"#{_vars(node.value)}.({self.inner(node.children[0])})"
        if k == "lambda":
            cond, body = node.children
            return f"%{_vars(node.value)}.({self.inner(cond)} | {self.inner(body)})"
        if k == "cset":
            return "{" + ",".join(node.value) + " | " + self.inner(node.children[0]) + "}"
        if k == "empty":
            return "{}"
        if k == "setext":
            return "{" + ",".join(self.inner(c) for c in node.children) + "}"
        if k == "seqext":
            return "[" + ",".join(self.inner(c) for c in node.children) + "]"
        raise ValueError(f"cannot print node kind {k!r}")


def print_machine(m: Machine) -> str:
    lines = [f"MACHINE {m.name}"]
    if m.sets:
        decls = []
        for name, elems in m.sets:
            decls.append(f"{name}={{{','.join(elems)}}}" if elems else name)
        lines += ["SETS", "  " + "; ".join(decls)]
    if m.constants:
        lines += ["CONSTANTS", "  " + ", ".join(m.constants)]
    p = Printer(semicolon_separates=True)
    lines += ["PROPERTIES", "  " + p.fmt(m.properties)]
    if m.assertions:
        lines.append("ASSERTIONS")
        body = [p.fmt(a) for a in m.assertions]
        lines += ["  " + a + (";" if i < len(body) - 1 else "") for i, a in enumerate(body)]
    lines.append("END")
    return "\n".join(lines) + "\n"


def pretty_print(ast) -> str:
    if isinstance(ast, Machine):
        return print_machine(ast)
    return Printer().fmt(ast)
