"""Abstract syntax shared by predicates and expressions.

A single :class:`Node` type covers both syntactic sorts; ``kind`` decides
the sort (see :data:`PRED_KINDS`). Positions never take part in equality,
so ``==`` is structural equality.
"""

from __future__ import annotations

from dataclasses import dataclass, field

Pos = tuple  # (line, column), both 1-based


@dataclass(frozen=True)
class Node:
    kind: str
    children: tuple = ()
    value: object = None
    pos: Pos = field(default=(1, 1), compare=False, repr=False)

    def __repr__(self):
        if self.kind == "ident":
            return f"Ident({self.value})"
        if self.kind == "int":
            return f"Int({self.value})"
        inner = ", ".join(repr(c) for c in self.children)
        if self.value is not None:
            inner = f"{self.value!r}; {inner}" if inner else repr(self.value)
        return f"{self.kind}({inner})"


@dataclass(frozen=True)
class Machine:
    name: str
    sets: tuple = ()  # ((carrier, (element, ...)), ...)
    constants: tuple = ()
    properties: Node | None = None
    assertions: tuple = ()
    pos: Pos = field(default=(1, 1), compare=False, repr=False)


def ident(name, pos=(1, 1)):
    return Node("ident", (), name, pos)


def intlit(n, pos=(1, 1)):
    return Node("int", (), n, pos)


# Binary operators: token -> (kind, precedence, associativity)
BINARY = {
    "<=>": ("equiv", 1, "N"),
    "=>": ("implies", 2, "N"),
    "or": ("or", 3, "L"),
    "&": ("and", 4, "L"),
    "=": ("eq", 6, "N"),
    "/=": ("neq", 6, "N"),
    ":": ("member", 6, "N"),
    "/:": ("notmember", 6, "N"),
    "<:": ("subset", 6, "N"),
    "/<:": ("notsubset", 6, "N"),
    "<<:": ("ssubset", 6, "N"),
    "/<<:": ("notssubset", 6, "N"),
    "<": ("lt", 6, "N"),
    "<=": ("le", 6, "N"),
    ">": ("gt", 6, "N"),
    ">=": ("ge", 6, "N"),
    "\\/": ("union", 7, "L"),
    "/\\": ("inter", 7, "L"),
    "\\": ("setminus", 7, "L"),
    "<+": ("override", 7, "L"),
    "<|": ("domres", 7, "L"),
    "|>": ("ranres", 7, "L"),
    "<<|": ("domsub", 7, "L"),
    "|>>": ("ransub", 7, "L"),
    ";": ("comp", 7, "L"),
    "^": ("concat", 7, "L"),
    "<->": ("rel", 7, "L"),
    "+->": ("pfun", 7, "L"),
    "-->": ("tfun", 7, "L"),
    ">+>": ("pinj", 7, "L"),
    ">->": ("tinj", 7, "L"),
    "+->>": ("psurj", 7, "L"),
    "-->>": ("tsurj", 7, "L"),
    ">->>": ("tbij", 7, "L"),
    "|->": ("pair", 8, "L"),
    "..": ("interval", 9, "N"),
    "+": ("plus", 10, "L"),
    "-": ("minus", 10, "L"),
    "*": ("mul", 11, "L"),
    "/": ("div", 11, "L"),
    "mod": ("mod", 11, "L"),
    "**": ("power", 12, "R"),
}

BINARY_BY_KIND = {kind: (tok, prec, assoc) for tok, (kind, prec, assoc) in BINARY.items()}

NEG_PREC = 13
POSTFIX_PREC = 14
ATOM_PREC = 100

# Unary builtins written name(arg)
BUILTINS = {
    "POW": "pow",
    "POW1": "pow1",
    "FIN": "fin",
    "FIN1": "fin1",
    "dom": "dom",
    "ran": "ran",
    "card": "card",
    "union": "gunion",
    "inter": "ginter",
    "min": "min",
    "max": "max",
    "id": "id",
    "size": "size",
    "first": "first",
    "last": "last",
    "front": "front",
    "tail": "tail",
    "rev": "rev",
    "seq": "seq",
    "seq1": "seq1",
}
BUILTIN_BY_KIND = {kind: name for name, kind in BUILTINS.items()}

# Keyword constants: name -> kind
CONSTANTS = {
    "TRUE": "true",
    "FALSE": "false",
    "BOOL": "BOOL",
    "INTEGER": "INTEGER",
    "NATURAL": "NATURAL",
    "NATURAL1": "NATURAL1",
    "NAT": "NAT",
    "NAT1": "NAT1",
    "INT": "INT",
    "MAXINT": "MAXINT",
    "MININT": "MININT",
}
CONSTANT_BY_KIND = {kind: name for name, kind in CONSTANTS.items()}

KEYWORDS = (
    set(BUILTINS)
    | set(CONSTANTS)
    | {"or", "mod", "not", "bool", "MACHINE", "SETS", "CONSTANTS", "PROPERTIES", "ASSERTIONS", "END"}
)

LOGICAL = {"equiv", "implies", "or", "and"}
COMPARISONS = {kind for kind, prec, _ in BINARY.values() if prec == 6}
PRED_KINDS = LOGICAL | COMPARISONS | {"not", "forall", "exists"}
BINDERS = {"forall", "exists", "cset", "lambda"}


def is_pred(node: Node) -> bool:
    return node.kind in PRED_KINDS


def walk(node: Node):
    """Pre-order traversal."""
    stack = [node]
    while stack:
        n = stack.pop()
        yield n
        stack.extend(reversed(n.children))


def free_vars(node: Node, bound=frozenset()) -> set[str]:
    if node.kind == "ident":
        return set() if node.value in bound else {node.value}
    if node.kind in BINDERS:
        inner = bound | set(node.value)
        out = set()
        for c in node.children:
            out |= free_vars(c, inner)
        return out
    out = set()
    for c in node.children:
        out |= free_vars(c, bound)
    return out
