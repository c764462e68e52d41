"""Random syntax trees for print/parse fidelity testing.

The trees are syntactically well-formed (predicates where predicates are
expected, expressions elsewhere) but make no attempt to be well-typed.
"""

from __future__ import annotations

import random

from .ast import BINARY, BUILTINS, CONSTANTS, LOGICAL, Node

NAMES = ("xx", "yy", "zz", "SS", "ff", "el1")
EXPR_BINARY = tuple(kind for kind, prec, _ in BINARY.values() if prec >= 7)
COMPARE = tuple(kind for kind, prec, _ in BINARY.values() if prec == 6)
LOGIC = tuple(sorted(LOGICAL))
UNARY_BUILTINS = tuple(BUILTINS.values())
CONSTANT_KINDS = tuple(CONSTANTS.values())


def _names(rng):
    return tuple(rng.sample(NAMES[:3], rng.randint(1, 2)))


def random_expr(rng: random.Random, depth: int) -> Node:
    if depth <= 1:
        pick = rng.randrange(4)
        if pick == 0:
            return Node("int", (), rng.randint(0, 20))
        if pick == 1:
            return Node(rng.choice(CONSTANT_KINDS))
        if pick == 2:
            return Node("empty")
        return Node("ident", (), rng.choice(NAMES))
    d = depth - 1
    # predicates need two levels, so shallow expressions skip binder forms
    pick = rng.randrange(12 if d >= 2 else 9)
    if pick <= 4:
        return Node(rng.choice(EXPR_BINARY), (random_expr(rng, d), random_expr(rng, d)))
    if pick == 5:
        return Node(rng.choice(("neg", "inverse")), (random_expr(rng, d),))
    if pick == 6:
        return Node(rng.choice(("image", "apply")), (random_expr(rng, d), random_expr(rng, d)))
    if pick == 7:
        return Node(rng.choice(UNARY_BUILTINS), (random_expr(rng, d),))
    if pick == 8:
        kind = rng.choice(("setext", "seqext"))
        return Node(kind, tuple(random_expr(rng, d) for _ in range(rng.randint(1, 3))))
    if pick == 9:
        return Node("cset", (random_pred(rng, d),), _names(rng))
    if pick == 10:
        return Node("lambda", (random_pred(rng, d), random_expr(rng, d)), _names(rng))
    return Node("boolof", (random_pred(rng, d),))


def random_pred(rng: random.Random, depth: int) -> Node:
    if depth <= 2:
        return Node(rng.choice(COMPARE), (random_expr(rng, 1), random_expr(rng, 1)))
    d = depth - 1
    pick = rng.randrange(6)
    if pick <= 1:
        return Node(rng.choice(COMPARE), (random_expr(rng, d), random_expr(rng, d)))
    if pick <= 3:
        return Node(rng.choice(LOGIC), (random_pred(rng, d), random_pred(rng, d)))
    if pick == 4:
        return Node("not", (random_pred(rng, d),))
    return Node(rng.choice(("forall", "exists")), (random_pred(rng, d),), _names(rng))


def random_asts(count: int, seed: int = 0, max_depth: int = 6):
    """Yield ``count`` trees of depth at most ``max_depth``, reproducibly."""
    rng = random.Random(seed)
    for i in range(count):
        depth = rng.randint(1, max_depth)
        if i % 2:
            yield random_pred(rng, max(depth, 2))
        else:
            yield random_expr(rng, depth)


def depth(node: Node) -> int:
    return 1 + max((depth(c) for c in node.children), default=0)
