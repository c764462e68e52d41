"""Data operators over canonical values, with coverage and mutation hooks."""

from . import ops
from .context import CATALOG, MUTATIONS, EvalContext, OpInfo, all_branches, new_coverage
from .lazy import FunSpace, IntSet, LazySet, PowSet, ProductSet, SeqSet
from .ops import FUNCTION_KINDS, is_function_kind, is_sequence, make_seq


def set_mutation(ctx: EvalContext, m):
    """Route later kernel calls made with ``ctx`` through mutation ``m`` (or none)."""
    ctx.set_mutation(m)


def eval_expr(e, env=None, scope=None, fuel=None, ctx=None):
    """Evaluate an expression; raises Undefined, Timeout or InternalError."""
    from ..evaluate import eval_expr as _eval

    return _eval(e, env, scope, fuel, ctx)


__all__ = [
    "CATALOG",
    "FUNCTION_KINDS",
    "MUTATIONS",
    "EvalContext",
    "FunSpace",
    "IntSet",
    "LazySet",
    "OpInfo",
    "PowSet",
    "ProductSet",
    "SeqSet",
    "all_branches",
    "eval_expr",
    "is_function_kind",
    "is_sequence",
    "make_seq",
    "new_coverage",
    "ops",
    "set_mutation",
]
