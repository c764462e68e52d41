"""Sets that are described rather than stored.

``INTEGER``, function spaces over unbounded sets, ``seq(S)`` and powersets of
those cannot be materialized. They still answer membership exactly; when a
variable has to range over one of them the candidates come from the scope
(integers in the scope range, sequences up to the cardinality bound).
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

from ..core import Scope, SetV
from ..errors import EnumerationLimit


class LazySet:
    scope: Scope

    def contains(self, ctx, x) -> bool:
        raise NotImplementedError

    def materialize(self, ctx) -> SetV:
        raise EnumerationLimit(f"{self} cannot be enumerated")

    def candidates(self, ctx) -> tuple:
        """Members of the set that lie inside the scope, in canonical order."""
        raise NotImplementedError


def _contains(ctx, s, x):
    if isinstance(s, LazySet):
        return s.contains(ctx, x)
    from .ops import member

    return member(ctx, x, s)


def _candidates(ctx, s):
    if isinstance(s, LazySet):
        return s.candidates(ctx)
    return s.elems


@dataclass(eq=False)
class IntSet(LazySet):
    name: str  # INTEGER, NATURAL or NATURAL1
    scope: Scope

    def lower(self):
        return {"INTEGER": None, "NATURAL": 0, "NATURAL1": 1}[self.name]

    def contains(self, ctx, x):
        lo = self.lower()
        return isinstance(x, int) and not isinstance(x, bool) and (lo is None or x >= lo)

    def candidates(self, ctx):
        lo = self.lower()
        start = self.scope.int_lo if lo is None else max(lo, self.scope.int_lo)
        return tuple(range(start, self.scope.int_hi + 1))

    def __str__(self):
        return self.name


@dataclass(eq=False)
class FunSpace(LazySet):
    kind: str  # rel, pfun, tfun, pinj, tinj, psurj, tsurj, tbij
    dom: object
    cod: object
    scope: Scope

    def contains(self, ctx, x):
        from .ops import FUNCTION_KINDS, is_function_kind

        if not isinstance(x, SetV):
            return False
        return is_function_kind(ctx, x, self.dom, self.cod, FUNCTION_KINDS[self.kind])

    def materialize(self, ctx):
        from .ops import funspace_members

        return funspace_members(ctx, self)

    def candidates(self, ctx):
        if not isinstance(self.dom, LazySet) and not isinstance(self.cod, LazySet):
            return self.materialize(ctx).elems
        pairs = list(itertools.product(_candidates(ctx, self.dom), _candidates(ctx, self.cod)))
        out = []
        for k in range(self.scope.max_set_card + 1):
            for combo in itertools.combinations(pairs, k):
                r = SetV(combo)
                if self.contains(ctx, r):
                    out.append(r)
        return tuple(sorted(out))

    def __str__(self):
        return f"{self.kind}({self.dom}, {self.cod})"


@dataclass(eq=False)
class PowSet(LazySet):
    base: LazySet
    nonempty: bool
    scope: Scope

    def contains(self, ctx, x):
        if not isinstance(x, SetV) or (self.nonempty and not x.elems):
            return False
        return all(self.base.contains(ctx, e) for e in x.elems)

    def candidates(self, ctx):
        base = self.base.candidates(ctx)
        out = []
        for k in range(1 if self.nonempty else 0, self.scope.max_set_card + 1):
            out.extend(SetV(c) for c in itertools.combinations(base, k))
        return tuple(sorted(out))

    def __str__(self):
        return f"POW({self.base})"


@dataclass(eq=False)
class ProductSet(LazySet):
    left: object
    right: object
    scope: Scope

    def contains(self, ctx, x):
        return isinstance(x, tuple) and _contains(ctx, self.left, x[0]) and _contains(ctx, self.right, x[1])

    def candidates(self, ctx):
        return tuple(itertools.product(_candidates(ctx, self.left), _candidates(ctx, self.right)))

    def __str__(self):
        return f"{self.left}*{self.right}"


@dataclass(eq=False)
class SeqSet(LazySet):
    elems: object
    nonempty: bool
    scope: Scope

    def contains(self, ctx, x):
        from .ops import is_sequence

        if not is_sequence(x) or (self.nonempty and not x.elems):
            return False
        return all(_contains(ctx, self.elems, p[1]) for p in x.elems)

    def candidates(self, ctx):
        from .ops import make_seq

        base = _candidates(ctx, self.elems)
        out = []
        for n in range(1 if self.nonempty else 0, self.scope.max_set_card + 1):
            out.extend(make_seq(items) for items in itertools.product(base, repeat=n))
        return tuple(sorted(out))

    def __str__(self):
        return f"seq({self.elems})"
