"""Evaluation context: mutation flag, fuel, branch coverage and the op catalog."""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field

from ..errors import FuelExhausted, InternalError, UnknownMutation

MUTATIONS = {
    "M1": "intersection computes set difference",
    "M2": "integer multiplication returns 10 for 3*3",
    "M3": "partial-function test checks dom(r) <: codomain instead of domain",
    "M4": "variable enumeration skips every third value",
    "M5": "membership in a singleton set is negated",
}


@dataclass(frozen=True)
class OpInfo:
    op: str
    module: str
    arity: int
    branches: tuple
    internal: frozenset = frozenset()
    commutative: bool = False
    symbol: str | None = None


CATALOG: dict[str, OpInfo] = {}


def register(op, module, arity, branches=("ok",), internal=(), commutative=False, symbol=None):
    if op in CATALOG:
        raise ValueError(f"kernel operator {op} registered twice")
    branches = tuple(branches) + tuple(internal)
    CATALOG[op] = OpInfo(op, module, arity, branches, frozenset(internal), commutative, symbol)
    return op


def all_branches():
    """Every registered (op, branch label, internal flag), in catalog order."""
    for info in CATALOG.values():
        for label in info.branches:
            yield info.op, label, label in info.internal


@dataclass
class EvalContext:
    """Per-run state. Separate contexts never share anything mutable."""

    mutation: str | None = None
    coverage: Counter | None = None
    fuel: int = 10**6
    force_timeout: frozenset = frozenset()  # test hook: {"pos"}, {"neg"} or both
    steps: int = field(default=0, init=False)
    budget: int = field(default=0, init=False)

    def __post_init__(self):
        self.set_mutation(self.mutation)

    def set_mutation(self, m):
        if m is not None and m not in MUTATIONS:
            raise UnknownMutation(m)
        self.mutation = m

    def refuel(self, fuel=None):
        self.budget = self.fuel if fuel is None else fuel
        self.steps = 0

    def tick(self):
        self.steps += 1
        if self.steps > self.budget:
            raise FuelExhausted("evaluation step budget exhausted")

    def hit(self, op, label):
        cov = self.coverage
        if cov is not None:
            cov[op, label] += 1

    def internal(self, op, label, message):
        self.hit(op, label)
        raise InternalError(f"{op}: {message}")

    def enumerate(self, values):
        """Candidate values for a variable, passed through the M4 fault when active."""
        if self.mutation == "M4":
            return tuple(v for i, v in enumerate(values) if i % 3 != 2)
        return values


def new_coverage() -> Counter:
    return Counter()
