"""Finite B values, their canonical order, types and scope-bounded enumeration.

Values use plain Python objects where possible:

* booleans are ``bool``, integers are ``int``
* enumerated elements are :class:`Elem`
* pairs are 2-tuples
* sets are :class:`SetV`, a sorted duplicate-free tuple of members

Relations, functions and sequences are sets of pairs.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from typing import Iterable, Mapping

from .errors import HeterogeneousSet, ScopeOverflow

ENUMERATION_LIMIT = 10**7
INT_MIN = -(2**63)
INT_MAX = 2**63 - 1


@dataclass(frozen=True, slots=True)
class Elem:
    carrier: str
    index: int
    name: str = field(default="", compare=False)

    def __str__(self):
        return self.name or f"{self.carrier.lower()}{self.index + 1}"


def sort_key(v):
    """Key realising the canonical total order Bool < Int < Elem < Pair < Set."""
    if v is True or v is False:
        return (0, int(v))
    if isinstance(v, int):
        return (1, v)
    if isinstance(v, Elem):
        return (2, v.carrier, v.index)
    if isinstance(v, tuple):
        return (3, sort_key(v[0]), sort_key(v[1]))
    if isinstance(v, SetV):
        return v.key
    raise TypeError(f"not a B value: {v!r}")


class SetV:
    """A finite set stored as its canonically ordered members."""

    __slots__ = ("elems", "_set", "_key", "_hash")

    def __init__(self, elems=()):
        # trusted constructor: elems must already be canonical
        self.elems = tuple(elems)
        self._set = None
        self._key = None
        self._hash = None

    @classmethod
    def of(cls, items: Iterable) -> "SetV":
        members = set(items)
        s = cls(sorted(members, key=sort_key))
        s._set = frozenset(members)
        return s

    @property
    def members(self) -> frozenset:
        if self._set is None:
            self._set = frozenset(self.elems)
        return self._set

    @property
    def key(self):
        if self._key is None:
            self._key = (4, len(self.elems), tuple(sort_key(e) for e in self.elems))
        return self._key

    def __len__(self):
        return len(self.elems)

    def __iter__(self):
        return iter(self.elems)

    def __contains__(self, v):
        return v in self.members

    def __eq__(self, other):
        if not isinstance(other, SetV):
            return NotImplemented
        return len(self.elems) == len(other.elems) and self.members == other.members

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(self.members)
        return self._hash

    def __lt__(self, other):
        return self.key < other.key

    def __repr__(self):
        return f"SetV({list(self.elems)!r})"

    def __str__(self):
        return value_str(self)


EMPTY = SetV()


def value_str(v) -> str:
    if v is True:
        return "TRUE"
    if v is False:
        return "FALSE"
    if isinstance(v, tuple):
        return f"({value_str(v[0])}|->{value_str(v[1])})"
    if isinstance(v, SetV):
        return "{" + ",".join(value_str(e) for e in v.elems) + "}"
    return str(v)


def compare(a, b) -> int:
    """Return -1, 0 or 1 following the canonical order."""
    ka, kb = sort_key(a), sort_key(b)
    return (ka > kb) - (ka < kb)


# -- types -----------------------------------------------------------------


@dataclass(frozen=True, slots=True)
class BoolT:
    def __str__(self):
        return "BOOL"


@dataclass(frozen=True, slots=True)
class IntT:
    def __str__(self):
        return "INTEGER"


@dataclass(frozen=True, slots=True)
class EnumT:
    name: str

    def __str__(self):
        return self.name


@dataclass(frozen=True, slots=True)
class ProdT:
    left: object
    right: object

    def __str__(self):
        return f"({self.left}*{self.right})"


@dataclass(frozen=True, slots=True)
class PowT:
    inner: object

    def __str__(self):
        return f"POW({self.inner})"


BOOL_T = BoolT()
INT_T = IntT()
BType = BoolT | IntT | EnumT | ProdT | PowT


def carriers_of(t) -> set[str]:
    if isinstance(t, EnumT):
        return {t.name}
    if isinstance(t, ProdT):
        return carriers_of(t.left) | carriers_of(t.right)
    if isinstance(t, PowT):
        return carriers_of(t.inner)
    return set()


# -- values: shape checks ----------------------------------------------------


def _unify_sig(a, b):
    # None stands for the unknown member type of an empty set
    if a is None:
        return b
    if b is None:
        return a
    if isinstance(a, PowT) and isinstance(b, PowT):
        return PowT(_unify_sig(a.inner, b.inner))
    if isinstance(a, ProdT) and isinstance(b, ProdT):
        return ProdT(_unify_sig(a.left, b.left), _unify_sig(a.right, b.right))
    if a == b:
        return a
    raise HeterogeneousSet(f"set members of types {a} and {b}")


def type_of_value(v):
    """Best-effort type of a value; empty sets leave the member type as None."""
    if v is True or v is False:
        return BOOL_T
    if isinstance(v, int):
        return INT_T
    if isinstance(v, Elem):
        return EnumT(v.carrier)
    if isinstance(v, tuple):
        return ProdT(type_of_value(v[0]), type_of_value(v[1]))
    if isinstance(v, SetV):
        inner = None
        for e in v.elems:
            inner = _unify_sig(inner, type_of_value(e))
        return PowT(inner)
    raise TypeError(f"not a B value: {v!r}")


def canonical(v):
    """Canonical form of a raw value.

    Raw sets may be lists, Python sets/frozensets or SetV instances with
    unsorted or repeated members; pairs are 2-tuples.
    """
    if isinstance(v, (list, set, frozenset, SetV)):
        members = [canonical(e) for e in v]
        sig = None
        for e in members:
            sig = _unify_sig(sig, type_of_value(e))
        return SetV.of(members)
    if isinstance(v, tuple):
        if len(v) != 2:
            raise TypeError(f"pairs must have two components: {v!r}")
        return (canonical(v[0]), canonical(v[1]))
    if isinstance(v, (bool, int, Elem)):
        if isinstance(v, int) and not isinstance(v, bool) and not INT_MIN <= v <= INT_MAX:
            raise OverflowError(f"integer {v} exceeds 64 bits")
        return v
    raise TypeError(f"not a B value: {v!r}")


def is_canonical(v) -> bool:
    if isinstance(v, tuple):
        return is_canonical(v[0]) and is_canonical(v[1])
    if isinstance(v, SetV):
        keys = [sort_key(e) for e in v.elems]
        if any(a >= b for a, b in zip(keys, keys[1:])):
            return False
        try:
            type_of_value(v)
        except HeterogeneousSet:
            return False
        return all(is_canonical(e) for e in v.elems)
    return True


# -- scope -----------------------------------------------------------------


@dataclass(frozen=True)
class Scope:
    """Finite bounds for enumeration and evaluation."""

    carriers: Mapping[str, int] = field(default_factory=dict)
    int_lo: int = -3
    int_hi: int = 3
    max_set_card: int = 4
    fuel: int = 10**6
    default_carrier_size: int = 2
    elements: Mapping[str, tuple] = field(default_factory=dict)

    def __post_init__(self):
        if self.int_lo > self.int_hi:
            raise ValueError("int_lo must not exceed int_hi")
        if self.fuel <= 0:
            raise ValueError("fuel must be positive")
        if self.max_set_card < 0:
            raise ValueError("max_set_card must be non-negative")
        for name, size in self.carriers.items():
            if size < 1:
                raise ValueError(f"carrier {name} must have at least one element")
        object.__setattr__(self, "carriers", dict(self.carriers))
        object.__setattr__(self, "elements", {k: tuple(v) for k, v in self.elements.items()})

    def carrier_size(self, name: str) -> int:
        if name in self.elements:
            return len(self.elements[name])
        return self.carriers.get(name, self.default_carrier_size)

    def carrier_elems(self, name: str) -> tuple:
        names = self.elements.get(name)
        if names is None:
            names = tuple(f"{name.lower()}{i + 1}" for i in range(self.carrier_size(name)))
        return tuple(Elem(name, i, n) for i, n in enumerate(names))

    def replace(self, **changes) -> "Scope":
        fields = dict(
            carriers=self.carriers,
            int_lo=self.int_lo,
            int_hi=self.int_hi,
            max_set_card=self.max_set_card,
            fuel=self.fuel,
            default_carrier_size=self.default_carrier_size,
            elements=self.elements,
        )
        fields.update(changes)
        return Scope(**fields)

    def cache_key(self):
        return (
            tuple(sorted(self.carriers.items())),
            self.int_lo,
            self.int_hi,
            self.max_set_card,
            self.default_carrier_size,
            tuple(sorted(self.elements.items())),
        )


DEFAULT_SCOPE = Scope()


def enumeration_size(t, scope: Scope) -> int:
    if isinstance(t, BoolT):
        return 2
    if isinstance(t, IntT):
        return scope.int_hi - scope.int_lo + 1
    if isinstance(t, EnumT):
        return scope.carrier_size(t.name)
    if isinstance(t, ProdT):
        return enumeration_size(t.left, scope) * enumeration_size(t.right, scope)
    if isinstance(t, PowT):
        n = enumeration_size(t.inner, scope)
        return sum(math.comb(n, k) for k in range(min(n, scope.max_set_card) + 1))
    raise TypeError(f"not a type: {t!r}")


def enumerate_type(t, scope: Scope = DEFAULT_SCOPE, limit: int = ENUMERATION_LIMIT) -> tuple:
    """Every value of type ``t`` inside ``scope``, once each, in canonical order.

    Power sets only contain subsets with at most ``scope.max_set_card`` members.
    """
    size = enumeration_size(t, scope)
    if size > limit:
        raise ScopeOverflow(f"enumerating {t} needs {size} values (limit {limit})")
    key = (t, scope.cache_key())
    cached = _ENUM_CACHE.get(key)
    if cached is None:
        if len(_ENUM_CACHE) > 512:
            _ENUM_CACHE.clear()
        cached = _ENUM_CACHE[key] = tuple(_enumerate(t, scope))
    return cached


_ENUM_CACHE: dict = {}


def _enumerate(t, scope):
    if isinstance(t, BoolT):
        return [False, True]
    if isinstance(t, IntT):
        return list(range(scope.int_lo, scope.int_hi + 1))
    if isinstance(t, EnumT):
        return list(scope.carrier_elems(t.name))
    if isinstance(t, ProdT):
        return list(itertools.product(_enumerate(t.left, scope), _enumerate(t.right, scope)))
    if isinstance(t, PowT):
        inner = _enumerate(t.inner, scope)
        out = []
        for k in range(min(len(inner), scope.max_set_card) + 1):
            out.extend(SetV(c) for c in itertools.combinations(inner, k))
        return out
    raise TypeError(f"not a type: {t!r}")
