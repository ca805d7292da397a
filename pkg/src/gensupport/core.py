"""Relational substrate: domains, signatures, schemata with duplicates, tuples.

Schemata are plain tuples of variable names and may repeat a name; all
indexing is zero-based.  Values are immutable; every operation is a pure
function.
"""
from __future__ import annotations

import itertools
import math
from collections.abc import Iterable, Iterator, Mapping
from dataclasses import dataclass
from typing import Union

from .errors import ConfigurationError, ContractViolation, EnumerationLimitError

__all__ = [
    "VarId",
    "Schema",
    "Tuple",
    "Domain",
    "Signature",
    "Relation",
    "ProjectionMap",
    "IndexEq",
    "ValueEq",
    "CoherentWith",
    "DEFAULT_ENUM_LIMIT",
    "rng",
    "indices",
    "signature_leq",
    "signature_lt",
    "coherent",
    "select",
    "projection_maps",
    "project",
    "schema_subset",
    "schema_equiv",
    "constraint_equiv",
    "iter_tuples",
    "tuples_of",
    "sub_signatures",
]

VarId = str
Schema = tuple  # tuple[VarId, ...], duplicates allowed
Tuple = tuple  # tuple[int, ...]

DEFAULT_ENUM_LIMIT = 10**6


class Domain(frozenset):
    """Finite set of integers with O(1) ``lo``/``hi``.

    ``lo`` and ``hi`` are ``None`` for the empty domain.
    """

    __slots__ = ("lo", "hi", "_sorted")

    def __new__(cls, values: Iterable[int] = ()):
        self = super().__new__(cls, values)
        if self:
            ordered = tuple(sorted(frozenset.__iter__(self)))
            self.lo, self.hi = ordered[0], ordered[-1]
        else:
            ordered = ()
            self.lo = self.hi = None
        self._sorted = ordered
        return self

    def __reduce__(self):
        return (Domain, (self._sorted,))

    def __repr__(self):
        return "{" + ",".join(map(str, self._sorted)) + "}"

    def __iter__(self):
        return iter(self._sorted)

    @property
    def values(self) -> tuple:
        return self._sorted

    def is_singleton(self) -> bool:
        return len(self) == 1

    def without(self, *values: int) -> "Domain":
        return Domain(v for v in self._sorted if v not in values)

    def keep(self, values: Iterable[int]) -> "Domain":
        allowed = set(values)
        return Domain(v for v in self._sorted if v in allowed)


def rng(lo: int, hi: int) -> Domain:
    """The contiguous domain ``lo..hi`` (inclusive)."""
    return Domain(range(lo, hi + 1))


def _as_domain(values) -> Domain:
    return values if isinstance(values, Domain) else Domain(values)


class Signature(Mapping):
    """Immutable mapping from variable names to domains."""

    __slots__ = ("_doms", "_hash")

    def __init__(self, domains: Mapping | Iterable = ()):
        items = domains.items() if isinstance(domains, Mapping) else domains
        self._doms = {v: _as_domain(d) for v, d in items}
        self._hash = None

    def __getitem__(self, var: VarId) -> Domain:
        try:
            return self._doms[var]
        except KeyError:
            raise ConfigurationError(f"signature has no domain for variable {var!r}") from None

    def __iter__(self) -> Iterator[VarId]:
        return iter(self._doms)

    def __len__(self) -> int:
        return len(self._doms)

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(frozenset(self._doms.items()))
        return self._hash

    def __eq__(self, other):
        if isinstance(other, Signature):
            return self._doms == other._doms
        return NotImplemented

    def __repr__(self):
        body = ", ".join(f"{v}:{d!r}" for v, d in sorted(self._doms.items()))
        return f"Signature({body})"

    def updated(self, changes: Mapping) -> "Signature":
        if not changes:
            return self
        doms = dict(self._doms)
        for v, d in changes.items():
            doms[v] = _as_domain(d)
        return Signature(doms)

    def nonempty(self) -> bool:
        return all(self._doms.values())

    def singleton(self) -> bool:
        return all(len(d) == 1 for d in self._doms.values())

    def covers(self, schema: Iterable[VarId]) -> bool:
        return all(v in self._doms for v in schema)

    def domains(self, schema: Iterable[VarId]) -> list:
        return [self[v] for v in schema]

    def canonical(self) -> tuple:
        """Sortable key, used for deterministic iteration orders."""
        return tuple((v, self._doms[v].values) for v in sorted(self._doms))

    @classmethod
    def singleton_of(cls, schema: Iterable[VarId], values: Iterable[int]) -> "Signature":
        doms: dict = {}
        for v, a in zip(schema, values):
            doms.setdefault(v, set()).add(a)
        return cls(doms)


@dataclass(frozen=True)
class Relation:
    schema: tuple
    tuples: frozenset

    def __post_init__(self):
        object.__setattr__(self, "schema", tuple(self.schema))
        object.__setattr__(self, "tuples", frozenset(tuple(t) for t in self.tuples))
        k = len(self.schema)
        for t in self.tuples:
            if len(t) != k:
                raise ContractViolation(f"tuple {t} has length {len(t)}, schema has {k}")

    def sorted_tuples(self) -> list:
        return sorted(self.tuples)

    def wellformed(self, sig: Signature) -> bool:
        doms = sig.domains(self.schema)
        return all(all(a in d for a, d in zip(t, doms)) for t in self.tuples)

    def __len__(self):
        return len(self.tuples)


@dataclass(frozen=True)
class ProjectionMap:
    """Witness for ``target ⊆ source``: ``target[i] == source[mapping[i]]``."""

    target: tuple
    source: tuple
    mapping: tuple

    def __post_init__(self):
        if len(self.mapping) != len(self.target):
            raise ContractViolation("projection map must be total on the target indices")
        for i, j in enumerate(self.mapping):
            if not 0 <= j < len(self.source) or self.source[j] != self.target[i]:
                raise ContractViolation(f"map sends {i} to {j}, which does not name {self.target[i]!r}")

    def pairs(self) -> frozenset:
        return frozenset(enumerate(self.mapping))


@dataclass(frozen=True)
class IndexEq:
    index: int
    value: int


@dataclass(frozen=True)
class ValueEq:
    var: VarId
    value: int


@dataclass(frozen=True)
class CoherentWith:
    schema: tuple


def indices(schema: Schema, v: VarId) -> frozenset:
    return frozenset(i for i, w in enumerate(schema) if w == v)


def signature_leq(narrow: Signature, wide: Signature, schema: Iterable[VarId] | None = None) -> bool:
    """``narrow ⊑ wide`` over ``schema`` (default: the variables of ``wide``)."""
    for v in (wide if schema is None else schema):
        if not narrow[v] <= wide[v]:
            return False
    return True


def signature_lt(narrow: Signature, wide: Signature, schema: Iterable[VarId] | None = None) -> bool:
    """Strict variant: ``narrow ⊑ wide`` and some domain shrinks."""
    vars_ = list(wide if schema is None else schema)
    return signature_leq(narrow, wide, vars_) and any(narrow[v] != wide[v] for v in vars_)


def _check_len(schema, tau):
    if len(tau) != len(schema):
        raise ContractViolation(f"tuple of length {len(tau)} used with schema of length {len(schema)}")


def coherent(schema: Schema, tau: Tuple, wrt: Union[VarId, Schema, None] = None) -> bool:
    """Coherence of ``tau`` w.r.t. one variable, a schema, or (default) ``schema`` itself."""
    _check_len(schema, tau)
    if wrt is None:
        wrt = schema
    wanted = {wrt} if isinstance(wrt, str) else set(wrt)
    seen: dict = {}
    for v, a in zip(schema, tau):
        if v in wanted and seen.setdefault(v, a) != a:
            return False
    return True


def select(rel: Relation, mode) -> Relation:
    schema = rel.schema
    if isinstance(mode, IndexEq):
        if not 0 <= mode.index < len(schema):
            raise ContractViolation(f"index {mode.index} out of range for schema of length {len(schema)}")
        keep = [t for t in rel.tuples if t[mode.index] == mode.value]
    elif isinstance(mode, ValueEq):
        cols = indices(schema, mode.var)
        keep = [t for t in rel.tuples if all(t[i] == mode.value for i in cols)]
    elif isinstance(mode, CoherentWith):
        keep = [t for t in rel.tuples if coherent(schema, t, mode.schema)]
    else:
        raise ContractViolation(f"unknown selection mode {mode!r}")
    return Relation(schema, frozenset(keep))


def schema_subset(y: Schema, x: Schema) -> bool:
    return set(y) <= set(x)


def schema_equiv(x: Schema, y: Schema) -> bool:
    return set(x) == set(y)


def projection_maps(y: Schema, x: Schema) -> list:
    """Every projection map witnessing ``y ⊆ x``, in lexicographic order."""
    choices = [sorted(indices(x, v)) for v in y]
    return [ProjectionMap(tuple(y), tuple(x), m) for m in itertools.product(*choices)]


def project(f: ProjectionMap, arg):
    if isinstance(arg, Relation):
        if tuple(arg.schema) != f.source:
            raise ContractViolation("relation schema differs from the projection map's source")
        return Relation(f.target, frozenset(tuple(t[j] for j in f.mapping) for t in arg.tuples))
    tau = tuple(arg)
    _check_len(f.source, tau)
    return tuple(tau[j] for j in f.mapping)


def constraint_equiv(a: Relation, b: Relation) -> bool:
    if not schema_equiv(a.schema, b.schema):
        return False
    maps = projection_maps(b.schema, a.schema)
    lhs = project(maps[0], select(a, CoherentWith(a.schema)))
    rhs = select(b, CoherentWith(b.schema))
    return lhs.tuples == rhs.tuples


def iter_tuples(schema: Schema, sig: Signature) -> Iterator[tuple]:
    """X-tuples under ``sig`` in lexicographic order (coherence not applied)."""
    return itertools.product(*(sig[v].values for v in schema))


def tuples_of(schema: Schema, sig: Signature, limit: int = DEFAULT_ENUM_LIMIT) -> frozenset:
    size = math.prod(len(sig[v]) for v in schema)
    if size > limit:
        raise EnumerationLimitError(f"{size} tuples exceed the enumeration bound {limit}")
    return frozenset(iter_tuples(schema, sig))


def sub_signatures(sig: Signature, schema: Iterable[VarId] | None = None, *, nonempty: bool = True) -> Iterator[Signature]:
    """All ``σ' ⊑ sig`` over ``schema``; other variables keep their domains.

    Ordered lexicographically by the sorted value tuples of each domain,
    largest subsets last within each variable.
    """
    vars_ = list(sig if schema is None else dict.fromkeys(schema))
    options = []
    for v in vars_:
        vals = sig[v].values
        subs = []
        lo = 1 if nonempty else 0
        for r in range(lo, len(vals) + 1):
            subs.extend(Domain(c) for c in itertools.combinations(vals, r))
        options.append(subs)
    for combo in itertools.product(*options):
        yield sig.updated(dict(zip(vars_, combo)))
