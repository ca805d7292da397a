"""Constraint catalog and its extensional meaning under a signature.

The element constraint is zero-based throughout: over the scope
``X·y·z`` with ``k = len(X)``, column ``k`` holds the index variable and
column ``k + 1`` the value variable, and a tuple is accepted when
``0 <= τ[k] < k`` and ``τ[k+1] == τ[τ[k]]``.  (One-based presentations put
these at positions ``k+1`` and ``k+2`` with the index ranging over
``1..k``.)
"""
from __future__ import annotations

from dataclasses import dataclass

from .core import (
    DEFAULT_ENUM_LIMIT,
    Relation,
    Signature,
    coherent,
    iter_tuples,
)
from .errors import ConfigurationError, ContractViolation, EnumerationLimitError

__all__ = [
    "Element",
    "OccurrenceLeq",
    "OccurrenceGeq",
    "Table",
    "DiseqIdx",
    "denote",
    "check_tuple",
]


class _Spec:
    scope: tuple

    def accepts(self, tau: tuple) -> bool:  # pragma: no cover - overridden
        raise NotImplementedError


@dataclass(frozen=True)
class Element(_Spec):
    X: tuple
    y: str
    z: str

    def __post_init__(self):
        object.__setattr__(self, "X", tuple(self.X))

    @property
    def scope(self) -> tuple:
        return self.X + (self.y, self.z)

    @property
    def ycol(self) -> int:
        return len(self.X)

    @property
    def zcol(self) -> int:
        return len(self.X) + 1

    def accepts(self, tau):
        k = len(self.X)
        i = tau[k]
        return 0 <= i < k and tau[k + 1] == tau[i]


@dataclass(frozen=True)
class OccurrenceLeq(_Spec):
    X: tuple
    a: int
    c: int

    def __post_init__(self):
        object.__setattr__(self, "X", tuple(self.X))

    @property
    def scope(self) -> tuple:
        return self.X

    def accepts(self, tau):
        return sum(1 for v in tau if v == self.a) <= self.c


@dataclass(frozen=True)
class OccurrenceGeq(_Spec):
    X: tuple
    a: int
    c: int

    def __post_init__(self):
        object.__setattr__(self, "X", tuple(self.X))

    @property
    def scope(self) -> tuple:
        return self.X

    def accepts(self, tau):
        return sum(1 for v in tau if v == self.a) >= self.c


@dataclass(frozen=True)
class Table(_Spec):
    X: tuple
    rows: frozenset

    def __post_init__(self):
        object.__setattr__(self, "X", tuple(self.X))
        object.__setattr__(self, "rows", frozenset(tuple(r) for r in self.rows))
        for r in self.rows:
            if len(r) != len(self.X):
                raise ContractViolation(f"table row {r} does not match scope length {len(self.X)}")

    @property
    def scope(self) -> tuple:
        return self.X

    def accepts(self, tau):
        return tuple(tau) in self.rows


@dataclass(frozen=True)
class DiseqIdx(_Spec):
    x1: str
    x2: str

    @property
    def scope(self) -> tuple:
        return (self.x1, self.x2)

    def accepts(self, tau):
        return tau[0] != tau[1]


def check_tuple(spec: _Spec, tau) -> bool:
    tau = tuple(tau)
    scope = spec.scope
    if len(tau) != len(scope):
        raise ContractViolation(f"tuple of length {len(tau)} for scope of length {len(scope)}")
    return coherent(scope, tau) and spec.accepts(tau)


def denote(spec: _Spec, sig: Signature, limit: int = DEFAULT_ENUM_LIMIT) -> Relation:
    """All coherent scope-tuples under ``sig`` accepted by the constraint."""
    scope = spec.scope
    if not sig.covers(scope):
        missing = [v for v in scope if v not in sig]
        raise ConfigurationError(f"signature does not cover {missing}")
    if isinstance(spec, Table):
        # rows ∩ T_X^σ, without enumerating the product
        doms = sig.domains(scope)
        keep = [r for r in spec.rows if all(a in d for a, d in zip(r, doms)) and coherent(scope, r)]
        return Relation(scope, frozenset(keep))
    size = 1
    for v in scope:
        size *= len(sig[v])
    if size > limit:
        raise EnumerationLimitError(f"{size} tuples exceed the enumeration bound {limit}")
    keep = [t for t in iter_tuples(scope, sig) if coherent(scope, t) and spec.accepts(t)]
    return Relation(scope, frozenset(keep))
