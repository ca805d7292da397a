"""Generalized support: properties, support sets and exhaustive checkers.

A support is a finite set of elements, each either a full tuple over the
property's scope or a single literal ``(column, value)``.  Element validity
is checked against a signature; a property is a predicate over
``(signature, support)``.
"""
from __future__ import annotations

import itertools
from collections.abc import Callable, Iterable
from dataclasses import dataclass, field
from typing import Optional, Union

from .core import Domain, Signature, iter_tuples
from .errors import ContractViolation, EnumerationLimitError

__all__ = [
    "Lit",
    "FullTuple",
    "SupportProperty",
    "CheckResult",
    "DEFAULT_UNIVERSE_LIMIT",
    "valid",
    "holds",
    "universe",
    "support_sets",
    "is_support",
    "supported",
    "true_property",
    "false_property",
    "literal_property",
    "combine",
    "collection_supported",
    "standard_lattice",
    "p_admissible_check",
    "backtrack_stable_check",
    "canonical_support",
]

DEFAULT_UNIVERSE_LIMIT = 20


@dataclass(frozen=True, order=True)
class Lit:
    col: int
    val: int

    def __repr__(self):
        return f"<{self.col},{self.val}>"


@dataclass(frozen=True, order=True)
class FullTuple:
    values: tuple

    def __post_init__(self):
        object.__setattr__(self, "values", tuple(self.values))

    def __repr__(self):
        return "<" + ",".join(map(str, self.values)) + ">"


Element = Union[Lit, FullTuple]


def _key(e) -> tuple:
    return (0, e.col, e.val) if isinstance(e, Lit) else (1, e.values)


def _set_key(S) -> tuple:
    return (len(S), tuple(_key(e) for e in canonical_support(S)))


def canonical_support(S: Iterable) -> tuple:
    """Support elements in a fixed order (literals first, then tuples)."""
    return tuple(sorted(S, key=_key))


@dataclass(frozen=True)
class SupportProperty:
    """Named predicate ``P_σ(S)`` over a scope.

    ``kind`` says which element type the default universe is built from;
    ``monotone`` declares that ``P_σ`` is upward closed in ``S``, which lets
    :func:`supported` test the whole valid universe instead of enumerating
    subsets.
    """

    name: str
    scope: tuple
    fn: Callable = field(compare=False, repr=False)
    kind: str = "literal"
    monotone: bool = False

    def __call__(self, sig: Signature, S) -> bool:
        return bool(self.fn(sig, S if isinstance(S, frozenset) else frozenset(S)))


def _required(scope, S) -> Optional[dict]:
    """Values each scope variable must keep for ``S`` to stay valid, or None if never valid."""
    need: dict = {}
    k = len(scope)
    for e in S:
        if isinstance(e, Lit):
            if not 0 <= e.col < k:
                return None
            need.setdefault(scope[e.col], set()).add(e.val)
        else:
            if len(e.values) != k:
                return None
            for v, a in zip(scope, e.values):
                need.setdefault(v, set()).add(a)
    return need


def valid(S, scope, sig: Signature) -> bool:
    """Every element of ``S`` (or the single element ``S``) is valid under ``sig``."""
    if isinstance(S, (Lit, FullTuple)):
        S = (S,)
    need = _required(scope, S)
    if need is None:
        return False
    return all(vals <= sig[v] for v, vals in need.items())


def holds(P: SupportProperty, sig: Signature, S=frozenset()) -> bool:
    if not sig.covers(P.scope):
        missing = [v for v in P.scope if v not in sig]
        raise ContractViolation(f"signature does not cover the scope of {P.name}: {missing}")
    return P(sig, S)


def universe(P: SupportProperty, sig: Signature) -> list:
    """Every element valid under ``sig`` of the kind ``P`` is built from."""
    if P.kind == "tuple":
        return [FullTuple(t) for t in iter_tuples(P.scope, sig)]
    return [Lit(i, a) for i, v in enumerate(P.scope) for a in sig[v].values]


def _valid_universe(P, sig, elems):
    if elems is None:
        return universe(P, sig)
    return sorted((e for e in elems if valid(e, P.scope, sig)), key=_key)


def support_sets(P: SupportProperty, sig: Signature, elems=None, limit: int = DEFAULT_UNIVERSE_LIMIT) -> frozenset:
    """All minimal ``S ⊆ elems`` valid under ``sig`` with ``P_σ(S)``.

    ``elems`` defaults to :func:`universe`.  Enumerates subsets by size and
    skips supersets of minimal sets already found.
    """
    U = _valid_universe(P, sig, elems)
    if len(U) > limit:
        raise EnumerationLimitError(f"universe of {len(U)} elements exceeds the bound {limit}")
    found: list = []
    for r in range(len(U) + 1):
        for combo in itertools.combinations(U, r):
            S = frozenset(combo)
            if any(m <= S for m in found):
                continue
            if P(sig, S):
                found.append(S)
    return frozenset(found)


def is_support(P: SupportProperty, sig: Signature, S, limit: int = DEFAULT_UNIVERSE_LIMIT) -> bool:
    """``S ∈ Support(σ, P)``: valid, satisfying and minimal."""
    S = frozenset(S)
    if not valid(S, P.scope, sig) or not P(sig, S):
        return False
    if P.monotone:
        return not any(P(sig, S - {e}) for e in S)
    if len(S) > limit:
        raise EnumerationLimitError(f"support of {len(S)} elements exceeds the bound {limit}")
    items = list(S)
    return not any(
        P(sig, frozenset(c)) for r in range(len(items)) for c in itertools.combinations(items, r)
    )


def supported(P: SupportProperty, sig: Signature, elems=None, limit: int = DEFAULT_UNIVERSE_LIMIT) -> bool:
    """``Support(σ, P) ≠ ∅``."""
    if P.monotone:
        return P(sig, frozenset(_valid_universe(P, sig, elems)))
    return bool(support_sets(P, sig, elems, limit))


def true_property(scope=()) -> SupportProperty:
    return SupportProperty("True", tuple(scope), lambda sig, S: True, monotone=True)


def false_property(scope=()) -> SupportProperty:
    return SupportProperty("False", tuple(scope), lambda sig, S: False, monotone=True)


def literal_property(i: int, a: int, scope) -> SupportProperty:
    """``<i=a>``: some tuple of ``S`` has value ``a`` in column ``i``."""

    def fn(sig, S):
        return any(isinstance(e, FullTuple) and e.values[i] == a for e in S)

    return SupportProperty(f"<{i}={a}>", tuple(scope), fn, kind="tuple", monotone=True)


def combine(P: SupportProperty, Q: SupportProperty, op: str) -> SupportProperty:
    if tuple(P.scope) != tuple(Q.scope):
        raise ContractViolation(f"cannot combine {P.name} and {Q.name}: scopes differ")
    op = op.lower()
    if op == "and":
        fn = lambda sig, S: P(sig, S) and Q(sig, S)  # noqa: E731
    elif op == "or":
        fn = lambda sig, S: P(sig, S) or Q(sig, S)  # noqa: E731
    else:
        raise ContractViolation(f"unknown combinator {op!r}")
    kind = P.kind if P.kind == Q.kind else "tuple"
    return SupportProperty(f"({P.name} {op} {Q.name})", P.scope, fn, kind, P.monotone and Q.monotone)


def collection_supported(props: Iterable[SupportProperty], sig: Signature, elems=None) -> bool:
    props = list(props)
    scopes = {tuple(P.scope) for P in props}
    if len(scopes) > 1:
        raise ContractViolation("properties in a collection must share one scope")
    return all(supported(P, sig, elems) for P in props)


# ---------------------------------------------------------------------------
# exhaustive checkers


@dataclass
class CheckResult:
    """Outcome of an exhaustive check; ``scanned`` counts examined cases."""

    counterexample: Optional[tuple] = None
    scanned: int = 0

    @property
    def ok(self) -> bool:
        return self.counterexample is None


def _subdomains(dom: Domain, lower=frozenset(), nonempty=False):
    """Subsets of ``dom`` containing ``lower``, in a fixed order."""
    rest = [v for v in dom.values if v not in lower]
    out = []
    for r in range(len(rest) + 1):
        for c in itertools.combinations(rest, r):
            d = Domain(set(lower) | set(c))
            if nonempty and not d:
                continue
            out.append(d)
    return out


def _between(upper: Signature, vars_, lower=None, nonempty=False):
    """Signatures ``σ'`` with ``lower ⊆ σ'(v) ⊆ upper(v)`` for ``v`` in ``vars_``."""
    lower = lower or {}
    options = [_subdomains(upper[v], lower.get(v, frozenset()), nonempty) for v in vars_]
    for combo in itertools.product(*options):
        yield upper.updated(dict(zip(vars_, combo)))


def _above(lower: Signature, top: Signature, vars_):
    """Signatures ``σ`` with ``lower ⊑ σ ⊑ top``."""
    return _between(top, vars_, {v: lower[v] for v in vars_})


def standard_lattice(sig: Signature, vars_=None, nonempty=False) -> list:
    """All sub-signatures of ``sig`` (over ``vars_``), optionally nonempty only."""
    vars_ = list(dict.fromkeys(sig if vars_ is None else vars_))
    return list(_between(sig, vars_, nonempty=nonempty))


def p_admissible_check(P: SupportProperty, sig0: Signature, elems=None, lattice=None) -> CheckResult:
    """Search for ``(σ, σ', S)`` with ``σ' ⊑ σ``, ``P_σ(S)``, ``S`` valid under ``σ'`` and ``¬P_σ'(S)``.

    ``σ`` ranges over ``lattice`` (default: every sub-signature of ``sig0``,
    empty domains included) and ``S`` over subsets of the universe valid
    under ``σ``.
    """
    vars_ = list(dict.fromkeys(P.scope))
    result = CheckResult()
    lattice = standard_lattice(sig0, vars_) if lattice is None else lattice
    for sig in lattice:
        U = _valid_universe(P, sig, elems)
        if len(U) > DEFAULT_UNIVERSE_LIMIT:
            raise EnumerationLimitError(f"universe of {len(U)} elements exceeds the bound")
        for r in range(len(U) + 1):
            for combo in itertools.combinations(U, r):
                S = frozenset(combo)
                if not P(sig, S):
                    result.scanned += 1
                    continue
                need = _required(P.scope, S)
                for narrow in _between(sig, vars_, need):
                    result.scanned += 1
                    if not P(narrow, S):
                        result.counterexample = (sig, narrow, S)
                        return result
    return result


def backtrack_stable_check(P: SupportProperty, sig0: Signature, elems=None, lattice=None) -> CheckResult:
    """Search for ``(σ, σ', S)`` with ``σ' ⊑ σ``, ``S ∈ Support(σ', P)``, ``S ≠ ∅`` and ``¬P_σ(S)``.

    The empty support is exempt, as are non-minimal sets: only genuine
    supports are required to survive widening.
    """
    vars_ = list(dict.fromkeys(P.scope))
    result = CheckResult()
    lattice = standard_lattice(sig0, vars_) if lattice is None else lattice
    for narrow in lattice:
        for S in sorted(support_sets(P, narrow, elems), key=_set_key):
            if not S:
                continue
            for wide in _above(narrow, sig0, vars_):
                result.scanned += 1
                if not P(wide, S):
                    result.counterexample = (wide, narrow, S)
                    return result
    return result
