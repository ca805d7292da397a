"""Support properties and the propagators derived from them.

Each constraint family gets two faces here:

* support properties (``element_properties``, ``occurrence_property``) as
  :class:`~gensupport.support.SupportProperty` objects, checkable by the
  oracle;
* propagator functions (``element_p1`` ... ``occ_geq``) that take the
  current signature and the lost support and return either
  ``NewSupport(σ2, S')`` or ``NO_SUPPORT``.

The engine-side classes at the bottom wrap the same kernels
(``_p1_core`` and friends) and wire them to triggers.  Literals are
``Lit(column, value)`` over the constraint's scope; for element the index
variable is column ``k`` and the value variable column ``k + 1``.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Union

from .core import Domain, Signature
from .errors import ContractViolation
from .semantics import DiseqIdx, Element, OccurrenceGeq, OccurrenceLeq, Table, check_tuple
from .support import Lit, SupportProperty, canonical_support
from .triggers import DynamicLiteral, StaticAssignment, WatchedLiteral

__all__ = [
    "NewSupport",
    "NoSupport",
    "NO_SUPPORT",
    "Outcome",
    "element_properties",
    "occurrence_property",
    "element_p1",
    "element_p2",
    "element_p3",
    "occ_leq",
    "occ_geq",
    "diseq",
    "ElementProp",
    "WatchedOccurrence",
    "StaticOccurrence",
    "DiseqProp",
    "TableCheck",
    "build_propagators",
]


@dataclass(frozen=True)
class NewSupport:
    sig: Signature
    support: frozenset


@dataclass(frozen=True)
class NoSupport:
    pass


NO_SUPPORT = NoSupport()
Outcome = Union[NewSupport, NoSupport]

_EMPTY = Domain()


# ---------------------------------------------------------------------------
# support properties


def _x_dom(sig, spec, i):
    return sig[spec.X[i]] if 0 <= i < len(spec.X) else _EMPTY


def element_properties(spec: Element) -> tuple:
    """The three element properties ``(P1, P2, P3)``."""
    k = len(spec.X)
    ycol, zcol = k, k + 1

    def p1(sig, S):
        ys = [i for i in sig[spec.y] if Lit(ycol, i) in S]
        if len(ys) >= 2:
            return True
        return all(Lit(zcol, a) in S for i in sig[spec.y] for a in _x_dom(sig, spec, i))

    def p2(sig, S):
        zd = sig[spec.z]
        return all(
            0 <= i < k and any(Lit(i, a) in S and Lit(zcol, a) in S for a in zd) for i in sig[spec.y]
        )

    def p3(sig, S):
        yd = sig[spec.y]
        return all(
            any(0 <= i < k and Lit(i, a) in S and Lit(ycol, i) in S for i in yd) for a in sig[spec.z]
        )

    scope = spec.scope
    return (
        SupportProperty("P1", scope, p1, monotone=True),
        SupportProperty("P2", scope, p2, monotone=True),
        SupportProperty("P3", scope, p3, monotone=True),
    )


def _occ_counts(n, c, geq):
    """(literals needed by the first disjunct, columns needed by the second)."""
    if geq:
        return max(0, c + 1), max(0, c)
    return max(0, n - c + 1), max(0, n - c)


def occurrence_property(spec: Union[OccurrenceLeq, OccurrenceGeq]) -> SupportProperty:
    """``P_l`` for occurrenceleq, ``P_g`` for occurrencegeq.

    Negative counts are clamped to zero, which makes out-of-range ``c``
    denote a tautology or a contradiction as appropriate.
    """
    geq = isinstance(spec, OccurrenceGeq)
    X, a = spec.X, spec.a
    n = len(X)
    need, eq = _occ_counts(n, spec.c, geq)

    if geq:
        def lit_ok(e):
            return e.val == a

        def settled(d):
            return all(v == a for v in d)
    else:
        def lit_ok(e):
            return e.val != a

        def settled(d):
            return a not in d

    def fn(sig, S):
        cols = {e.col for e in S if isinstance(e, Lit) and 0 <= e.col < n and lit_ok(e)}
        if len(cols) >= need:
            return True
        return sum(1 for v in X if settled(sig[v])) >= eq

    return SupportProperty("Pg" if geq else "Pl", spec.scope, fn, monotone=True)


# ---------------------------------------------------------------------------
# kernels: dom(var) -> Domain, return None (no support) or (changes, S')


def _p1_core(spec, dom, S=()):
    k = len(spec.X)
    yd = dom(spec.y)
    if len(yd) > 1:
        return {}, (Lit(k, yd.lo), Lit(k, yd.hi))
    (i,) = yd.values
    if not 0 <= i < k:
        return {}, ()
    xv = spec.X[i]
    xd = dom(xv)
    zd = dom(spec.z)
    new = Domain(v for v in xd if v in zd)
    if not new:
        return None
    changes = {xv: new} if new != xd else {}
    return changes, tuple(Lit(k + 1, b) for b in new)


def _p2_core(spec, dom, S=()):
    k = len(spec.X)
    yd = dom(spec.y)
    zd = dom(spec.z)
    keep, lits = [], []
    for i in yd:
        if not 0 <= i < k:
            continue
        xd = dom(spec.X[i])
        for a in xd:
            if a in zd:
                keep.append(i)
                lits += (Lit(i, a), Lit(k + 1, a))
                break
    if not keep:
        return None
    changes = {spec.y: Domain(keep)} if len(keep) != len(yd) else {}
    return changes, tuple(lits)


def _p3_core(spec, dom, S=()):
    k = len(spec.X)
    yd = dom(spec.y)
    zd = dom(spec.z)
    keep, lits = [], []
    for a in zd:
        for i in yd:
            if 0 <= i < k and a in dom(spec.X[i]):
                keep.append(a)
                lits += (Lit(i, a), Lit(k, i))
                break
    if not keep:
        return None
    changes = {spec.z: Domain(keep)} if len(keep) != len(zd) else {}
    return changes, tuple(lits)


def _occ_core(spec, dom, S=(), geq=False, skip_i2=False):
    """Re-establish occurrence support.

    ``S`` is the previous support as an ordered sequence of literals.
    Columns of ``S`` that can still carry a literal are reused; the
    replacement scan starts at the first invalidated column and wraps.
    ``skip_i2`` disables that scan (used only to sabotage the propagator
    in oracle tests).
    """
    X, a = spec.X, spec.a
    n = len(X)
    need, eq = _occ_counts(n, spec.c, geq)
    if eq == 0:
        return {}, ()
    doms = [dom(v) for v in X]

    if geq:
        def good(d):
            return a in d

        def pick(d, b):
            return a
    else:
        def good(d):
            return len(d) > (1 if a in d else 0)

        def pick(d, b):
            if b != a and b in d:
                return b
            for v in d:
                if v != a:
                    return v

    kept, used = [], set()
    start = None
    for e in S:
        i = e.col
        if i in used or not 0 <= i < n:
            continue
        d = doms[i]
        if start is None and e.val not in d:
            start = i
        if good(d):
            kept.append(Lit(i, pick(d, e.val)))
            used.add(i)
    if len(kept) >= need:
        return {}, tuple(kept[:need])
    start = 0 if start is None else start
    if not skip_i2:
        for i in list(range(start, n)) + list(range(0, start)):
            if i not in used and good(doms[i]):
                kept.append(Lit(i, pick(doms[i], None)))
                used.add(i)
                if len(kept) == need:
                    return {}, tuple(kept)
    if len(used) < eq:
        return None
    changes = {}
    for i in sorted(used):
        v = X[i]
        d = changes.get(v, doms[i])
        changes[v] = Domain([a]) if geq else d.without(a)
    return {v: d for v, d in changes.items() if d != dom(v)}, ()


def _diseq_core(spec, dom, S=()):
    d1, d2 = dom(spec.x1), dom(spec.x2)
    changes = {}
    if len(d1) == 1 and d1.lo in d2:
        d2 = d2.without(d1.lo)
        changes[spec.x2] = d2
    elif len(d2) == 1 and d2.lo in d1:
        d1 = d1.without(d2.lo)
        changes[spec.x1] = d1
    if not d1 or not d2:
        return None
    b = d1.lo
    c = next(v for v in d2 if v != b) if len(d2) > 1 or d2.lo != b else None
    if c is None:
        return None
    return changes, (Lit(0, b), Lit(1, c))


def _outcome(res, sig) -> Outcome:
    if res is None:
        return NO_SUPPORT
    changes, lits = res
    return NewSupport(sig.updated(changes), frozenset(lits))


def _require_nonempty(sig, scope):
    for v in scope:
        if not sig[v]:
            raise ContractViolation(f"domain of {v!r} is empty; emptiness is checked by the engine")


def element_p1(spec: Element, sig1: Signature, S=()) -> Outcome:
    """Re-establish ``P1``: two index literals, or narrow ``X[i]`` into ``z`` once ``y = {i}``."""
    _require_nonempty(sig1, spec.scope)
    return _outcome(_p1_core(spec, sig1.__getitem__, S), sig1)


def element_p2(spec: Element, sig1: Signature, S=()) -> Outcome:
    """Keep the indices ``i`` of ``y`` whose ``X[i]`` meets ``z``."""
    _require_nonempty(sig1, spec.scope)
    return _outcome(_p2_core(spec, sig1.__getitem__, S), sig1)


def element_p3(spec: Element, sig1: Signature, S=()) -> Outcome:
    """Keep the values of ``z`` found in some ``X[i]`` with ``i`` in ``y``."""
    _require_nonempty(sig1, spec.scope)
    return _outcome(_p3_core(spec, sig1.__getitem__, S), sig1)


def occ_leq(spec: OccurrenceLeq, sig1: Signature, S=(), *, skip_i2=False) -> Outcome:
    _require_nonempty(sig1, spec.scope)
    S = S if isinstance(S, (list, tuple)) else canonical_support(S)
    return _outcome(_occ_core(spec, sig1.__getitem__, S, False, skip_i2), sig1)


def occ_geq(spec: OccurrenceGeq, sig1: Signature, S=(), *, skip_i2=False) -> Outcome:
    _require_nonempty(sig1, spec.scope)
    S = S if isinstance(S, (list, tuple)) else canonical_support(S)
    return _outcome(_occ_core(spec, sig1.__getitem__, S, True, skip_i2), sig1)


def diseq(spec: DiseqIdx, sig1: Signature, S=()) -> Outcome:
    _require_nonempty(sig1, spec.scope)
    return _outcome(_diseq_core(spec, sig1.__getitem__, S), sig1)


# ---------------------------------------------------------------------------
# engine-side propagators


class _EngineProp:
    label = "?"
    index = -1

    def attach(self, engine):
        pass

    def run(self, engine, events) -> bool:  # pragma: no cover - overridden
        raise NotImplementedError

    def _apply(self, engine, changes, scope_order):
        for v in scope_order:
            if v in changes:
                if not engine.set_domain(v, changes[v], source=self):
                    return False
        return True


class ElementProp(_EngineProp):
    """One of P1/P2/P3 with dynamic literal triggers (restored on backtrack)."""

    _cores = {1: _p1_core, 2: _p2_core, 3: _p3_core}

    def __init__(self, spec: Element, which: int):
        self.spec = spec
        self.which = which
        self.label = f"P{which}"
        self.support = ()
        self.placements = {}  # Lit -> placement id
        self._order = list(dict.fromkeys(spec.scope))

    def run(self, engine, events):
        res = self._cores[self.which](self.spec, engine.dom, self.support)
        if res is None:
            return False
        changes, lits = res
        if not self._apply(engine, changes, self._order):
            return False
        self._move(engine, lits)
        return True

    def _move(self, engine, lits):
        old_support, old_placements = self.support, self.placements
        if set(lits) == set(old_placements):
            return
        engine.save(self._restore, (old_support, old_placements))
        scope = self.spec.scope
        placements = {}
        for lit, pid in old_placements.items():
            if lit in lits:
                placements[lit] = pid
            else:
                engine.triggers.remove(pid, engine.level)
        for lit in lits:
            if lit not in placements:
                placements[lit] = engine.triggers.place(
                    DynamicLiteral(scope[lit.col], lit.val), self, engine.level
                )
        self.support, self.placements = tuple(lits), placements

    def _restore(self, state):
        self.support, self.placements = state


class WatchedOccurrence(_EngineProp):
    """``P_l``/``P_g`` on watched literals; support is never restored.

    When the equality case empties the support, the old watches stay
    where they are: they become a valid support again on backtrack.
    """

    def __init__(self, spec, skip_i2=False):
        self.spec = spec
        self.geq = isinstance(spec, OccurrenceGeq)
        self.label = "Pg" if self.geq else "Pl"
        self.support = ()  # ordered Lits, one watch each
        self.placements = []
        self.skip_i2 = skip_i2
        self._order = list(dict.fromkeys(spec.X))

    def run(self, engine, events):
        res = _occ_core(self.spec, engine.dom, self.support, self.geq, self.skip_i2)
        if res is None:
            return False
        changes, lits = res
        if not self._apply(engine, changes, self._order):
            return False
        if lits:
            self._move(engine, lits)
        return True

    def _move(self, engine, lits):
        X = self.spec.X
        old = dict(zip(self.support, self.placements))
        placements = []
        for lit in lits:
            pid = old.pop(lit, None)
            if pid is None:
                pid = engine.triggers.place(WatchedLiteral(X[lit.col], lit.val), self, engine.level)
            placements.append(pid)
        for pid in old.values():
            engine.triggers.remove(pid, engine.level)
        self.support, self.placements = tuple(lits), placements


class StaticOccurrence(_EngineProp):
    """Baseline occurrence propagator woken whenever a scope variable is assigned.

    Recounts from scratch on every call.  occurrenceleq: with ``c`` columns
    fixed to ``a``, remove ``a`` everywhere else.  occurrencegeq: with only
    ``c`` columns not fixed to another value, fix them all to ``a``.
    """

    def __init__(self, spec):
        self.spec = spec
        self.geq = isinstance(spec, OccurrenceGeq)
        self.label = "Sg" if self.geq else "Sl"
        self._order = list(dict.fromkeys(spec.X))

    def attach(self, engine):
        for v in self._order:
            engine.triggers.place(StaticAssignment(v), self, engine.level)

    def run(self, engine, events):
        X, a, c = self.spec.X, self.spec.a, self.spec.c
        doms = [engine.dom(v) for v in X]
        if self.geq:
            open_cols = sum(1 for d in doms if not (len(d) == 1 and d.lo != a))
            if open_cols < c:
                return False
            if open_cols == c:
                for v in self._order:
                    d = engine.dom(v)
                    if len(d) != 1 and not engine.set_domain(v, d.keep((a,)), source=self):
                        return False
            return True
        fixed = sum(1 for d in doms if len(d) == 1 and d.lo == a)
        if fixed > c:
            return False
        if fixed == c:
            for v in self._order:
                d = engine.dom(v)
                if a in d and len(d) > 1 and not engine.set_domain(v, d.without(a), source=self):
                    return False
        return True


class DiseqProp(_EngineProp):
    label = "diseq"

    def __init__(self, spec: DiseqIdx):
        self.spec = spec

    def attach(self, engine):
        for v in dict.fromkeys(self.spec.scope):
            engine.triggers.place(StaticAssignment(v), self, engine.level)

    def run(self, engine, events):
        res = _diseq_core(self.spec, engine.dom)
        if res is None:
            return False
        return self._apply(engine, res[0], self.spec.scope)


class TableCheck(_EngineProp):
    """Checks a table constraint once its whole scope is assigned."""

    label = "table"

    def __init__(self, spec: Table):
        self.spec = spec

    def attach(self, engine):
        for v in dict.fromkeys(self.spec.scope):
            engine.triggers.place(StaticAssignment(v), self, engine.level)

    def run(self, engine, events):
        doms = [engine.dom(v) for v in self.spec.scope]
        if any(len(d) != 1 for d in doms):
            return True
        return check_tuple(self.spec, [d.lo for d in doms])


def build_propagators(spec, occ_mode: str = "watched") -> list:
    """Engine propagators for one constraint, in the order they are registered."""
    if isinstance(spec, Element):
        return [ElementProp(spec, w) for w in (1, 2, 3)]
    if isinstance(spec, (OccurrenceLeq, OccurrenceGeq)):
        if occ_mode == "watched":
            return [WatchedOccurrence(spec)]
        if occ_mode == "static":
            return [StaticOccurrence(spec)]
        raise ContractViolation(f"unknown occurrence mode {occ_mode!r}")
    if isinstance(spec, DiseqIdx):
        return [DiseqProp(spec)]
    if isinstance(spec, Table):
        return [TableCheck(spec)]
    raise ContractViolation(f"no propagator for {type(spec).__name__}")
