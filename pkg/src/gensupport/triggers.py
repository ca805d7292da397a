"""Trigger placement, wake dispatch and the propagation loop.

Three trigger kinds exist.  ``StaticAssignment(var)`` wakes its owner when
``var`` becomes assigned.  ``DynamicLiteral(var, val)`` wakes it when the
value is removed and is journaled, so backtracking restores the placements
that existed at the target level.  ``WatchedLiteral(var, val)`` wakes it
the same way but is never journaled: it stays wherever it was last put.

:class:`Engine` owns the current domains, a value trail with level marks,
the trigger store and a FIFO queue of propagators.  A propagator woken
several times before it runs is queued once and receives every event
collected meanwhile.  A propagator never wakes itself.
"""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from typing import Callable, Optional, Union

from .core import Domain, Signature
from .errors import ContractViolation

__all__ = [
    "StaticAssignment",
    "DynamicLiteral",
    "WatchedLiteral",
    "TriggerKind",
    "TriggerStore",
    "Engine",
    "FAILURE",
    "propagate_to_fixpoint",
]


@dataclass(frozen=True)
class StaticAssignment:
    var: str


@dataclass(frozen=True)
class DynamicLiteral:
    var: str
    val: int


@dataclass(frozen=True)
class WatchedLiteral:
    var: str
    val: int


TriggerKind = Union[StaticAssignment, DynamicLiteral, WatchedLiteral]


@dataclass(frozen=True)
class _Placement:
    kind: TriggerKind
    prop: object
    level: int


class TriggerStore:
    """Registries of placements keyed by literal and by variable.

    ``domain`` (optional) maps a variable to its current domain; when given,
    literal placements on values already removed are rejected.  Changes to
    dynamic placements made above level 0 are journaled as
    ``(level, "add" | "del", pid)`` and undone by :meth:`backtrack`.
    """

    def __init__(self, domain: Optional[Callable] = None):
        self._domain = domain
        self._lit: dict = {}
        self._assign: dict = {}
        self._live: dict = {}
        self._dead: dict = {}
        self._next = 0
        self.journal: list = []

    def __len__(self):
        return len(self._live)

    def place(self, kind: TriggerKind, prop, level: int = 0) -> int:
        if isinstance(kind, StaticAssignment):
            reg = self._assign.setdefault(kind.var, {})
        elif isinstance(kind, (DynamicLiteral, WatchedLiteral)):
            if self._domain is not None and kind.val not in self._domain(kind.var):
                raise ContractViolation(f"cannot place a trigger on removed literal ({kind.var}, {kind.val})")
            reg = self._lit.setdefault((kind.var, kind.val), {})
        else:
            raise ContractViolation(f"unknown trigger kind {kind!r}")
        pid = self._next
        self._next += 1
        self._live[pid] = _Placement(kind, prop, level)
        reg[pid] = prop
        if isinstance(kind, DynamicLiteral) and level > 0:
            self.journal.append((level, "add", pid))
        return pid

    def _registry(self, kind):
        if isinstance(kind, StaticAssignment):
            return self._assign[kind.var]
        return self._lit[(kind.var, kind.val)]

    def remove(self, pid: int, level: int = 0) -> None:
        pl = self._live[pid]
        del self._registry(pl.kind)[pid]
        if isinstance(pl.kind, DynamicLiteral) and level > 0:
            self.journal.append((level, "del", pid))
            self._dead[pid] = pl
        del self._live[pid]

    def backtrack(self, level: int) -> None:
        """Undo dynamic placement changes made above ``level``."""
        j = self.journal
        while j and j[-1][0] > level:
            _, op, pid = j.pop()
            if op == "add":
                pl = self._live.pop(pid)
                del self._registry(pl.kind)[pid]
            else:
                pl = self._dead.pop(pid)
                self._live[pid] = pl
                self._lit.setdefault((pl.kind.var, pl.kind.val), {})[pid] = pl.prop

    def on_remove(self, var: str, val: int, assigned: bool = False) -> list:
        """Owners to wake for the removal of ``(var, val)``, in placement order.

        With ``assigned`` the assignment placements on ``var`` follow the
        literal placements.
        """
        reg = self._lit.get((var, val))
        out = [reg[p] for p in sorted(reg)] if reg else []
        if assigned:
            out += self.on_assign(var)
        return out

    def on_assign(self, var: str) -> list:
        reg = self._assign.get(var)
        return [reg[p] for p in sorted(reg)] if reg else []

    def placements(self, kinds=(StaticAssignment, DynamicLiteral, WatchedLiteral)) -> dict:
        """Live placements ``pid -> (kind, owner)`` of the given kinds."""
        return {p: (pl.kind, pl.prop) for p, pl in self._live.items() if isinstance(pl.kind, kinds)}

    def dynamic_placements(self) -> frozenset:
        return frozenset((p, pl.kind) for p, pl in self._live.items() if isinstance(pl.kind, DynamicLiteral))


class _Failure:
    def __repr__(self):
        return "FAILURE"

    def __bool__(self):
        return False


FAILURE = _Failure()


class Engine:
    """Trailed domains plus the propagation queue."""

    def __init__(self, sig: Signature):
        self.doms = dict(sig)
        self.level = 0
        self.trail: list = []
        self._marks: list = []
        self.triggers = TriggerStore(self.dom)
        self.props: list = []
        self.calls: list = []
        self._queue: deque = deque()
        self._pending: dict = {}

    # -- domains and trail

    def dom(self, var) -> Domain:
        return self.doms[var]

    def signature(self) -> Signature:
        return Signature(self.doms)

    def save(self, undo: Callable, arg) -> None:
        """Record ``undo(arg)`` to run when the current level is popped."""
        if self.level > 0:
            self.trail.append((undo, arg))

    def _restore_dom(self, item):
        var, d = item
        self.doms[var] = d

    def push_level(self) -> None:
        self._marks.append(len(self.trail))
        self.level += 1

    def pop_level(self) -> None:
        mark = self._marks.pop()
        trail = self.trail
        while len(trail) > mark:
            undo, arg = trail.pop()
            undo(arg)
        self.level -= 1
        self.triggers.backtrack(self.level)

    def set_domain(self, var, new: Domain, source=None) -> bool:
        """Narrow ``var`` to ``new`` and wake triggers; False if it became empty."""
        old = self.doms[var]
        if len(new) == len(old):
            if new != old:
                raise ContractViolation(f"propagator widened the domain of {var!r}")
            return True
        if not new <= old:
            raise ContractViolation(f"propagator widened the domain of {var!r}")
        self.save(self._restore_dom, (var, old))
        self.doms[var] = new
        if not new:
            return False
        lost = [v for v in old if v not in new]
        assigned = len(new) == 1
        last = len(lost) - 1
        trig = self.triggers
        for n, val in enumerate(lost):
            for prop in trig.on_remove(var, val, assigned and n == last):
                if prop is not source:
                    self._wake(prop, (var, val))
        return True

    # -- propagators and queue

    def add(self, prop) -> int:
        prop.index = len(self.props)
        self.props.append(prop)
        self.calls.append(0)
        prop.attach(self)
        return prop.index

    def _wake(self, prop, event) -> None:
        pend = self._pending.get(prop.index)
        if pend is None:
            self._pending[prop.index] = [event]
            self._queue.append(prop)
        else:
            pend.append(event)

    def enqueue_all(self) -> None:
        for p in self.props:
            if p.index not in self._pending:
                self._pending[p.index] = []
                self._queue.append(p)

    def clear_queue(self) -> None:
        self._queue.clear()
        self._pending.clear()

    def propagate(self) -> bool:
        """Run queued propagators to a fixpoint; False on failure (queue cleared)."""
        q = self._queue
        while q:
            prop = q.popleft()
            events = self._pending.pop(prop.index)
            self.calls[prop.index] += 1
            if not prop.run(self, events):
                self.clear_queue()
                return False
        return True

    def prop_calls(self, key: Callable = None) -> dict:
        key = key or (lambda p: f"{getattr(p, 'owner', '?')}.{p.label}")
        return {key(p): self.calls[p.index] for p in self.props}


def propagate_to_fixpoint(constraints, sig: Signature, occ_mode: str = "watched"):
    """Propagate ``constraints`` on ``sig`` from scratch.

    Returns the fixpoint signature, or ``FAILURE`` when a propagator finds
    no support or a domain empties.
    """
    from .propagators import build_propagators

    if not sig.nonempty():
        raise ContractViolation("propagation needs a signature with nonempty domains")
    eng = Engine(sig)
    for n, spec in enumerate(constraints):
        for p in build_propagators(spec, occ_mode):
            p.owner = n
            eng.add(p)
    eng.enqueue_all()
    if not eng.propagate():
        return FAILURE
    return eng.signature()
