import random

import pytest

from gensupport.core import Domain, Signature
from gensupport.errors import ContractViolation
from gensupport.semantics import Element, OccurrenceGeq, OccurrenceLeq
from gensupport.triggers import (
    FAILURE,
    DynamicLiteral,
    Engine,
    StaticAssignment,
    TriggerStore,
    WatchedLiteral,
    propagate_to_fixpoint,
)


class Recorder:
    label = "rec"

    def __init__(self, name="r"):
        self.name = name
        self.events = []

    def attach(self, engine):
        pass

    def run(self, engine, events):
        self.events.append(list(events))
        return True


def test_watched_survives_and_dynamic_is_undone():
    store = TriggerStore()
    p = object()
    w = store.place(WatchedLiteral("x", 2), p, level=3)
    d = store.place(DynamicLiteral("x", 2), p, level=3)
    store.backtrack(2)
    assert w in store.placements() and d not in store.placements()
    assert store.on_remove("x", 2) == [p]


def test_dynamic_removal_is_restored():
    store = TriggerStore()
    p = object()
    d = store.place(DynamicLiteral("x", 1), p, level=1)
    store.remove(d, level=2)
    assert store.on_remove("x", 1) == []
    store.backtrack(1)
    assert store.on_remove("x", 1) == [p]
    store.backtrack(0)
    assert store.on_remove("x", 1) == [] and not store.journal


def test_wake_order_and_empty():
    store = TriggerStore()
    a, b = "first", "second"
    store.place(WatchedLiteral("x", 2), a)
    store.place(DynamicLiteral("x", 2), b)
    assert store.on_remove("x", 2) == [a, b]
    assert store.on_remove("x", 3) == []


def test_restored_placement_keeps_its_position():
    store = TriggerStore()
    first = store.place(DynamicLiteral("x", 1), "A", level=1)
    store.place(WatchedLiteral("x", 1), "B", level=1)
    store.remove(first, level=2)
    assert store.on_remove("x", 1) == ["B"]
    store.backtrack(1)
    assert store.on_remove("x", 1) == ["A", "B"]


def test_placing_on_removed_literal_fails():
    store = TriggerStore(domain={"x": Domain({1})}.__getitem__)
    with pytest.raises(ContractViolation):
        store.place(WatchedLiteral("x", 2), "p")
    store.place(StaticAssignment("x"), "p")


def test_assignment_trigger_fires_on_singleton_only():
    eng = Engine(Signature({"x": {1, 2, 3}}))
    rec = Recorder()
    eng.add(rec)
    eng.triggers.place(StaticAssignment("x"), rec)
    eng.set_domain("x", Domain({1, 2}))
    assert not eng.propagate() is False and rec.events == []
    eng.set_domain("x", Domain({2}))
    eng.propagate()
    assert len(rec.events) == 1


def test_batched_events_and_self_wake():
    eng = Engine(Signature({"x": {1, 2, 3}}))
    rec = Recorder()
    eng.add(rec)
    for v in (1, 2, 3):
        eng.triggers.place(WatchedLiteral("x", v), rec)
    eng.set_domain("x", Domain({3}))
    eng.propagate()
    assert rec.events == [[("x", 1), ("x", 2)]]
    eng.set_domain("x", Domain(), source=rec)
    assert rec.events == [[("x", 1), ("x", 2)]]


def test_widening_is_a_contract_violation():
    eng = Engine(Signature({"x": {1, 2}}))
    with pytest.raises(ContractViolation):
        eng.set_domain("x", Domain({1, 5}))


def test_no_propagators():
    s = Signature({"x": {1, 2}})
    assert propagate_to_fixpoint([], s) == s


def test_element_fixpoint_example():
    s = Signature({"x": {1, 2, 3}, "y": {0}, "z": {2, 3, 4}})
    out = propagate_to_fixpoint([Element(("x",), "y", "z")], s)
    assert out["x"] == {2, 3} and out["z"] == {2, 3}


def test_occurrence_failure_example():
    s = Signature({"x": {1}, "y": {1, 2}})
    assert propagate_to_fixpoint([OccurrenceLeq(("x", "y"), 1, 0)], s) is FAILURE
    with pytest.raises(ContractViolation):
        propagate_to_fixpoint([], Signature({"x": set()}))


def _random_case(rnd):
    doms = {v: Domain(a for a in range(4) if rnd.random() < 0.6) or Domain({rnd.randrange(4)}) for v in "abcdyz"}
    cons = [
        Element(("a", "b", "c"), "y", "z"),
        OccurrenceLeq(("a", "b", "d"), rnd.randrange(4), rnd.randrange(4)),
        OccurrenceGeq(("b", "c", "d"), rnd.randrange(4), rnd.randrange(3)),
    ]
    return Signature(doms), cons


@pytest.mark.parametrize("seed", range(40))
def test_fixpoint_idempotent_and_narrowing(seed):
    sig, cons = _random_case(random.Random(seed))
    out = propagate_to_fixpoint(cons, sig)
    if out is FAILURE:
        return
    assert all(out[v] <= sig[v] for v in sig)
    assert propagate_to_fixpoint(cons, out) == out


@pytest.mark.parametrize("seed", range(20))
def test_trail_restores_dynamic_placements(seed):
    from gensupport.propagators import build_propagators

    sig, cons = _random_case(random.Random(seed))
    eng = Engine(sig)
    for spec in cons:
        for p in build_propagators(spec):
            eng.add(p)
    eng.enqueue_all()
    if not eng.propagate():
        return
    before = eng.triggers.dynamic_placements()
    doms_before = dict(eng.doms)
    rnd = random.Random(seed + 100)
    depth = 0
    for _ in range(6):
        v = rnd.choice("abcdyz")
        d = eng.doms[v]
        if len(d) < 2:
            continue
        eng.push_level()
        depth += 1
        if not (eng.set_domain(v, d.without(d.lo)) and eng.propagate()):
            eng.clear_queue()
            break
    for _ in range(depth):
        eng.pop_level()
    assert eng.triggers.dynamic_placements() == before
    assert eng.doms == doms_before
    assert not eng.triggers.journal
