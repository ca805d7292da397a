import itertools

import pytest
from hypothesis import given, settings, strategies as st

from gensupport.core import Signature, iter_tuples
from gensupport.errors import ContractViolation, EnumerationLimitError
from gensupport.support import (
    FullTuple,
    Lit,
    SupportProperty,
    backtrack_stable_check,
    collection_supported,
    combine,
    false_property,
    holds,
    is_support,
    literal_property,
    p_admissible_check,
    support_sets,
    supported,
    true_property,
    universe,
    valid,
)

from conftest import running_property

SIGS = [
    Signature({"x": {0, 1}}),
    Signature({"x": {1, 2, 3}, "y": {0}}),
    Signature({"x": set(), "y": {4, 5}}),
]


@pytest.mark.parametrize("sig", SIGS)
def test_true_and_false(sig):
    scope = tuple(sig)
    assert support_sets(true_property(scope), sig) == {frozenset()}
    assert support_sets(false_property(scope), sig) == frozenset()
    assert holds(true_property(scope), sig, {Lit(0, 9)})
    assert not holds(false_property(scope), sig, set())


def test_running_example_support(bool3):
    P = running_property()
    assert support_sets(P, bool3) == {frozenset({FullTuple((0, 1, 1))})}


def test_running_example_is_admissible_but_not_backtrack_stable(bool3):
    P = running_property()
    assert p_admissible_check(P, bool3).ok
    r = backtrack_stable_check(P, bool3)
    assert not r.ok
    wide, narrow, S = r.counterexample
    assert P(narrow, S) and not P(wide, S)
    assert wide["x"].lo != narrow["x"].lo


def test_literal_property():
    P = literal_property(0, 1, ("x", "y"))
    sig = Signature({"x": {1, 3}, "y": {2, 5}})
    assert holds(P, sig, {FullTuple((1, 5))})
    assert not holds(P, sig, set())
    elems = [FullTuple((1, 2)), FullTuple((3, 2))]
    Q = literal_property(1, 2, ("x", "y"))
    assert support_sets(Q, sig, elems) == {frozenset({elems[0]}), frozenset({elems[1]})}
    assert support_sets(literal_property(0, 9, ("x", "y")), sig) == frozenset()


def test_literal_supports_are_singletons(bool3):
    for i, a in itertools.product(range(3), (0, 1)):
        sets = support_sets(literal_property(i, a, ("x", "y", "z")), bool3)
        assert sets and all(len(S) == 1 for S in sets)


def test_validity():
    sig = Signature({"x": {1, 2}, "y": {3}})
    assert valid(set(), ("x", "y"), sig)
    assert valid({Lit(0, 2), FullTuple((1, 3))}, ("x", "y"), sig)
    assert not valid({Lit(1, 2)}, ("x", "y"), sig)
    assert not valid({Lit(5, 2)}, ("x", "y"), sig)


def test_holds_requires_scope():
    with pytest.raises(ContractViolation):
        holds(true_property(("x", "q")), Signature({"x": {1}}))


def test_universe_bound():
    P = SupportProperty("any", ("x",), lambda s, S: bool(S))
    with pytest.raises(EnumerationLimitError):
        support_sets(P, Signature({"x": range(30)}))


def test_combinators(bool3):
    P = running_property()
    T, F = true_property(P.scope), false_property(P.scope)
    for sig in (bool3, bool3.updated({"x": {1}})):
        for S in (frozenset(), frozenset({FullTuple((0, 1, 1))}), frozenset({FullTuple((1, 1, 0))})):
            assert combine(T, P, "and")(sig, S) == P(sig, S)
            assert combine(F, P, "or")(sig, S) == P(sig, S)
    with pytest.raises(ContractViolation):
        combine(P, true_property(("x",)), "and")


def test_combined_admissible_properties_stay_admissible(bool3):
    P = running_property()
    Q = literal_property(1, 1, P.scope)
    for op in ("and", "or"):
        assert p_admissible_check(combine(P, Q, op), bool3).ok


def test_alldifferent_example_literals():
    scope = ("x1", "x2", "x3")
    sig = Signature({"x1": {1, 2}, "x2": {1, 2, 3, 4}, "x3": {1, 2, 3, 4, 5}})
    sols = [FullTuple(t) for t in iter_tuples(scope, sig) if len(set(t)) == 3]
    L = [(0, 1), (0, 2), (1, 2), (1, 4), (2, 2), (2, 3), (2, 5)]
    props = [literal_property(i, a, scope) for i, a in L]
    assert collection_supported(props, sig, sols)


def test_not_admissible_property():
    # every value j has lost must appear with column i
    values = (0, 1)

    def fn(sig, S):
        return all(Lit(0, b) in S for b in values if b not in sig["y"])

    P = SupportProperty("lost-values", ("x", "y"), fn)
    r = p_admissible_check(P, Signature({"x": {0, 1}, "y": {0, 1}}))
    assert not r.ok
    sig, narrow, S = r.counterexample
    assert P(sig, S) and valid(S, P.scope, narrow) and not P(narrow, S)


def test_checkers_count_cases(bool3):
    r = p_admissible_check(literal_property(0, 1, ("x", "y", "z")), bool3)
    assert r.ok and r.scanned > 0


@settings(max_examples=60, deadline=None)
@given(st.frozensets(st.tuples(st.integers(0, 2), st.integers(0, 1)), max_size=6), st.integers(1, 3))
def test_support_sets_are_minimal(pairs, k):
    # "at least k literals from a fixed set" over two variables
    target = frozenset(Lit(i % 2, a) for i, a in pairs)
    P = SupportProperty("atleast", ("x", "y"), lambda s, S: len(S & target) >= k, monotone=True)
    sig = Signature({"x": {0, 1}, "y": {0, 1}})
    found = support_sets(P, sig)
    for S in found:
        assert P(sig, S)
        assert all(not P(sig, frozenset(c)) for r in range(len(S)) for c in itertools.combinations(S, r))
        assert is_support(P, sig, S)
    assert bool(found) == supported(P, sig)
    assert len(universe(P, sig)) == 4
