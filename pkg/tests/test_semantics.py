import pytest

from gensupport.core import Signature
from gensupport.errors import ConfigurationError, ContractViolation, EnumerationLimitError
from gensupport.semantics import DiseqIdx, Element, OccurrenceGeq, OccurrenceLeq, Table, check_tuple, denote


def test_element_zero_based():
    e = Element(("a", "b"), "y", "z")
    assert e.scope == ("a", "b", "y", "z") and (e.ycol, e.zcol) == (2, 3)
    assert check_tuple(e, (4, 7, 1, 7))
    assert not check_tuple(e, (4, 7, 1, 4))
    assert not check_tuple(e, (4, 7, 2, 4))  # index out of range
    assert not check_tuple(e, (4, 7, -1, 7))


def test_element_denotation():
    e = Element(("x",), "y", "z")
    s = Signature({"x": {5}, "y": {0}, "z": {4, 5}})
    assert denote(e, s).tuples == {(5, 0, 5)}


def test_element_with_aliasing_is_coherent_only():
    # z also appears in X: tuples must agree on it
    e = Element(("z", "w"), "y", "z")
    s = Signature({"z": {1, 2}, "w": {2}, "y": {0, 1}})
    assert denote(e, s).tuples == {(1, 2, 0, 1), (2, 2, 0, 2), (2, 2, 1, 2)}


def test_occurrence_denotation():
    s = Signature({"x1": {1, 2}, "x2": {1, 2}})
    assert denote(OccurrenceGeq(("x1", "x2"), 1, 2), s).tuples == {(1, 1)}
    assert len(denote(OccurrenceLeq(("x1", "x2"), 1, 1), s)) == 3
    assert not denote(OccurrenceLeq(("x1", "x2"), 1, -1), s).tuples
    assert len(denote(OccurrenceLeq(("x1", "x2"), 1, 7), s)) == 4


def test_table_and_diseq():
    t = Table(("x", "y", "z"), {(0, 1, 1), (1, 0, 1), (1, 1, 0)})
    s = Signature({"x": {0, 1}, "y": {0, 1}, "z": {1}})
    assert denote(t, s).tuples == {(0, 1, 1), (1, 0, 1)}
    with pytest.raises(ContractViolation):
        Table(("x",), {(1, 2)})
    d = DiseqIdx("x", "y")
    assert denote(d, Signature({"x": {1, 2}, "y": {1}})).tuples == {(2, 1)}


def test_errors():
    e = Element(("x",), "y", "z")
    with pytest.raises(ConfigurationError):
        denote(e, Signature({"x": {1}}))
    with pytest.raises(ContractViolation):
        check_tuple(e, (1, 2))
    big = OccurrenceLeq(tuple(f"v{i}" for i in range(30)), 1, 3)
    with pytest.raises(EnumerationLimitError):
        denote(big, Signature({f"v{i}": {1, 2} for i in range(30)}))


def test_sum_constraint_has_four_tuples(bool3):
    # x + y + z >= 2 over {0,1}: three tuples with one zero plus <1,1,1>
    from gensupport.core import iter_tuples

    sols = {t for t in iter_tuples(("x", "y", "z"), bool3) if sum(t) >= 2}
    assert sols == {(0, 1, 1), (1, 0, 1), (1, 1, 0), (1, 1, 1)}
