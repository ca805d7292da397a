from pathlib import Path

import pytest

from gensupport.bench import gen_benchmark
from gensupport.errors import ParseError
from gensupport.instance import dumps, load, parse
from gensupport.semantics import DiseqIdx, Element, OccurrenceGeq, OccurrenceLeq, Table

DATA = Path(__file__).parent / "data"


def test_parse_all_statements():
    text = """
    # leading comment
    var a 1 3
    varset b 0 4 7   # trailing comment
    var c 0 2
    vec V a b c
    element V c a
    occurrenceleq V 1 2
    occurrencegeq V 4 0
    diseq a b
    table V : 1 0 0 ; 2 4 1 ;
    """
    inst = parse(text)
    assert inst.variables == ["a", "b", "c"]
    assert inst.domains["b"] == {0, 4, 7}
    kinds = [type(c) for c in inst.constraints]
    assert kinds == [Element, OccurrenceLeq, OccurrenceGeq, DiseqIdx, Table]
    assert inst.constraints[-1].rows == {(1, 0, 0), (2, 4, 1)}
    assert parse(dumps(inst)).constraints == inst.constraints


@pytest.mark.parametrize(
    "text,line",
    [
        ("var x 1", 1),
        ("var x 1 a", 1),
        ("var x 1 2\nvar x 1 2", 2),
        ("vec V y", 1),
        ("var x 0 1\nelement V x x", 2),
        ("var x 0 1\nvec V x\ntable V : 0 1 ;", 3),
        ("var x 0 1\nvec V x\ntable V : 0", 3),
        ("frobnicate", 1),
    ],
)
def test_parse_errors(text, line):
    with pytest.raises(ParseError) as exc:
        parse(text)
    assert exc.value.line == line and f"line {line}" in str(exc.value)


def test_benchmark_golden_file():
    assert dumps(gen_benchmark()) == (DATA / "bench_100_100.inst").read_text()


def test_benchmark_structure():
    inst = gen_benchmark(100, 100)
    occ = [c for c in inst.constraints if isinstance(c, OccurrenceLeq)]
    dis = [c for c in inst.constraints if isinstance(c, DiseqIdx)]
    assert len(occ) == 100 and all(c.a == 1 and c.c == 90 and len(c.X) == 100 for c in occ)
    assert [(c.x1, c.x2) for c in dis] == [(f"x{i}", f"x{i + 1}") for i in range(80, 99)]
    assert all(d == {1, 2} for d in inst.domains.values())


def test_benchmark_scaling_round_trip():
    inst = gen_benchmark(10, 10)
    back = parse(dumps(inst))
    assert back.constraints == inst.constraints
    assert [(c.x1, c.x2) for c in back.constraints if isinstance(c, DiseqIdx)] == [("x8", "x9")]
    assert {c.c for c in back.constraints if isinstance(c, OccurrenceLeq)} == {9}
    assert len(gen_benchmark(5, 1).constraints) == 1 + 0


def test_load_files():
    assert isinstance(load(DATA / "element.inst").constraints[0], Element)
