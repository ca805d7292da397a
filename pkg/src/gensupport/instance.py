"""Line-oriented instance files.

::

    # comment
    var x 1 3              # domain 1..3
    varset y 0 4 7         # explicit values
    vec X x y
    element X i z
    occurrenceleq X 1 2
    occurrencegeq X 1 1
    diseq x y
    table X : 0 1 ; 1 0 ;
"""
from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path

from .core import Domain, Signature
from .errors import ContractViolation, ParseError
from .semantics import DiseqIdx, Element, OccurrenceGeq, OccurrenceLeq, Table

__all__ = ["Instance", "parse", "load", "dumps", "dump"]


@dataclass
class Instance:
    domains: dict = field(default_factory=dict)  # declaration order is branching order
    vectors: dict = field(default_factory=dict)
    constraints: list = field(default_factory=list)

    @property
    def variables(self) -> list:
        return list(self.domains)

    def signature(self) -> Signature:
        return Signature(self.domains)

    def add_var(self, name, values) -> None:
        if name in self.domains:
            raise ContractViolation(f"variable {name!r} declared twice")
        self.domains[name] = Domain(values)


def _int(tok, line):
    try:
        return int(tok)
    except ValueError:
        raise ParseError(f"expected an integer, got {tok!r}", line) from None


def parse(text: str) -> Instance:
    inst = Instance()

    def var(name, line):
        if name not in inst.domains:
            raise ParseError(f"unknown variable {name!r}", line)
        return name

    def vec(name, line):
        if name not in inst.vectors:
            raise ParseError(f"unknown vector {name!r}", line)
        return inst.vectors[name]

    def arity(toks, n, line):
        if len(toks) != n:
            raise ParseError(f"{toks[0]} takes {n - 1} arguments, got {len(toks) - 1}", line)

    for ln, raw in enumerate(text.splitlines(), 1):
        toks = raw.split("#", 1)[0].split()
        if not toks:
            continue
        kw = toks[0]
        if kw == "var":
            arity(toks, 4, ln)
            lo, hi = _int(toks[2], ln), _int(toks[3], ln)
            if toks[1] in inst.domains:
                raise ParseError(f"variable {toks[1]!r} declared twice", ln)
            inst.domains[toks[1]] = Domain(range(lo, hi + 1))
        elif kw == "varset":
            if len(toks) < 2:
                raise ParseError("varset needs a name", ln)
            if toks[1] in inst.domains:
                raise ParseError(f"variable {toks[1]!r} declared twice", ln)
            inst.domains[toks[1]] = Domain(_int(t, ln) for t in toks[2:])
        elif kw == "vec":
            if len(toks) < 2:
                raise ParseError("vec needs a name", ln)
            if toks[1] in inst.vectors:
                raise ParseError(f"vector {toks[1]!r} declared twice", ln)
            inst.vectors[toks[1]] = tuple(var(t, ln) for t in toks[2:])
        elif kw == "element":
            arity(toks, 4, ln)
            inst.constraints.append(Element(vec(toks[1], ln), var(toks[2], ln), var(toks[3], ln)))
        elif kw in ("occurrenceleq", "occurrencegeq"):
            arity(toks, 4, ln)
            cls = OccurrenceLeq if kw == "occurrenceleq" else OccurrenceGeq
            inst.constraints.append(cls(vec(toks[1], ln), _int(toks[2], ln), _int(toks[3], ln)))
        elif kw == "diseq":
            arity(toks, 3, ln)
            inst.constraints.append(DiseqIdx(var(toks[1], ln), var(toks[2], ln)))
        elif kw == "table":
            if len(toks) < 3 or toks[2] != ":":
                raise ParseError("expected: table <vec> : <row> ; <row> ; ...", ln)
            X = vec(toks[1], ln)
            body = " ".join(toks[3:])
            chunks = body.split(";")
            if chunks[-1].strip():
                raise ParseError("table rows must end with ';'", ln)
            rows = []
            for chunk in chunks[:-1]:
                row = tuple(_int(t, ln) for t in chunk.split())
                if len(row) != len(X):
                    raise ParseError(f"table row {row} has {len(row)} values, vector has {len(X)}", ln)
                rows.append(row)
            inst.constraints.append(Table(X, frozenset(rows)))
        else:
            raise ParseError(f"unknown statement {kw!r}", ln)
    return inst


def load(path) -> Instance:
    return parse(Path(path).read_text(encoding="utf-8"))


def _dom_line(name, d: Domain) -> str:
    vals = d.values
    if vals and list(vals) == list(range(vals[0], vals[-1] + 1)):
        return f"var {name} {vals[0]} {vals[-1]}"
    return " ".join(["varset", name, *map(str, vals)])


def dumps(inst: Instance, comments=()) -> str:
    """Serialise ``inst``; vectors for unnamed constraint scopes are invented as needed."""
    lines = [f"# {c}" for c in comments]
    lines += [_dom_line(v, d) for v, d in inst.domains.items()]
    vectors = dict(inst.vectors)
    names = {X: n for n, X in vectors.items()}
    body = []

    def vec_of(X):
        X = tuple(X)
        if X not in names:
            n = len(vectors)
            name = f"V{n}"
            while name in vectors:
                n += 1
                name = f"V{n}"
            vectors[name] = X
            names[X] = name
        return names[X]

    for c in inst.constraints:
        if isinstance(c, Element):
            body.append(f"element {vec_of(c.X)} {c.y} {c.z}")
        elif isinstance(c, OccurrenceLeq):
            body.append(f"occurrenceleq {vec_of(c.X)} {c.a} {c.c}")
        elif isinstance(c, OccurrenceGeq):
            body.append(f"occurrencegeq {vec_of(c.X)} {c.a} {c.c}")
        elif isinstance(c, DiseqIdx):
            body.append(f"diseq {c.x1} {c.x2}")
        elif isinstance(c, Table):
            rows = " ".join(" ".join(map(str, r)) + " ;" for r in sorted(c.rows))
            body.append(f"table {vec_of(c.X)} : {rows}".rstrip())
        else:
            raise ContractViolation(f"cannot serialise {type(c).__name__}")
    lines += [" ".join(["vec", n, *X]) for n, X in vectors.items()]
    lines += body
    return "\n".join(lines) + "\n"


def dump(inst: Instance, path, comments=()) -> None:
    Path(path).write_text(dumps(inst, comments), encoding="utf-8")
