"""Watched-literal versus assignment-triggered occurrence propagation.

The benchmark instance has ``n`` 0/1-style variables over ``{1, 2}``, many
identical copies of ``occurrenceleq(X, 1, floor(0.9 n))`` and a band of
disequalities ``X[i] != X[i+1]`` for ``i`` from ``floor(0.8 n)`` to
``n - 2``, which is ``80..98`` when ``n = 100``.
"""
from __future__ import annotations

import csv
from dataclasses import dataclass
from typing import Iterable

from .errors import ContractViolation
from .instance import Instance
from .search import SearchConfig, solve
from .semantics import DiseqIdx, OccurrenceLeq

__all__ = ["gen_benchmark", "BenchRow", "bench_compare", "write_csv"]


def gen_benchmark(n: int = 100, copies: int = 100) -> Instance:
    if n < 2 or copies < 1:
        raise ContractViolation("need n >= 2 and copies >= 1")
    inst = Instance()
    X = tuple(f"x{i}" for i in range(n))
    for v in X:
        inst.add_var(v, (1, 2))
    inst.vectors["X"] = X
    bound = (9 * n) // 10
    inst.constraints += [OccurrenceLeq(X, 1, bound) for _ in range(copies)]
    first = (4 * n) // 5
    inst.constraints += [DiseqIdx(X[i], X[i + 1]) for i in range(first, n - 1)]
    return inst


@dataclass
class BenchRow:
    limit: int
    mode: str
    nodes: int
    solutions: int
    occ_calls: int
    total_calls: int
    wall_ms: float
    limit_hit: bool


def _occ_calls(prop_calls: dict) -> int:
    return sum(n for k, n in prop_calls.items() if k.rsplit(".", 1)[-1] in ("Pl", "Pg", "Sl", "Sg"))


def bench_compare(
    limits: Iterable[int],
    n: int = 100,
    copies: int = 100,
    engine: str = "auto",
    find_all: bool = True,
    repeats: int = 1,
) -> list:
    """One row per ``(limit, mode)``; raises if the two modes explore different trees.

    With ``repeats > 1`` the wall time is the median of the runs.
    """
    inst = gen_benchmark(n, copies)
    if engine != "python":
        # compile (or load the cached kernel) before timing anything
        solve(inst, SearchConfig(node_limit=1, record_solutions=False), engine=engine)
    rows = []
    for limit in limits:
        got = {}
        for mode in ("watched", "static"):
            cfg = SearchConfig(find_all=find_all, node_limit=limit, occ_mode=mode, record_solutions=False)
            times = []
            for _ in range(max(1, repeats)):
                res = solve(inst, cfg, engine=engine)
                times.append(res.stats.wall_ms)
            st = res.stats
            times.sort()
            got[mode] = BenchRow(
                limit, mode, st.nodes, st.solutions, _occ_calls(st.prop_calls),
                sum(st.prop_calls.values()), times[len(times) // 2], st.limit_hit,
            )
        w, s = got["watched"], got["static"]
        if (w.nodes, w.solutions) != (s.nodes, s.solutions):
            raise AssertionError(
                f"search trees diverge at limit {limit}: watched {w.nodes}/{w.solutions}, "
                f"static {s.nodes}/{s.solutions}"
            )
        rows += [w, s]
    return rows


FIELDS = ["limit", "mode", "nodes", "solutions", "occ_calls", "total_calls", "wall_ms", "limit_hit"]


def write_csv(rows, path_or_file) -> None:
    own = isinstance(path_or_file, (str, bytes)) or hasattr(path_or_file, "__fspath__")
    fh = open(path_or_file, "w", newline="", encoding="utf-8") if own else path_or_file
    try:
        w = csv.writer(fh)
        w.writerow(FIELDS)
        for r in rows:
            w.writerow([getattr(r, f) if f != "wall_ms" else f"{r.wall_ms:.3f}" for f in FIELDS])
    finally:
        if own:
            fh.close()
