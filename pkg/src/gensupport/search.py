"""Depth-first binary search over trailed domains.

Variables are branched in declaration order (or ``SearchConfig.var_order``)
and values smallest first: the left branch assigns the value, the right
branch removes it.  Each branch taken counts as one node; when the node
count reaches the limit no further branch is opened.
"""
from __future__ import annotations

import time
from dataclasses import dataclass, field
from typing import Optional

from .errors import ContractViolation
from .instance import Instance
from .propagators import build_propagators
from .triggers import Engine

__all__ = ["SearchConfig", "RunStats", "SolveResult", "solve", "build_engine"]

OCC_MODES = ("watched", "static")


@dataclass(frozen=True)
class SearchConfig:
    find_all: bool = False
    node_limit: Optional[int] = None
    occ_mode: str = "watched"
    var_order: Optional[tuple] = None
    record_solutions: bool = True

    def __post_init__(self):
        if self.occ_mode not in OCC_MODES:
            raise ContractViolation(f"occ_mode must be one of {OCC_MODES}, got {self.occ_mode!r}")
        if self.node_limit is not None and self.node_limit < 0:
            raise ContractViolation("node_limit must be non-negative")


@dataclass
class RunStats:
    nodes: int = 0
    solutions: int = 0
    prop_calls: dict = field(default_factory=dict)
    wall_ms: float = 0.0
    limit_hit: bool = False

    def as_dict(self, wall: bool = True) -> dict:
        d = {
            "nodes": self.nodes,
            "solutions": self.solutions,
            "prop_calls": dict(sorted(self.prop_calls.items(), key=lambda kv: _pid_key(kv[0]))),
            "limit_hit": self.limit_hit,
        }
        if wall:
            d["wall_ms"] = round(self.wall_ms, 3)
        return d


def _pid_key(pid: str):
    n, _, label = pid.partition(".")
    return (int(n), label) if n.isdigit() else (1 << 60, pid)


@dataclass
class SolveResult:
    stats: RunStats
    solutions: list


def build_engine(inst: Instance, occ_mode: str = "watched") -> Engine:
    eng = Engine(inst.signature())
    for n, spec in enumerate(inst.constraints):
        for p in build_propagators(spec, occ_mode):
            p.owner = n
            eng.add(p)
    return eng


def _python_search(inst: Instance, cfg: SearchConfig):
    order = list(cfg.var_order or inst.variables)
    eng = build_engine(inst, cfg.occ_mode)
    doms = eng.doms
    limit = cfg.node_limit
    nodes = 0
    count = 0
    sols: list = []
    limit_hit = False

    eng.enqueue_all()
    ok = eng.propagate() and all(doms[v] for v in order)
    stack: list = []  # (var, value, is_left)
    while ok is not None:
        if ok:
            var = next((v for v in order if len(doms[v]) > 1), None)
            if var is None:
                count += 1
                if cfg.record_solutions:
                    sols.append(tuple(doms[v].lo for v in inst.variables))
                if not cfg.find_all:
                    break
                ok = False
                continue
            if limit is not None and nodes >= limit:
                limit_hit = True
                break
            val = doms[var].lo
            eng.push_level()
            stack.append((var, val, True))
            nodes += 1
            ok = eng.set_domain(var, doms[var].keep((val,))) and eng.propagate()
            continue
        eng.clear_queue()
        while stack and not stack[-1][2]:
            stack.pop()
            eng.pop_level()
        if not stack:
            ok = None
            break
        var, val, _ = stack.pop()
        eng.pop_level()
        if limit is not None and nodes >= limit:
            limit_hit = True
            break
        eng.push_level()
        stack.append((var, val, False))
        nodes += 1
        ok = eng.set_domain(var, doms[var].without(val)) and eng.propagate()
    while eng.level:
        eng.pop_level()
    stats = RunStats(nodes, count, eng.prop_calls(), limit_hit=limit_hit)
    return stats, sols, eng


def solve(inst: Instance, config: Optional[SearchConfig] = None, engine: str = "auto") -> SolveResult:
    """Search ``inst``.

    ``engine`` is ``"python"`` (reference), ``"fast"`` (compiled kernel,
    only for instances built from disequalities and occurrence
    constraints) or ``"auto"`` (the kernel when it applies).
    """
    cfg = config or SearchConfig()
    t0 = time.perf_counter()
    use_fast = False
    if engine in ("auto", "fast"):
        from . import fast

        use_fast = fast.supports(inst)
        if engine == "fast" and not use_fast:
            raise ContractViolation("the compiled kernel does not handle this instance")
    elif engine != "python":
        raise ContractViolation(f"unknown engine {engine!r}")
    if use_fast:
        stats, sols = fast.search(inst, cfg)
    else:
        stats, sols, _ = _python_search(inst, cfg)
    stats.wall_ms = (time.perf_counter() - t0) * 1000.0
    return SolveResult(stats, sols)
