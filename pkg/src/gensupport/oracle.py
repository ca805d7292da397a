"""Brute-force ground truth for the propagators.

Everything here enumerates: the satisfying tuples of a constraint, the
sub-signature lattice below a start signature, and support sets.  The
checkers return a :class:`~gensupport.support.CheckResult` whose
``counterexample`` is ``None`` when nothing was found.
"""
from __future__ import annotations

import random
from collections import deque
from typing import Callable, Iterable, Optional

from .core import DEFAULT_ENUM_LIMIT, Domain, Signature, signature_leq, sub_signatures
from .propagators import NewSupport, NoSupport
from .semantics import Element, OccurrenceGeq, OccurrenceLeq, denote
from .support import (
    CheckResult,
    _between,
    _set_key,
    collection_supported,
    support_sets,
    supported,
    valid,
)

__all__ = [
    "gac_signature",
    "check_sound",
    "check_complete",
    "check_schema_conformance",
    "lattice",
    "element_family",
    "occurrence_family",
]


def gac_signature(spec, sig: Signature, limit: int = DEFAULT_ENUM_LIMIT) -> Signature:
    """Keep exactly the values that occur in some satisfying tuple."""
    rel = denote(spec, sig, limit)
    scope = spec.scope
    keep: dict = {}
    for v in dict.fromkeys(scope):
        keep[v] = set(sig[v])
    for i, v in enumerate(scope):
        keep[v] &= {t[i] for t in rel.tuples}
    return sig.updated({v: Domain(vals) for v, vals in keep.items()})


def lattice(sig0: Signature, vars_=None, *, nonempty=True, cap: Optional[int] = None, seed: int = 0) -> list:
    """Sub-signatures of ``sig0``: all of them, or ``cap`` distinct seeded samples if there are more."""
    vars_ = list(dict.fromkeys(sig0 if vars_ is None else vars_))
    size = 1
    for v in vars_:
        size *= 2 ** len(sig0[v]) - (1 if nonempty else 0)
    if cap is None or size <= cap:
        return list(sub_signatures(sig0, vars_, nonempty=nonempty))
    rnd = random.Random(seed)
    seen: dict = {}
    while len(seen) < cap:
        doms = {}
        for v in vars_:
            vals = sig0[v].values
            while True:
                d = Domain(a for a in vals if rnd.random() < 0.5)
                if d or not nonempty:
                    break
            doms[v] = d
        s = sig0.updated(doms)
        seen.setdefault(s, None)
    return list(seen)


def element_family(max_vars: int, max_val: int) -> list:
    """``(spec, σ0)`` for element over ``k = 1..max_vars`` array variables, all domains ``0..max_val``."""
    out = []
    dom = Domain(range(0, max_val + 1))
    for k in range(1, max_vars + 1):
        X = tuple(f"x{i}" for i in range(k))
        spec = Element(X, "y", "z")
        out.append((spec, Signature({v: dom for v in spec.scope})))
    return out


def occurrence_family(kind: str, max_vars: int, max_val: int, counts: Iterable[int] = range(0, 5)) -> list:
    """``(spec, σ0)`` for occurrenceleq/geq with values ``1..max_val``, every ``a`` and ``c``."""
    cls = {"leq": OccurrenceLeq, "geq": OccurrenceGeq}[kind]
    dom = Domain(range(1, max_val + 1))
    counts = list(counts)
    out = []
    for k in range(1, max_vars + 1):
        X = tuple(f"x{i}" for i in range(k))
        sig = Signature({v: dom for v in X})
        for a in dom:
            for c in counts:
                out.append((cls(X, a, c), sig))
    return out


def check_sound(props, spec, lat: Iterable[Signature]) -> CheckResult:
    """Look for a singleton signature where every property is supported but no tuple satisfies."""
    props = list(props)
    res = CheckResult()
    for sig in lat:
        if not all(len(sig[v]) == 1 for v in spec.scope):
            continue
        res.scanned += 1
        if collection_supported(props, sig) and not denote(spec, sig).tuples:
            res.counterexample = (sig,)
            return res
    return res


def _complete_at(props, spec, sig) -> Optional[Signature]:
    """Breadth-first search down from ``sig`` for a supported σ' losing no solution."""
    floor = gac_signature(spec, sig)
    vars_ = list(dict.fromkeys(spec.scope))
    seen = {sig}
    q = deque([sig])
    while q:
        cur = q.popleft()
        if collection_supported(props, cur):
            return cur
        for v in vars_:
            for a in cur[v]:
                if a in floor[v]:
                    continue
                nxt = cur.updated({v: cur[v].without(a)})
                if nxt not in seen:
                    seen.add(nxt)
                    q.append(nxt)
    return None


def check_complete(props, spec, lat: Iterable[Signature]) -> CheckResult:
    """For each σ with solutions, find σ' ⊑ σ keeping every solution with all properties supported.

    ``result.equal`` counts the σ whose witness σ' had exactly the same
    solutions; since σ' ⊑ σ this is every successful case, and the count
    is kept so callers can see it.
    """
    props = list(props)
    res = CheckResult()
    res.equal = 0
    for sig in lat:
        sols = denote(spec, sig).tuples
        if not sols:
            continue
        res.scanned += 1
        witness = _complete_at(props, spec, sig)
        if witness is None:
            res.counterexample = (sig,)
            return res
        if denote(spec, witness).tuples == sols:
            res.equal += 1
    return res


class _Conformance:
    def __init__(self, P, elems):
        self.P = P
        self.elems = elems
        self.vars = list(dict.fromkeys(P.scope))
        self._max: dict = {}
        self._none: dict = {}
        self._supports: dict = {}

    def supports(self, sig):
        got = self._supports.get(sig)
        if got is None:
            got = self._supports[sig] = sorted(support_sets(self.P, sig, self.elems), key=_set_key)
        return got

    def maximal(self, sig1, sig2) -> bool:
        key = (sig1, sig2)
        if key not in self._max:
            self._max[key] = not any(
                s3 != sig2 and supported(self.P, s3, self.elems) for s3 in _between(sig1, self.vars, dict(sig2))
            )
        return self._max[key]

    def nothing_below(self, sig1) -> bool:
        if sig1 not in self._none:
            self._none[sig1] = not any(
                supported(self.P, s2, self.elems) for s2 in _between(sig1, self.vars, nonempty=True)
            )
        return self._none[sig1]

    def verify(self, sig1, out) -> Optional[str]:
        P = self.P
        if isinstance(out, NoSupport):
            return None if self.nothing_below(sig1) else "NoSupport but a narrower signature is supported"
        if not isinstance(out, NewSupport):
            return f"unexpected outcome {out!r}"
        sig2, S = out.sig, out.support
        if not signature_leq(sig2, sig1, self.vars):
            return "returned signature is not below the input"
        if not all(sig2[v] for v in self.vars):
            return "returned signature has an empty domain"
        if not valid(S, P.scope, sig2):
            return "returned support is not valid"
        if not P(sig2, S):
            return "returned set does not satisfy the property"
        if not self.maximal(sig1, sig2):
            return "returned signature is not maximal"
        return None


def check_schema_conformance(impl: Callable, P, spec, lat: Iterable[Signature], elems=None) -> CheckResult:
    """Run ``impl(spec, σ1, S)`` wherever a support ``S`` of σ is lost at σ1 ⊑ σ, and on first calls.

    The counterexample is ``(σ, σ1, S, outcome, reason)``.
    """
    lat = list(lat)
    ctx = _Conformance(P, elems)
    res = CheckResult()
    done = set()

    def run(sig, sig1, S):
        if (sig1, S) in done:
            return None
        done.add((sig1, S))
        res.scanned += 1
        out = impl(spec, sig1, S)
        why = ctx.verify(sig1, out)
        return None if why is None else (sig, sig1, S, out, why)

    for sig in lat:
        if not all(sig[v] for v in ctx.vars):
            continue
        bad = run(sig, sig, frozenset())
        if bad:
            res.counterexample = bad
            return res
        for S in ctx.supports(sig):
            for sig1 in _between(sig, ctx.vars, nonempty=True):
                if S in ctx.supports(sig1):
                    continue
                bad = run(sig, sig1, S)
                if bad:
                    res.counterexample = bad
                    return res
    return res
