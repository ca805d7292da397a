"""Compiled search kernel for disequality and occurrence instances.

A numba re-implementation of :mod:`gensupport.search` restricted to
``diseq``, ``occurrenceleq`` and ``occurrencegeq`` with distinct scope
variables and every value within a 63-wide window.  Domains are bitmasks
(bit ``j`` stands for ``base + j``).  Wake order, queue policy, support
bookkeeping and node counting follow the Python engine step for step, so
both produce the same nodes, solutions and call counts; the test suite
checks this.
"""
from __future__ import annotations

import numpy as np
from numba import njit

from .semantics import DiseqIdx, OccurrenceGeq, OccurrenceLeq

__all__ = ["supports", "search", "MAX_WIDTH"]

MAX_WIDTH = 63

DISEQ, WLEQ, WGEQ, SLEQ, SGEQ = 0, 1, 2, 3, 4
_LABELS = {DISEQ: "diseq", WLEQ: "Pl", WGEQ: "Pg", SLEQ: "Sl", SGEQ: "Sg"}


def supports(inst) -> bool:
    """Whether the kernel can run ``inst``."""
    vals = [v for d in inst.domains.values() for v in d]
    if not vals or max(vals) - min(vals) >= MAX_WIDTH:
        return False
    for c in inst.constraints:
        if isinstance(c, DiseqIdx):
            if c.x1 == c.x2:
                return False
        elif isinstance(c, (OccurrenceLeq, OccurrenceGeq)):
            if len(set(c.X)) != len(c.X):
                return False
        else:
            return False
    return True


@njit(cache=True)
def _low(x):
    j = 0
    while not (x >> j) & 1:
        j += 1
    return j


@njit(cache=True)
def _kernel(dom, order, ptype, pa, pc, sc_start, sc_vars, as_start, as_props,
            width, find_all, limit, record, sol_cap):
    nv = dom.shape[0]
    npr = ptype.shape[0]
    calls = np.zeros(npr, np.int64)

    # trail of domains
    tcap = nv * width + 16
    trail_v = np.empty(tcap, np.int64)
    trail_d = np.empty(tcap, np.int64)
    tlen = 0
    marks = np.empty(tcap, np.int64)
    level = 0

    # queue
    queue = np.empty(npr + 1, np.int64)
    qhead = 0
    qtail = 0
    qsize = npr + 1
    queued = np.zeros(npr, np.bool_)

    # occurrence supports and watch lists
    maxn = 1
    ncap = 16
    for p in range(npr):
        n = sc_start[p + 1] - sc_start[p]
        if n + 1 > maxn:
            maxn = n + 1
        ncap += 2 * (n + 1)
    sup_len = np.zeros(npr, np.int64)
    sup_col = np.zeros((npr, maxn), np.int64)
    sup_val = np.zeros((npr, maxn), np.int64)
    sup_node = np.zeros((npr, maxn), np.int64)
    nlit = nv * width
    head = np.full(nlit, -1, np.int64)
    tail = np.full(nlit, -1, np.int64)
    nd_prop = np.zeros(ncap, np.int64)
    nd_lit = np.zeros(ncap, np.int64)
    nd_next = np.full(ncap, -1, np.int64)
    nd_prev = np.full(ncap, -1, np.int64)
    free = np.empty(ncap, np.int64)
    nfree = ncap
    for k in range(ncap):
        free[k] = ncap - 1 - k

    kept_col = np.zeros(maxn, np.int64)
    kept_val = np.zeros(maxn, np.int64)
    kept_node = np.zeros(maxn, np.int64)
    claimed = np.zeros(maxn, np.bool_)
    used = np.zeros(maxn, np.bool_)

    sols = np.zeros((sol_cap, nv), np.int64)
    nsols = 0
    count = 0
    nodes = 0
    limit_hit = False

    # branching stack
    st_var = np.empty(tcap, np.int64)
    st_bit = np.empty(tcap, np.int64)
    st_left = np.empty(tcap, np.bool_)
    sp = 0

    ok = True

    # enqueue everything
    for p in range(npr):
        queued[p] = True
        queue[qtail] = p
        qtail = (qtail + 1) % qsize

    phase = 0  # 0: propagate, 1: choose, 2: backtrack
    dec_var = -1
    dec_new = 0
    while True:
        if phase == 0:
            # apply a pending decision, then run the queue
            ok = True
            if dec_var >= 0:
                v = dec_var
                old = dom[v]
                new = dec_new
                dec_var = -1
                if new != old:
                    if level > 0:
                        trail_v[tlen] = v
                        trail_d[tlen] = old
                        tlen += 1
                    dom[v] = new
                    if new == 0:
                        ok = False
                    else:
                        lost = old & ~new
                        while lost:
                            j = _low(lost)
                            lost &= lost - 1
                            nd = head[v * width + j]
                            while nd >= 0:
                                q = nd_prop[nd]
                                if not queued[q]:
                                    queued[q] = True
                                    queue[qtail] = q
                                    qtail = (qtail + 1) % qsize
                                nd = nd_next[nd]
                        if new & (new - 1) == 0:
                            for t in range(as_start[v], as_start[v + 1]):
                                q = as_props[t]
                                if not queued[q]:
                                    queued[q] = True
                                    queue[qtail] = q
                                    qtail = (qtail + 1) % qsize
            while ok and qhead != qtail:
                p = queue[qhead]
                qhead = (qhead + 1) % qsize
                queued[p] = False
                calls[p] += 1
                s0 = sc_start[p]
                n = sc_start[p + 1] - s0
                typ = ptype[p]
                a = pa[p]
                c = pc[p]
                nch = 0
                ch_v0 = -1
                ch_d0 = 0
                if typ == DISEQ:
                    x1 = sc_vars[s0]
                    x2 = sc_vars[s0 + 1]
                    d1 = dom[x1]
                    d2 = dom[x2]
                    if d1 & (d1 - 1) == 0 and d1 & d2:
                        if d2 & ~d1 == 0:
                            ok = False
                        else:
                            ch_v0 = x2
                            ch_d0 = d2 & ~d1
                            nch = 1
                    elif d2 & (d2 - 1) == 0 and d2 & d1:
                        if d1 & ~d2 == 0:
                            ok = False
                        else:
                            ch_v0 = x1
                            ch_d0 = d1 & ~d2
                            nch = 1
                    if ok and nch == 1:
                        v = ch_v0
                        old = dom[v]
                        new = ch_d0
                        if level > 0:
                            trail_v[tlen] = v
                            trail_d[tlen] = old
                            tlen += 1
                        dom[v] = new
                        lost = old & ~new
                        while lost:
                            j = _low(lost)
                            lost &= lost - 1
                            nd = head[v * width + j]
                            while nd >= 0:
                                q = nd_prop[nd]
                                if q != p and not queued[q]:
                                    queued[q] = True
                                    queue[qtail] = q
                                    qtail = (qtail + 1) % qsize
                                nd = nd_next[nd]
                        if new & (new - 1) == 0:
                            for t in range(as_start[v], as_start[v + 1]):
                                q = as_props[t]
                                if q != p and not queued[q]:
                                    queued[q] = True
                                    queue[qtail] = q
                                    qtail = (qtail + 1) % qsize
                    continue

                abit = np.int64(1) << a  # a is a bit index here
                if typ == SLEQ or typ == SGEQ:
                    if typ == SLEQ:
                        fixed = 0
                        for t in range(n):
                            if dom[sc_vars[s0 + t]] == abit:
                                fixed += 1
                        if fixed > c:
                            ok = False
                            continue
                        if fixed < c:
                            continue
                    else:
                        opn = 0
                        for t in range(n):
                            d = dom[sc_vars[s0 + t]]
                            if not (d & (d - 1) == 0 and d != abit):
                                opn += 1
                        if opn < c:
                            ok = False
                            continue
                        if opn > c:
                            continue
                    for t in range(n):
                        v = sc_vars[s0 + t]
                        old = dom[v]
                        if typ == SLEQ:
                            if not (old & abit) or old & (old - 1) == 0:
                                continue
                            new = old & ~abit
                        else:
                            if old & (old - 1) == 0:
                                continue
                            new = old & abit
                        if level > 0:
                            trail_v[tlen] = v
                            trail_d[tlen] = old
                            tlen += 1
                        dom[v] = new
                        if new == 0:
                            ok = False
                            break
                        lost = old & ~new
                        while lost:
                            j = _low(lost)
                            lost &= lost - 1
                            nd = head[v * width + j]
                            while nd >= 0:
                                q = nd_prop[nd]
                                if q != p and not queued[q]:
                                    queued[q] = True
                                    queue[qtail] = q
                                    qtail = (qtail + 1) % qsize
                                nd = nd_next[nd]
                        if new & (new - 1) == 0:
                            for t2 in range(as_start[v], as_start[v + 1]):
                                q = as_props[t2]
                                if q != p and not queued[q]:
                                    queued[q] = True
                                    queue[qtail] = q
                                    qtail = (qtail + 1) % qsize
                    continue

                # watched occurrence
                geq = typ == WGEQ
                if geq:
                    need = c + 1
                    eq = c
                else:
                    need = n - c + 1
                    eq = n - c
                if need < 0:
                    need = 0
                if eq < 0:
                    eq = 0
                if eq == 0:
                    continue
                for t in range(n):
                    used[t] = False
                nk = 0
                nused = 0
                start = -1
                for k in range(sup_len[p]):
                    i = sup_col[p, k]
                    if used[i]:
                        continue
                    d = dom[sc_vars[s0 + i]]
                    b = sup_val[p, k]
                    if start < 0 and not (d >> b) & 1:
                        start = i
                    if geq:
                        good = (d & abit) != 0
                    else:
                        good = (d & ~abit) != 0
                    if good:
                        kept_col[nk] = i
                        if geq:
                            kept_val[nk] = a
                        elif b != a and (d >> b) & 1:
                            kept_val[nk] = b
                        else:
                            kept_val[nk] = _low(d & ~abit)
                        nk += 1
                        used[i] = True
                        nused += 1
                if nk < need:
                    if start < 0:
                        start = 0
                    for t in range(n):
                        i = (start + t) % n
                        if used[i]:
                            continue
                        d = dom[sc_vars[s0 + i]]
                        if geq:
                            good = (d & abit) != 0
                        else:
                            good = (d & ~abit) != 0
                        if good:
                            kept_col[nk] = i
                            kept_val[nk] = a if geq else _low(d & ~abit)
                            nk += 1
                            used[i] = True
                            nused += 1
                            if nk == need:
                                break
                if nk < need:
                    if nused < eq:
                        ok = False
                        continue
                    for i in range(n):
                        if not used[i]:
                            continue
                        v = sc_vars[s0 + i]
                        old = dom[v]
                        new = abit if geq else old & ~abit
                        if new == old:
                            continue
                        if level > 0:
                            trail_v[tlen] = v
                            trail_d[tlen] = old
                            tlen += 1
                        dom[v] = new
                        lost = old & ~new
                        while lost:
                            j = _low(lost)
                            lost &= lost - 1
                            nd = head[v * width + j]
                            while nd >= 0:
                                q = nd_prop[nd]
                                if q != p and not queued[q]:
                                    queued[q] = True
                                    queue[qtail] = q
                                    qtail = (qtail + 1) % qsize
                                nd = nd_next[nd]
                        if new & (new - 1) == 0:
                            for t2 in range(as_start[v], as_start[v + 1]):
                                q = as_props[t2]
                                if q != p and not queued[q]:
                                    queued[q] = True
                                    queue[qtail] = q
                                    qtail = (qtail + 1) % qsize
                    continue
                if nk > need:
                    nk = need
                if nk == 0:
                    continue
                # move watches: reuse matching old ones, place new at list tails
                m = sup_len[p]
                for k in range(m):
                    claimed[k] = False
                for k in range(nk):
                    i = kept_col[k]
                    b = kept_val[k]
                    found = -1
                    for k2 in range(m):
                        if not claimed[k2] and sup_col[p, k2] == i and sup_val[p, k2] == b:
                            found = k2
                            break
                    if found >= 0:
                        claimed[found] = True
                        kept_node[k] = sup_node[p, found]
                    else:
                        nfree -= 1
                        nd = free[nfree]
                        lit = sc_vars[s0 + i] * width + b
                        nd_prop[nd] = p
                        nd_lit[nd] = lit
                        nd_next[nd] = -1
                        nd_prev[nd] = tail[lit]
                        if tail[lit] >= 0:
                            nd_next[tail[lit]] = nd
                        else:
                            head[lit] = nd
                        tail[lit] = nd
                        kept_node[k] = nd
                for k2 in range(m):
                    if not claimed[k2]:
                        nd = sup_node[p, k2]
                        pv = nd_prev[nd]
                        nx = nd_next[nd]
                        lit = nd_lit[nd]
                        if pv >= 0:
                            nd_next[pv] = nx
                        else:
                            head[lit] = nx
                        if nx >= 0:
                            nd_prev[nx] = pv
                        else:
                            tail[lit] = pv
                        free[nfree] = nd
                        nfree += 1
                for k in range(nk):
                    sup_col[p, k] = kept_col[k]
                    sup_val[p, k] = kept_val[k]
                    sup_node[p, k] = kept_node[k]
                sup_len[p] = nk

            if not ok:
                while qhead != qtail:
                    queued[queue[qhead]] = False
                    qhead = (qhead + 1) % qsize
                phase = 2
            else:
                phase = 1
            continue

        if phase == 1:
            var = -1
            for t in range(nv):
                d = dom[order[t]]
                if d & (d - 1) != 0:
                    var = order[t]
                    break
            if var < 0:
                count += 1
                if record:
                    if nsols == sols.shape[0]:
                        grown = np.zeros((2 * sols.shape[0] + 1, nv), np.int64)
                        grown[:nsols] = sols[:nsols]
                        sols = grown
                    for t in range(nv):
                        sols[nsols, t] = _low(dom[t])
                    nsols += 1
                if not find_all:
                    break
                phase = 2
                continue
            if limit >= 0 and nodes >= limit:
                limit_hit = True
                break
            bit = _low(dom[var])
            marks[level] = tlen
            level += 1
            st_var[sp] = var
            st_bit[sp] = bit
            st_left[sp] = True
            sp += 1
            nodes += 1
            dec_var = var
            dec_new = np.int64(1) << bit
            phase = 0
            continue

        # phase 2: backtrack
        while sp > 0 and not st_left[sp - 1]:
            sp -= 1
            level -= 1
            while tlen > marks[level]:
                tlen -= 1
                dom[trail_v[tlen]] = trail_d[tlen]
        if sp == 0:
            break
        sp -= 1
        var = st_var[sp]
        bit = st_bit[sp]
        level -= 1
        while tlen > marks[level]:
            tlen -= 1
            dom[trail_v[tlen]] = trail_d[tlen]
        if limit >= 0 and nodes >= limit:
            limit_hit = True
            break
        marks[level] = tlen
        level += 1
        st_var[sp] = var
        st_bit[sp] = bit
        st_left[sp] = False
        sp += 1
        nodes += 1
        dec_var = var
        dec_new = dom[var] & ~(np.int64(1) << bit)
        phase = 0

    return nodes, count, limit_hit, calls, sols[:nsols]


def _compile_instance(inst, occ_mode):
    names = inst.variables
    index = {v: i for i, v in enumerate(names)}
    base = min(v for d in inst.domains.values() for v in d)
    width = max(v for d in inst.domains.values() for v in d) - base + 1
    dom = np.array([sum(1 << (v - base) for v in inst.domains[n]) for n in names], dtype=np.int64)
    ptype, pa, pc, starts, scope, labels = [], [], [], [0], [], []
    assign: list = [[] for _ in names]
    for ci, spec in enumerate(inst.constraints):
        p = len(ptype)
        if isinstance(spec, DiseqIdx):
            t, X, a, c = DISEQ, (spec.x1, spec.x2), 0, 0
        else:
            geq = isinstance(spec, OccurrenceGeq)
            if occ_mode == "watched":
                t = WGEQ if geq else WLEQ
            else:
                t = SGEQ if geq else SLEQ
            X, c = spec.X, spec.c
            # a value outside every domain never occurs; park it just past the window
            a = spec.a - base if 0 <= spec.a - base < MAX_WIDTH else MAX_WIDTH
        ptype.append(t)
        pa.append(a)
        pc.append(c)
        scope += [index[v] for v in X]
        starts.append(len(scope))
        labels.append(f"{ci}.{_LABELS[t]}")
        if t in (DISEQ, SLEQ, SGEQ):
            for v in dict.fromkeys(X):
                assign[index[v]].append(p)
    as_start = np.cumsum([0] + [len(a) for a in assign]).astype(np.int64)
    as_props = np.array([p for a in assign for p in a], dtype=np.int64)
    arrs = dict(
        dom=dom,
        ptype=np.array(ptype, dtype=np.int64),
        pa=np.array(pa, dtype=np.int64),
        pc=np.array(pc, dtype=np.int64),
        sc_start=np.array(starts, dtype=np.int64),
        sc_vars=np.array(scope, dtype=np.int64),
        as_start=as_start,
        as_props=as_props,
    )
    return arrs, labels, base, width


def search(inst, cfg):
    """Run the kernel; returns ``(RunStats, solutions)`` like the Python search."""
    from .search import RunStats

    if not supports(inst):
        raise ValueError("instance not supported by the compiled kernel")
    arrs, labels, base, width = _compile_instance(inst, cfg.occ_mode)
    order_names = list(cfg.var_order or inst.variables)
    index = {v: i for i, v in enumerate(inst.variables)}
    order = np.array([index[v] for v in order_names], dtype=np.int64)
    limit = -1 if cfg.node_limit is None else int(cfg.node_limit)
    nodes, count, hit, calls, sols = _kernel(
        arrs["dom"].copy(), order, arrs["ptype"], arrs["pa"], arrs["pc"], arrs["sc_start"],
        arrs["sc_vars"], arrs["as_start"], arrs["as_props"], max(width, 1), cfg.find_all,
        limit, cfg.record_solutions, 16,
    )
    stats = RunStats(int(nodes), int(count), {k: int(n) for k, n in zip(labels, calls)}, limit_hit=bool(hit))
    solutions = [tuple(int(x) + base for x in row) for row in sols]
    return stats, solutions
