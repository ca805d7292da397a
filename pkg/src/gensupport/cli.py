"""Command line entry point: ``gensupport {solve,check-gac,verify,bench}``."""
from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import oracle
from .bench import bench_compare, write_csv
from .errors import GenSupportError
from .instance import Instance, dump, load
from .propagators import (
    element_p1,
    element_p2,
    element_p3,
    element_properties,
    occ_geq,
    occ_leq,
    occurrence_property,
)
from .search import SearchConfig, solve
from .semantics import Element
from .support import backtrack_stable_check, p_admissible_check
from .triggers import FAILURE, propagate_to_fixpoint

CHECKS = ("padmiss", "btstable", "sound", "complete", "schema")


def _stats_json(stats) -> str:
    d = stats.as_dict(wall=False)
    d["wall_ms"] = round(stats.wall_ms, 3)
    return json.dumps(d, indent=2) + "\n"


def cmd_solve(args) -> int:
    inst = load(args.file)
    cfg = SearchConfig(find_all=args.all, node_limit=args.node_limit, occ_mode=args.occ_mode)
    res = solve(inst, cfg, engine=args.engine)
    names = inst.variables
    for sol in res.solutions:
        print(" ".join(f"{v}={a}" for v, a in zip(names, sol)))
    st = res.stats
    tail = " (node limit reached)" if st.limit_hit else ""
    print(f"solutions: {st.solutions}  nodes: {st.nodes}  time: {st.wall_ms:.1f} ms{tail}", file=sys.stderr)
    if args.stats_json:
        Path(args.stats_json).write_text(_stats_json(st), encoding="utf-8")
    return 0


def cmd_check_gac(args) -> int:
    inst = load(args.file)
    sig = inst.signature()
    fix = propagate_to_fixpoint(inst.constraints, sig, args.occ_mode)
    if fix is FAILURE:
        print("propagation fails at the root")
        return 1
    bad = 0
    for n, spec in enumerate(inst.constraints):
        gac = oracle.gac_signature(spec, fix)
        extra = {v: sorted(set(fix[v]) - set(gac[v])) for v in dict.fromkeys(spec.scope)}
        extra = {v: vals for v, vals in extra.items() if vals}
        if extra:
            bad = 1
            desc = ", ".join(f"{v}: {vals}" for v, vals in extra.items())
            print(f"constraint {n} ({type(spec).__name__}): not GAC, unsupported {desc}")
        else:
            print(f"constraint {n} ({type(spec).__name__}): GAC")
    return bad


def _family(name, k, v):
    if name == "element":
        for spec, sig in oracle.element_family(k, v):
            props = element_properties(spec)
            yield spec, sig, list(zip(props, (element_p1, element_p2, element_p3)))
    else:
        kind = {"occleq": "leq", "occgeq": "geq"}[name]
        impl = occ_leq if kind == "leq" else occ_geq
        for spec, sig in oracle.occurrence_family(kind, k, v, range(0, k + 2)):
            yield spec, sig, [(occurrence_property(spec), impl)]


def _emit(out_dir, stem, spec, sig, notes) -> str:
    inst = Instance(domains={v: sig[v] for v in dict.fromkeys(spec.scope)}, constraints=[spec])
    out_dir.mkdir(parents=True, exist_ok=True)
    path = out_dir / f"{stem}.inst"
    dump(inst, path, notes)
    return str(path)


def cmd_verify(args) -> int:
    checks = [args.check] if args.check else list(CHECKS)
    out_dir = Path(args.out_dir)
    found = 0
    n_ce = 0
    for spec, sig0, pairs in _family(args.family, args.max_vars, args.max_val):
        tag = f"{type(spec).__name__}(|X|={len(spec.X)}" + (
            ")" if isinstance(spec, Element) else f", a={spec.a}, c={spec.c})"
        )
        lat = oracle.lattice(sig0, cap=args.cap, seed=args.seed)
        props = [P for P, _ in pairs]
        for check in checks:
            results = []
            if check == "padmiss":
                results = [(P.name, p_admissible_check(P, sig0)) for P in props]
            elif check == "btstable":
                results = [(P.name, backtrack_stable_check(P, sig0)) for P in props]
            elif check == "sound":
                results = [("all", oracle.check_sound(props, spec, lat))]
            elif check == "complete":
                results = [(P.name, oracle.check_complete([P], spec, lat)) for P in props]
                results.append(("all", oracle.check_complete(props, spec, lat)))
            elif check == "schema":
                results = [(P.name, oracle.check_schema_conformance(f, P, spec, lat)) for P, f in pairs]
            for pname, r in results:
                if r.ok:
                    print(f"{tag} {pname} {check}: ok ({r.scanned} cases)")
                    continue
                found = 1
                ce = r.counterexample
                sig = ce[1] if len(ce) > 1 else ce[0]
                notes = [f"{check} counterexample for {pname}"] + [f"  {x!r}" for x in ce]
                n_ce += 1
                path = _emit(out_dir, f"{args.family}-{check}-{pname}-{n_ce}", spec, sig, notes)
                print(f"{tag} {pname} {check}: counterexample written to {path}")
    return found


def cmd_bench(args) -> int:
    limits = [int(x) for x in args.limits.split(",") if x.strip()]
    rows = bench_compare(limits, args.n, args.copies, engine=args.engine, repeats=args.repeats)
    print(f"{'limit':>10} {'mode':>8} {'nodes':>10} {'solutions':>10} {'occ calls':>12} {'ms':>10}")
    for r in rows:
        print(f"{r.limit:>10} {r.mode:>8} {r.nodes:>10} {r.solutions:>10} {r.occ_calls:>12} {r.wall_ms:>10.1f}")
    if args.report_csv:
        write_csv(rows, args.report_csv)
    return 0


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="gensupport", description=__doc__)
    sub = ap.add_subparsers(dest="command", required=True)

    s = sub.add_parser("solve", help="search an instance file")
    s.add_argument("file")
    s.add_argument("--all", action="store_true", help="enumerate every solution")
    s.add_argument("--node-limit", type=int, default=None)
    s.add_argument("--occ-mode", choices=("watched", "static"), default="watched")
    s.add_argument("--engine", choices=("auto", "python", "fast"), default="auto")
    s.add_argument("--stats-json", metavar="PATH")
    s.set_defaults(func=cmd_solve)

    g = sub.add_parser("check-gac", help="propagate at the root and compare each constraint with brute-force GAC")
    g.add_argument("file")
    g.add_argument("--occ-mode", choices=("watched", "static"), default="watched")
    g.set_defaults(func=cmd_check_gac)

    v = sub.add_parser("verify", help="exhaustive property and propagator checks on small instances")
    v.add_argument("--family", choices=("element", "occleq", "occgeq"), required=True)
    v.add_argument("--max-vars", type=int, default=2)
    v.add_argument("--max-val", type=int, default=2)
    v.add_argument("--check", choices=CHECKS, default=None, help="run one check (default: all)")
    v.add_argument("--cap", type=int, default=None, help="sample at most this many signatures per instance")
    v.add_argument("--seed", type=int, default=0)
    v.add_argument("--out-dir", default="counterexamples")
    v.set_defaults(func=cmd_verify)

    b = sub.add_parser("bench", help="watched versus static occurrence propagation")
    b.add_argument("--n", type=int, default=100)
    b.add_argument("--copies", type=int, default=100)
    b.add_argument("--limits", default="100000,1000000")
    b.add_argument("--engine", choices=("auto", "python", "fast"), default="auto")
    b.add_argument("--repeats", type=int, default=1)
    b.add_argument("--report-csv", metavar="PATH")
    b.set_defaults(func=cmd_bench)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (GenSupportError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
