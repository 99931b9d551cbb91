"""Command-line front end: generators, constructors, validators and sweeps.

Exit codes: 0 ok, 1 verification failure, 2 input error, 3 cap exceeded.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import logging
import os
import sys
import time
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path

from . import generators, lowerbounds
from .coreset import CoresetResult, greedy_coreset, lp_coreset, verify_coreset
from .errors import CapExceededError, ConvergenceError, ExtractionError, InputError
from .kcenter import KCoresetResult, kcenter_coreset, verify_kcenter
from .metric import DistanceOracle, Instance, load_instance
from .structures import (family_from_dict, max_comatching, ramsey_extract, validate,
                         validate_d_comatching)
from .vc import ball_system, vc_dim_at_most

log = logging.getLogger("planar_coreset")

EXIT_OK, EXIT_FAIL, EXIT_INPUT, EXIT_CAP = 0, 1, 2, 3
SWEEP_COLUMNS = ["size", "trial", "seed", "n", "points", "method", "eps", "Q", "tau_sum",
                 "buckets", "wall_time", "verified"]


def threads():
    """Worker count from PLANAR_CORESET_THREADS (default 1)."""
    try:
        return max(1, int(os.environ.get("PLANAR_CORESET_THREADS", "1")))
    except ValueError:
        raise InputError("PLANAR_CORESET_THREADS must be an integer") from None


def _read_json(path):
    try:
        return json.loads(Path(path).read_text())
    except json.JSONDecodeError as exc:
        raise InputError(f"{path}: malformed JSON ({exc})") from exc
    except OSError as exc:
        raise InputError(f"{path}: {exc.strerror}") from exc


def _load(path):
    try:
        return load_instance(path)
    except OSError as exc:
        raise InputError(f"{path}: {exc.strerror}") from exc


def _emit(payload, out=None, fmt="json"):
    if fmt == "csv":
        flat = {k: v for k, v in payload.items() if not isinstance(v, (dict, list))}
        buf = io.StringIO()
        w = csv.DictWriter(buf, fieldnames=list(flat))
        w.writeheader()
        w.writerow(flat)
        text = buf.getvalue()
    else:
        text = json.dumps(payload, indent=1, sort_keys=True, default=_jsonable) + "\n"
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def _jsonable(o):
    if hasattr(o, "tolist"):
        return o.tolist()
    if hasattr(o, "to_dict"):
        return o.to_dict()
    raise TypeError(f"not JSON serializable: {type(o).__name__}")


# gen

def _points_arg(graph, spec, seed):
    if spec in (None, "all"):
        return range(graph.vertex_count)
    if spec == "half":
        return generators.random_point_subset(graph, max(1, graph.vertex_count // 2), seed)
    return generators.random_point_subset(graph, int(spec), seed)


def cmd_gen(args):
    kind = args.kind
    if kind == "grid":
        g = generators.grid(args.w, args.h, args.weights, args.seed)
        inst = Instance(g, _points_arg(g, args.points, args.seed),
                        {"generator": "grid", "w": args.w, "h": args.h,
                         "weights": args.weights, "seed": args.seed})
    elif kind == "subdiv":
        if not args.input:
            raise InputError("gen subdiv needs --in")
        src = _load(args.input)
        g = generators.random_subdivision(src.graph, args.rounds, args.seed)
        meta = dict(src.meta, subdivision_rounds=args.rounds, subdivision_seed=args.seed)
        inst = Instance(g, src.points, meta)
    elif kind == "soko":
        g, pairs = lowerbounds.gen_soko(args.k)
        inst = lowerbounds.as_instance("soko", g, [(p, [q]) for p, q in pairs], 1, 2 * args.k - 1,
                                       height=args.k)
    elif kind == "treek":
        g, entries = lowerbounds.gen_tree_k(args.k)
        inst = lowerbounds.as_instance("treek", g, entries, args.k, args.k)
    else:
        g, entries = lowerbounds.gen_planar_kd(args.k, args.d)
        inst = lowerbounds.as_instance("planarkd", g, entries, args.k, args.d)
    if "entries" in inst.meta:
        rep = lowerbounds.verify_lower_bound(inst.graph, lowerbounds.entries_from_meta(inst.meta),
                                             inst.meta["k"], inst.meta["d"])
        if not rep:
            log.error("generated family failed verification: %s", rep.to_dict())
            return EXIT_FAIL
    _emit(inst.to_dict(), args.out)
    return EXIT_OK


# coreset / kcoreset

def cmd_coreset(args):
    inst = _load(args.input)
    oracle = DistanceOracle(inst.graph)
    if args.method == "greedy":
        res = greedy_coreset(oracle, inst.points, args.eps)
    else:
        res = lp_coreset(oracle, inst.points, args.eps, seed=args.seed, c=args.c)
    _emit(res.to_dict(), args.out)
    return EXIT_OK


def cmd_kcoreset(args):
    inst = _load(args.input)
    oracle = DistanceOracle(inst.graph)
    res = kcenter_coreset(oracle, inst.points, args.k, args.eps, seed=args.seed, c=args.c,
                          n_cap=args.n_cap, k_cap=args.k_cap)
    _emit(res.to_dict(), args.out)
    return EXIT_OK


# verify

def cmd_verify(args):
    inst = _load(args.input)
    oracle = DistanceOracle(inst.graph)
    what = args.what
    if what == "coreset":
        res = CoresetResult.from_dict(_read_json(_need(args.result, "--result")))
        eps = args.eps if args.eps is not None else res.epsilon
        rep = verify_coreset(oracle, inst.points, res.Q, eps).to_dict()
    elif what == "kcoreset":
        res = KCoresetResult.from_dict(_read_json(_need(args.result, "--result")))
        eps = args.eps if args.eps is not None else res.epsilon
        rep = verify_kcenter(oracle, inst.points, res.Q, res.k, eps).to_dict()
    elif what == "lowerbound":
        entries = lowerbounds.entries_from_meta(inst.meta)
        k = args.k if args.k is not None else int(inst.meta.get("k", 1))
        d = args.d if args.d is not None else inst.meta.get("d")
        if d is None:
            raise InputError("verify lowerbound needs --d (no 'd' in instance meta)")
        rep = lowerbounds.verify_lower_bound(inst.graph, entries, k, d).to_dict()
        if rep["ok"] and k == 1:
            pairs = [(v, X[0]) for v, X in entries]
            rep["d_comatching"] = validate_d_comatching(oracle, pairs, d).to_dict()
    else:
        fam = family_from_dict(_read_json(_need(args.family, "--family")))
        kind = {"semiladder": "semi-ladder"}.get(what, what)
        if fam.kind != kind:
            raise InputError(f"family file holds a {fam.kind!r}, not a {kind!r}")
        rep = dict(validate(oracle, fam).to_dict(), kind=fam.kind, size=len(fam))
    _emit(rep, args.out, args.format)
    return EXIT_OK if rep["ok"] else EXIT_FAIL


def _need(value, flag):
    if not value:
        raise InputError(f"missing {flag}")
    return value


# structures

def cmd_comatching(args):
    inst = _load(args.input)
    oracle = DistanceOracle(inst.graph)
    fam = max_comatching(oracle, args.eps, cap=args.cap)
    verdict = validate(oracle, fam)
    if not verdict:
        log.error("search result failed validation: %s", verdict.to_dict())
        return EXIT_FAIL
    _emit(fam.to_dict(), args.out)
    return EXIT_OK


def cmd_extract(args):
    data = _read_json(args.input)
    if "instance" in data:
        inst = Instance.from_dict(data["instance"])
        data = data.get("family", data)
    else:
        inst = _load(_need(args.graph, "--graph"))
    fam = family_from_dict(data)
    oracle = DistanceOracle(inst.graph)
    out = ramsey_extract(oracle, fam)
    payload = out.to_dict()
    payload["valid"] = bool(validate(oracle, out))
    _emit(payload, args.out)
    return EXIT_OK if payload["valid"] else EXIT_FAIL


def cmd_vc(args):
    inst = _load(args.input)
    ground = range(inst.graph.vertex_count) if args.ground == "all" else inst.points
    system = ball_system(DistanceOracle(inst.graph), ground)
    ok = vc_dim_at_most(system, args.d, cap=args.cap)
    _emit({"ok": bool(ok), "d": args.d, "sets": len(system),
           "universe": system.universe_size}, args.out, args.format)
    return EXIT_OK if ok else EXIT_FAIL


# sweep

def _sweep_row(size, trial, seed, method, eps):
    g = generators.grid(size, size, ("integer", 1, 5), seed)
    oracle = DistanceOracle(g)
    P = list(range(g.vertex_count))
    t0 = time.perf_counter()
    if method == "greedy":
        res = greedy_coreset(oracle, P, eps)
    else:
        res = lp_coreset(oracle, P, eps, seed=seed)
    wall = time.perf_counter() - t0
    return {"size": size, "trial": trial, "seed": seed, "n": g.vertex_count, "points": len(P),
            "method": method, "eps": eps, "Q": len(res.Q),
            "tau_sum": sum(b["tau_star"] for b in res.buckets), "buckets": len(res.buckets),
            "wall_time": round(wall, 6), "verified": bool(res.report and res.report["ok"])}


def cmd_sweep(args):
    eps_list = [float(x) for x in args.eps_list.split(",")]
    sizes = [int(x) for x in args.sizes.split(",")]
    methods = args.methods.split(",")
    bad = set(methods) - {"greedy", "lp"}
    if bad:
        raise InputError(f"unknown methods {sorted(bad)}")
    jobs = [(s, t, args.seed + t, m, e) for s in sizes for t in range(args.trials)
            for e in eps_list for m in methods]
    with ThreadPoolExecutor(threads()) as pool:
        rows = list(pool.map(lambda j: _sweep_row(*j), jobs))
    buf = io.StringIO()
    w = csv.DictWriter(buf, fieldnames=SWEEP_COLUMNS)
    w.writeheader()
    w.writerows(rows)
    if args.csv:
        Path(args.csv).write_text(buf.getvalue())
    else:
        sys.stdout.write(buf.getvalue())
    return EXIT_OK


def build_parser():
    p = argparse.ArgumentParser(prog="planar-coreset",
                                description="Furthest-neighbor and k-center coresets in planar metrics.")
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="command", required=True)

    g = sub.add_parser("gen", help="generate an instance JSON")
    g.add_argument("kind", choices=["grid", "subdiv", "soko", "treek", "planarkd"])
    g.add_argument("--w", type=int, default=10)
    g.add_argument("--h", type=int, default=10)
    g.add_argument("--weights", default="unit", help="unit | uniform:LO:HI | integer:LO:HI")
    g.add_argument("--points", default="all", help="all | half | M (random subset size)")
    g.add_argument("--rounds", type=int, default=10)
    g.add_argument("--k", type=int, default=3)
    g.add_argument("--d", type=int, default=3)
    g.add_argument("--seed", type=int, default=0)
    g.add_argument("--in", dest="input")
    g.add_argument("--out")
    g.set_defaults(func=cmd_gen)

    c = sub.add_parser("coreset", help="furthest-neighbor coreset")
    c.add_argument("method", choices=["greedy", "lp"])
    c.add_argument("--eps", type=float, required=True)
    c.add_argument("--seed", type=int, default=0)
    c.add_argument("--c", type=float, default=8.0, help="sample-size constant for rounding")
    c.add_argument("--in", dest="input", required=True)
    c.add_argument("--out")
    c.set_defaults(func=cmd_coreset)

    k = sub.add_parser("kcoreset", help="k-center coreset")
    k.add_argument("--k", type=int, required=True)
    k.add_argument("--eps", type=float, required=True)
    k.add_argument("--seed", type=int, default=0)
    k.add_argument("--c", type=float, default=8.0)
    k.add_argument("--n-cap", type=int, default=40)
    k.add_argument("--k-cap", type=int, default=2)
    k.add_argument("--in", dest="input", required=True)
    k.add_argument("--out")
    k.set_defaults(func=cmd_kcoreset)

    v = sub.add_parser("verify", help="certify a result or structure")
    v.add_argument("what", choices=["coreset", "kcoreset", "comatching", "ladder", "semiladder",
                                    "doubleladder", "kcomatching", "lowerbound"])
    v.add_argument("--in", dest="input", required=True, help="instance JSON")
    v.add_argument("--result", help="coreset result JSON")
    v.add_argument("--family", help="structure JSON")
    v.add_argument("--eps", type=float)
    v.add_argument("--k", type=int)
    v.add_argument("--d", type=float)
    v.add_argument("--format", choices=["json", "csv"], default="json")
    v.add_argument("--out")
    v.set_defaults(func=cmd_verify)

    m = sub.add_parser("comatching", help="exact maximum eps-comatching")
    m.add_argument("action", choices=["max"])
    m.add_argument("--eps", type=float, required=True)
    m.add_argument("--cap", type=int, default=2000)
    m.add_argument("--in", dest="input", required=True)
    m.add_argument("--out")
    m.set_defaults(func=cmd_comatching)

    e = sub.add_parser("extract", help="Ramsey extraction from a (k, eps)-comatching")
    e.add_argument("action", choices=["ramsey"])
    e.add_argument("--in", dest="input", required=True,
                   help="family JSON, optionally {'instance': ..., 'family': ...}")
    e.add_argument("--graph", help="instance JSON when the family file has none")
    e.add_argument("--out")
    e.set_defaults(func=cmd_extract)

    s = sub.add_parser("vc", help="exhaustive VC-dimension check of the ball system")
    s.add_argument("action", choices=["check"])
    s.add_argument("--d", type=int, default=4)
    s.add_argument("--ground", choices=["all", "points"], default="all")
    s.add_argument("--cap", type=int, default=30)
    s.add_argument("--in", dest="input", required=True)
    s.add_argument("--format", choices=["json", "csv"], default="json")
    s.add_argument("--out")
    s.set_defaults(func=cmd_vc)

    w = sub.add_parser("sweep", help="coreset sizes over grids, as CSV")
    w.add_argument("--eps-list", default="0.1,0.25,0.5")
    w.add_argument("--sizes", default="4,6,8")
    w.add_argument("--trials", type=int, default=1)
    w.add_argument("--methods", default="greedy,lp")
    w.add_argument("--seed", type=int, default=0)
    w.add_argument("--csv")
    w.set_defaults(func=cmd_sweep)
    return p


def main(argv=None):
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING,
                        format="%(levelname)s %(message)s")
    try:
        return args.func(args)
    except CapExceededError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CAP
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except (ConvergenceError, ExtractionError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())
